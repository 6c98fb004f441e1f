#include "freqsynth/boolfn.hpp"

#include <algorithm>
#include <ostream>
#include <stdexcept>

namespace freqsynth {

BoolFn BoolFn::constant(bool value) {
  return value ? BoolFn(std::vector<Model>{Model{}}) : BoolFn();
}

BoolFn BoolFn::variable(Formula f) {
  if (f.op() == Op::True) return top();
  if (f.op() == Op::False) return bottom();
  if (f.is_boolean()) throw std::invalid_argument("Boolean formula used as a variable");
  return BoolFn(std::vector<Model>{Model{f.id()}});
}

BoolFn BoolFn::from_models(std::vector<Model> models) {
  for (auto& m : models) {
    std::sort(m.begin(), m.end());
    m.erase(std::unique(m.begin(), m.end()), m.end());
  }
  minimize(models);
  return BoolFn(std::move(models));
}

void BoolFn::minimize(std::vector<Model>& models) {
  std::sort(models.begin(), models.end(), [](const Model& a, const Model& b) {
    return a.size() != b.size() ? a.size() < b.size() : a < b;
  });
  models.erase(std::unique(models.begin(), models.end()), models.end());
  std::vector<Model> kept;
  kept.reserve(models.size());
  for (auto& m : models) {
    bool dominated = false;
    for (const auto& k : kept) {
      if (k.size() < m.size() && std::includes(m.begin(), m.end(), k.begin(), k.end())) {
        dominated = true;
        break;
      }
    }
    if (!dominated) kept.push_back(std::move(m));
  }
  std::sort(kept.begin(), kept.end());
  models = std::move(kept);
}

BoolFn operator&(const BoolFn& a, const BoolFn& b) {
  if (a.is_false() || b.is_true()) return a;
  if (b.is_false() || a.is_true()) return b;
  std::vector<BoolFn::Model> out;
  out.reserve(a.models_.size() * b.models_.size());
  for (const auto& x : a.models_) {
    for (const auto& y : b.models_) {
      BoolFn::Model m;
      m.reserve(x.size() + y.size());
      std::set_union(x.begin(), x.end(), y.begin(), y.end(), std::back_inserter(m));
      out.push_back(std::move(m));
    }
  }
  BoolFn::minimize(out);
  return BoolFn(std::move(out));
}

BoolFn operator|(const BoolFn& a, const BoolFn& b) {
  if (a.is_true() || b.is_false()) return a;
  if (b.is_true() || a.is_false()) return b;
  std::vector<BoolFn::Model> out = a.models_;
  out.insert(out.end(), b.models_.begin(), b.models_.end());
  BoolFn::minimize(out);
  return BoolFn(std::move(out));
}

std::vector<Formula> BoolFn::variables() const {
  std::vector<Var> ids;
  for (const auto& m : models_) ids.insert(ids.end(), m.begin(), m.end());
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  std::vector<Formula> out;
  out.reserve(ids.size());
  for (Var v : ids) out.push_back(Formula::from_id(v));
  return out;
}

bool BoolFn::holds_under(std::span<const Var> sorted_vars) const {
  for (const auto& m : models_)
    if (std::includes(sorted_vars.begin(), sorted_vars.end(), m.begin(), m.end())) return true;
  return false;
}

bool BoolFn::entails(const BoolFn& goal) const {
  for (const auto& m : models_)
    if (!goal.holds_under(m)) return false;
  return true;
}

BoolFn BoolFn::substitute(const std::function<BoolFn(Var)>& f) const {
  BoolFn result = bottom();
  for (const auto& m : models_) {
    BoolFn term = top();
    for (Var v : m) {
      term = term & f(v);
      if (term.is_false()) break;
    }
    result = result | term;
    if (result.is_true()) break;
  }
  return result;
}

BoolFn BoolFn::assume_true(std::span<const Var> sorted_vars) const {
  std::vector<Model> out;
  out.reserve(models_.size());
  for (const auto& m : models_) {
    Model r;
    std::set_difference(m.begin(), m.end(), sorted_vars.begin(), sorted_vars.end(),
                        std::back_inserter(r));
    out.push_back(std::move(r));
  }
  minimize(out);
  return BoolFn(std::move(out));
}

BoolFn BoolFn::assume_false(std::span<const Var> sorted_vars) const {
  std::vector<Model> out;
  for (const auto& m : models_) {
    bool hit = false;
    for (Var v : m) {
      if (std::binary_search(sorted_vars.begin(), sorted_vars.end(), v)) {
        hit = true;
        break;
      }
    }
    if (!hit) out.push_back(m);
  }
  return BoolFn(std::move(out));
}

Formula BoolFn::to_formula() const {
  std::vector<Formula> terms;
  for (const auto& m : models_) {
    std::vector<Formula> lits;
    for (Var v : m) lits.push_back(Formula::from_id(v));
    terms.push_back(conj(std::move(lits)));
  }
  return disj(std::move(terms));
}

std::string BoolFn::to_string() const {
  if (is_false()) return "ff";
  if (is_true()) return "tt";
  std::string s;
  for (std::size_t i = 0; i < models_.size(); ++i) {
    if (i) s += " | ";
    const auto& m = models_[i];
    bool paren = m.size() > 1 && models_.size() > 1;
    if (paren) s += '(';
    for (std::size_t j = 0; j < m.size(); ++j) {
      if (j) s += " & ";
      s += freqsynth::to_string(Formula::from_id(m[j]));
    }
    if (paren) s += ')';
  }
  return s;
}

std::size_t BoolFn::hash() const {
  std::size_t h = 0x9e3779b97f4a7c15ULL;
  for (const auto& m : models_) {
    for (Var v : m) h = (h ^ v) * 0x100000001b3ULL;
    h = (h ^ 0xffffULL) * 0x100000001b3ULL;
  }
  return h;
}

std::ostream& operator<<(std::ostream& os, const BoolFn& f) { return os << f.to_string(); }

}  // namespace freqsynth
