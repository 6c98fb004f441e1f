#include "freqsynth/calculus.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace freqsynth {

namespace {

bool fragment_rec(Formula f, bool under_g) {
  switch (f.op()) {
    case Op::Not: return false;
    case Op::Until:
      if (under_g) return false;
      break;
    case Op::Always:
    case Op::FreqAlways: under_g = true; break;
    default: break;
  }
  for (Formula k : f.children())
    if (!fragment_rec(k, under_g)) return false;
  return true;
}

Formula nnf(Formula f, bool neg) {
  auto map_kids = [&](bool n) {
    std::vector<Formula> out;
    for (Formula k : f.children()) out.push_back(nnf(k, n));
    return out;
  };
  switch (f.op()) {
    case Op::True: return neg ? ff() : tt();
    case Op::False: return neg ? tt() : ff();
    case Op::Atom: return neg ? neg_atom(f.atom()) : f;
    case Op::NegAtom: return neg ? atom(f.atom()) : f;
    case Op::Not: return nnf(f.child(), !neg);
    case Op::And: return neg ? disj(map_kids(true)) : conj(map_kids(false));
    case Op::Or: return neg ? conj(map_kids(true)) : disj(map_kids(false));
    case Op::Next: return next(nnf(f.child(), neg));
    case Op::Eventually:
      return neg ? always(nnf(f.child(), true)) : eventually(nnf(f.child(), false));
    case Op::Always:
      return neg ? eventually(nnf(f.child(), true)) : always(nnf(f.child(), false));
    case Op::Until: {
      if (!neg) return until(nnf(f.left(), false), nnf(f.right(), false));
      // !(l U r) == (!r U (!l & !r)) | G !r
      Formula nl = nnf(f.left(), true);
      Formula nr = nnf(f.right(), true);
      return disj(until(nr, conj(nl, nr)), always(nr));
    }
    case Op::FreqAlways: {
      if (!neg) return freq_always(f.bound(), nnf(f.child(), false));
      const FreqBound& b = f.bound();
      FreqBound d{b.cmp == Cmp::Geq ? Cmp::Gt : Cmp::Geq, Rational(1 - b.p),
                  b.ext == Ext::Inf ? Ext::Sup : Ext::Inf};
      return freq_always(d, nnf(f.child(), true));
    }
  }
  throw std::logic_error("unreachable");
}

void collect_nb(Formula f, std::unordered_set<std::uint32_t>& seen, std::vector<Formula>& out) {
  if (!f.is_boolean() && !f.is_constant() && seen.insert(f.id()).second) out.push_back(f);
  for (Formula k : f.children()) collect_nb(k, seen, out);
}

}  // namespace

bool in_fragment(Formula f) { return fragment_rec(f, false); }

Formula push_negation(Formula f) { return nnf(f, false); }

std::vector<Formula> nb_subformulas(Formula f) {
  std::unordered_set<std::uint32_t> seen;
  std::vector<Formula> out;
  collect_nb(f, seen, out);
  return out;
}

BoolFn to_boolfn(Formula f) {
  thread_local std::unordered_map<std::uint32_t, BoolFn> cache;
  if (auto it = cache.find(f.id()); it != cache.end()) return it->second;
  BoolFn r;
  if (f.op() == Op::And) {
    r = BoolFn::top();
    for (Formula k : f.children()) r = r & to_boolfn(k);
  } else if (f.op() == Op::Or) {
    r = BoolFn::bottom();
    for (Formula k : f.children()) r = r | to_boolfn(k);
  } else {
    r = BoolFn::variable(f);
  }
  cache.emplace(f.id(), r);
  return r;
}

BoolFn unfold(Formula f) {
  thread_local std::unordered_map<std::uint32_t, BoolFn> cache;
  if (auto it = cache.find(f.id()); it != cache.end()) return it->second;
  BoolFn r;
  switch (f.op()) {
    case Op::And:
      r = BoolFn::top();
      for (Formula k : f.children()) r = r & unfold(k);
      break;
    case Op::Or:
      r = BoolFn::bottom();
      for (Formula k : f.children()) r = r | unfold(k);
      break;
    case Op::Eventually: r = unfold(f.child()) | BoolFn::variable(next(f)); break;
    case Op::Always: r = unfold(f.child()) & BoolFn::variable(next(f)); break;
    case Op::Until:
      r = unfold(f.right()) | (unfold(f.left()) & BoolFn::variable(next(f)));
      break;
    case Op::FreqAlways: r = BoolFn::variable(next(f)); break;
    case Op::Not: throw std::invalid_argument("unfold expects a formula in negation normal form");
    default: r = BoolFn::variable(f); break;
  }
  cache.emplace(f.id(), r);
  return r;
}

BoolFn unfold(const BoolFn& f) {
  return f.substitute([](BoolFn::Var v) { return unfold(Formula::from_id(v)); });
}

BoolFn step(Formula f, const Alphabet& alphabet, Letter letter) {
  switch (f.op()) {
    case Op::Atom: return BoolFn::constant(alphabet.holds(letter, f.atom()));
    case Op::NegAtom: return BoolFn::constant(!alphabet.holds(letter, f.atom()));
    case Op::Next: return to_boolfn(f.child());
    case Op::And: {
      BoolFn r = BoolFn::top();
      for (Formula k : f.children()) r = r & step(k, alphabet, letter);
      return r;
    }
    case Op::Or: {
      BoolFn r = BoolFn::bottom();
      for (Formula k : f.children()) r = r | step(k, alphabet, letter);
      return r;
    }
    default: return BoolFn::variable(f);
  }
}

BoolFn step(const BoolFn& f, const Alphabet& alphabet, Letter letter) {
  return f.substitute(
      [&](BoolFn::Var v) { return step(Formula::from_id(v), alphabet, letter); });
}

bool proves(std::span<const BoolFn> assumptions, const BoolFn& goal) {
  if (goal.is_true()) return true;
  BoolFn all = BoolFn::top();
  for (const auto& a : assumptions) {
    all = all & a;
    if (all.is_false()) return true;
  }
  return all.entails(goal);
}

bool proves(std::span<const Formula> assumptions, const BoolFn& goal) {
  bool plain = std::all_of(assumptions.begin(), assumptions.end(),
                           [](Formula f) { return !f.is_boolean() && !f.is_constant(); });
  if (plain) {
    auto ids = id_set(assumptions);
    return goal.holds_under(ids);
  }
  std::vector<BoolFn> fns;
  for (Formula f : assumptions) fns.push_back(to_boolfn(f));
  return proves(std::span<const BoolFn>(fns), goal);
}

BoolFn substitute_ff(const BoolFn& f, std::span<const Formula> removed) {
  auto ids = id_set(removed);
  return f.assume_false(ids);
}

std::vector<BoolFn::Var> id_set(std::span<const Formula> formulas) {
  std::vector<BoolFn::Var> ids;
  ids.reserve(formulas.size());
  for (Formula f : formulas) ids.push_back(f.id());
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  return ids;
}

}  // namespace freqsynth
