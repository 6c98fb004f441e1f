#include "freqsynth/formula.hpp"

#include <deque>
#include <mutex>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace freqsynth {

namespace detail {

struct Node {
  Op op;
  std::uint32_t id;
  std::string name;
  std::vector<Formula> kids;
  FreqBound bound;
};

class Store {
 public:
  static Store& instance() {
    static Store store;
    return store;
  }

  Formula intern(Op op, std::string name, std::vector<Formula> kids, FreqBound bound) {
    std::string key;
    key.push_back(static_cast<char>('A' + static_cast<int>(op)));
    key += name;
    for (Formula k : kids) {
      key.push_back(',');
      key += std::to_string(k.id());
    }
    if (op == Op::FreqAlways) {
      key += bound.cmp == Cmp::Geq ? "|>=" : "|>";
      key += bound.p.get_str();
      key += bound.ext == Ext::Inf ? "|i" : "|s";
    }
    std::lock_guard lock(mutex_);
    if (auto it = index_.find(key); it != index_.end()) return Formula(it->second);
    auto id = static_cast<std::uint32_t>(nodes_.size());
    nodes_.push_back(Node{op, id, std::move(name), std::move(kids), std::move(bound)});
    const Node* node = &nodes_.back();
    index_.emplace(std::move(key), node);
    return Formula(node);
  }

  Formula by_id(std::uint32_t id) {
    std::lock_guard lock(mutex_);
    if (id >= nodes_.size()) throw std::out_of_range("unknown formula id");
    return Formula(&nodes_[id]);
  }

 private:
  std::mutex mutex_;
  std::deque<Node> nodes_;
  std::unordered_map<std::string, const Node*> index_;
};

}  // namespace detail

Op Formula::op() const { return node_->op; }
std::uint32_t Formula::id() const { return node_->id; }
const std::string& Formula::atom() const { return node_->name; }
std::span<const Formula> Formula::children() const { return node_->kids; }
const FreqBound& Formula::bound() const { return node_->bound; }
Formula Formula::from_id(std::uint32_t id) { return detail::Store::instance().by_id(id); }

std::string to_string(Cmp c) { return c == Cmp::Geq ? ">=" : ">"; }
std::string to_string(Ext e) { return e == Ext::Inf ? "inf" : "sup"; }

bool compare(const Rational& lhs, Cmp cmp, const Rational& rhs) {
  return cmp == Cmp::Geq ? lhs >= rhs : lhs > rhs;
}

namespace {

Formula make(Op op, std::vector<Formula> kids = {}, std::string name = {}, FreqBound bound = {}) {
  return detail::Store::instance().intern(op, std::move(name), std::move(kids), std::move(bound));
}

Formula make_nary(Op op, std::vector<Formula> parts) {
  std::vector<Formula> flat;
  for (Formula p : parts) {
    if (p.op() == op) {
      auto kids = p.children();
      flat.insert(flat.end(), kids.begin(), kids.end());
    } else {
      flat.push_back(p);
    }
  }
  if (flat.empty()) return op == Op::And ? tt() : ff();
  if (flat.size() == 1) return flat.front();
  return make(op, std::move(flat));
}

void print(std::ostream& os, Formula f) {
  switch (f.op()) {
    case Op::True: os << "tt"; return;
    case Op::False: os << "ff"; return;
    case Op::Atom: os << f.atom(); return;
    case Op::NegAtom: os << '!' << f.atom(); return;
    case Op::Not: os << '!'; print(os, f.child()); return;
    case Op::And:
    case Op::Or: {
      const char* sep = f.op() == Op::And ? " & " : " | ";
      os << '(';
      bool first = true;
      for (Formula k : f.children()) {
        if (!first) os << sep;
        first = false;
        print(os, k);
      }
      os << ')';
      return;
    }
    case Op::Next: os << "X "; print(os, f.child()); return;
    case Op::Eventually: os << "F "; print(os, f.child()); return;
    case Op::Always: os << "G "; print(os, f.child()); return;
    case Op::Until:
      os << '(';
      print(os, f.left());
      os << " U ";
      print(os, f.right());
      os << ')';
      return;
    case Op::FreqAlways: {
      const auto& b = f.bound();
      os << "G{" << to_string(b.cmp) << b.p.get_num().get_str() << '/' << b.p.get_den().get_str()
         << ',' << to_string(b.ext) << "} ";
      print(os, f.child());
      return;
    }
  }
}

void collect_atoms(Formula f, std::set<std::string>& out) {
  if (f.is_literal()) out.insert(f.atom());
  for (Formula k : f.children()) collect_atoms(k, out);
}

}  // namespace

Formula tt() { return make(Op::True); }
Formula ff() { return make(Op::False); }
Formula atom(const std::string& name) { return make(Op::Atom, {}, name); }
Formula neg_atom(const std::string& name) { return make(Op::NegAtom, {}, name); }
Formula negation(Formula f) { return make(Op::Not, {f}); }
Formula conj(std::vector<Formula> parts) { return make_nary(Op::And, std::move(parts)); }
Formula conj(Formula a, Formula b) { return conj(std::vector<Formula>{a, b}); }
Formula disj(std::vector<Formula> parts) { return make_nary(Op::Or, std::move(parts)); }
Formula disj(Formula a, Formula b) { return disj(std::vector<Formula>{a, b}); }
Formula next(Formula f) { return make(Op::Next, {f}); }
Formula until(Formula lhs, Formula rhs) { return make(Op::Until, {lhs, rhs}); }
Formula eventually(Formula f) { return make(Op::Eventually, {f}); }
Formula always(Formula f) { return make(Op::Always, {f}); }

Formula freq_always(const FreqBound& bound, Formula f) {
  if (bound.p < 0 || bound.p > 1) throw std::invalid_argument("frequency bound outside [0,1]");
  return make(Op::FreqAlways, {f}, {}, bound);
}

std::string to_string(Formula f) {
  std::ostringstream os;
  print(os, f);
  return os.str();
}

std::ostream& operator<<(std::ostream& os, Formula f) {
  print(os, f);
  return os;
}

std::vector<std::string> atoms_of(Formula f) {
  std::set<std::string> out;
  collect_atoms(f, out);
  return {out.begin(), out.end()};
}

std::size_t formula_size(Formula f) {
  std::size_t n = 1;
  for (Formula k : f.children()) n += formula_size(k);
  return n;
}

}  // namespace freqsynth
