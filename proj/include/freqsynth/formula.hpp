#pragma once

#include "freqsynth/rational.hpp"

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace freqsynth {

enum class Op : std::uint8_t {
  True,
  False,
  Atom,
  NegAtom,
  Not,  // only present in trees that have not been through push_negation
  And,
  Or,
  Next,
  Until,
  Eventually,
  Always,
  FreqAlways,
};

enum class Cmp : std::uint8_t { Geq, Gt };
enum class Ext : std::uint8_t { Inf, Sup };

struct FreqBound {
  Cmp cmp = Cmp::Geq;
  Rational p;
  Ext ext = Ext::Inf;

  friend bool operator==(const FreqBound& a, const FreqBound& b) {
    return a.cmp == b.cmp && a.ext == b.ext && a.p == b.p;
  }
};

std::string to_string(Cmp c);
std::string to_string(Ext e);
bool compare(const Rational& lhs, Cmp cmp, const Rational& rhs);

namespace detail {
struct Node;
class Store;
}  // namespace detail

// Handle to a hash-consed formula node. Structurally equal formulas share a
// node, so equality is pointer equality and ids are stable for the process.
class Formula {
 public:
  Formula() = default;

  bool valid() const { return node_ != nullptr; }
  Op op() const;
  std::uint32_t id() const;
  const std::string& atom() const;
  std::span<const Formula> children() const;
  Formula child(std::size_t i = 0) const { return children()[i]; }
  Formula left() const { return children()[0]; }
  Formula right() const { return children()[1]; }
  const FreqBound& bound() const;

  bool is_boolean() const { return op() == Op::And || op() == Op::Or; }
  bool is_constant() const { return op() == Op::True || op() == Op::False; }
  bool is_literal() const { return op() == Op::Atom || op() == Op::NegAtom; }

  static Formula from_id(std::uint32_t id);

  friend bool operator==(Formula a, Formula b) { return a.node_ == b.node_; }
  friend bool operator<(Formula a, Formula b) { return a.id() < b.id(); }

 private:
  explicit Formula(const detail::Node* node) : node_(node) {}
  const detail::Node* node_ = nullptr;
  friend class detail::Store;
};

Formula tt();
Formula ff();
Formula atom(const std::string& name);
Formula neg_atom(const std::string& name);
Formula negation(Formula f);
Formula conj(std::vector<Formula> parts);
Formula conj(Formula a, Formula b);
Formula disj(std::vector<Formula> parts);
Formula disj(Formula a, Formula b);
Formula next(Formula f);
Formula until(Formula lhs, Formula rhs);
Formula eventually(Formula f);
Formula always(Formula f);
Formula freq_always(const FreqBound& bound, Formula f);

std::string to_string(Formula f);
std::ostream& operator<<(std::ostream& os, Formula f);

std::vector<std::string> atoms_of(Formula f);
std::size_t formula_size(Formula f);

}  // namespace freqsynth

template <>
struct std::hash<freqsynth::Formula> {
  std::size_t operator()(freqsynth::Formula f) const noexcept { return f.id(); }
};
