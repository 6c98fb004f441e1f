#pragma once

#include "freqsynth/formula.hpp"

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace freqsynth {

// Monotone Boolean function over non-Boolean formulas, stored as the
// antichain of its minimal models. Each model is a sorted list of formula
// ids; the model list is sorted, so equal functions have equal storage.
class BoolFn {
 public:
  using Var = std::uint32_t;
  using Model = std::vector<Var>;

  BoolFn() = default;  // ff
  static BoolFn constant(bool value);
  static BoolFn top() { return constant(true); }
  static BoolFn bottom() { return constant(false); }
  // Constants map to top/bottom; any other non-Boolean formula becomes a variable.
  static BoolFn variable(Formula f);
  static BoolFn from_models(std::vector<Model> models);

  const std::vector<Model>& models() const { return models_; }
  bool is_true() const { return models_.size() == 1 && models_.front().empty(); }
  bool is_false() const { return models_.empty(); }

  friend BoolFn operator&(const BoolFn& a, const BoolFn& b);
  friend BoolFn operator|(const BoolFn& a, const BoolFn& b);

  std::vector<Formula> variables() const;

  // True when the assignment making exactly `vars` true satisfies the function.
  bool holds_under(std::span<const Var> sorted_vars) const;
  // Every model of *this satisfies `goal`.
  bool entails(const BoolFn& goal) const;

  // Replaces every variable v by f(v).
  BoolFn substitute(const std::function<BoolFn(Var)>& f) const;
  BoolFn assume_true(std::span<const Var> sorted_vars) const;
  BoolFn assume_false(std::span<const Var> sorted_vars) const;

  Formula to_formula() const;
  std::string to_string() const;
  std::size_t hash() const;

  friend bool operator==(const BoolFn&, const BoolFn&) = default;
  friend auto operator<=>(const BoolFn& a, const BoolFn& b) { return a.models_ <=> b.models_; }

 private:
  explicit BoolFn(std::vector<Model> models) : models_(std::move(models)) {}
  static void minimize(std::vector<Model>& models);

  std::vector<Model> models_;
};

std::ostream& operator<<(std::ostream& os, const BoolFn& f);

}  // namespace freqsynth

template <>
struct std::hash<freqsynth::BoolFn> {
  std::size_t operator()(const freqsynth::BoolFn& f) const noexcept { return f.hash(); }
};
