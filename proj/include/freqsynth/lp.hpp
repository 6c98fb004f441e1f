#pragma once

#include "freqsynth/rational.hpp"

#include <string>
#include <utility>
#include <vector>

namespace freqsynth {

enum class Sense { Le, Ge, Eq };

struct LinearConstraint {
  std::vector<std::pair<int, Rational>> terms;
  Sense sense;
  Rational rhs;
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  std::vector<Rational> values;
  Rational objective;
};

// Maximise c.x subject to linear constraints and x >= 0, over exact
// rationals: two-phase tableau simplex with Bland's pivoting rule.
class LinearProgram {
 public:
  explicit LinearProgram(int num_vars = 0) : num_vars_(num_vars) {}

  int add_variable(std::string name = {});
  int num_variables() const { return num_vars_; }
  void set_name(int var, std::string name);
  void add_constraint(std::vector<std::pair<int, Rational>> terms, Sense sense, Rational rhs,
                      std::string label = {});
  void set_objective(std::vector<std::pair<int, Rational>> terms);

  const std::vector<LinearConstraint>& constraints() const { return rows_; }
  LpResult solve() const;
  // Exact check of every constraint for the given point.
  bool satisfied_by(const std::vector<Rational>& x) const;
  std::string to_text() const;

 private:
  int num_vars_;
  std::vector<std::string> names_;
  std::vector<LinearConstraint> rows_;
  std::vector<std::string> labels_;
  std::vector<std::pair<int, Rational>> objective_;
};

// Dense exact Gaussian elimination; returns false for singular systems.
bool solve_linear_system(std::vector<std::vector<Rational>> a, std::vector<Rational> b,
                         std::vector<Rational>& x);

}  // namespace freqsynth
