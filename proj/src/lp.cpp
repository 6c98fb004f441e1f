#include "freqsynth/lp.hpp"

#include <sstream>
#include <stdexcept>

namespace freqsynth {

int LinearProgram::add_variable(std::string name) {
  names_.resize(static_cast<std::size_t>(num_vars_));
  names_.push_back(std::move(name));
  return num_vars_++;
}

void LinearProgram::set_name(int var, std::string name) {
  if (names_.size() < static_cast<std::size_t>(num_vars_)) names_.resize(static_cast<std::size_t>(num_vars_));
  names_[static_cast<std::size_t>(var)] = std::move(name);
}

void LinearProgram::add_constraint(std::vector<std::pair<int, Rational>> terms, Sense sense,
                                   Rational rhs, std::string label) {
  for (const auto& [v, c] : terms)
    if (v < 0 || v >= num_vars_) throw std::out_of_range("constraint refers to an unknown variable");
  rows_.push_back({std::move(terms), sense, std::move(rhs)});
  labels_.push_back(std::move(label));
}

void LinearProgram::set_objective(std::vector<std::pair<int, Rational>> terms) {
  objective_ = std::move(terms);
}

namespace {

class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols)
      : t_(rows, std::vector<Rational>(cols + 1)), basis_(rows, -1), cols_(cols) {}

  std::vector<Rational>& row(std::size_t i) { return t_[i]; }
  std::size_t rows() const { return t_.size(); }
  std::vector<int>& basis() { return basis_; }

  void remove_row(std::size_t i) {
    t_.erase(t_.begin() + static_cast<std::ptrdiff_t>(i));
    basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(i));
  }

  // Maximises cost.x over the current basis using only `allowed` columns to
  // enter. Returns false when unbounded.
  bool optimise(const std::vector<Rational>& cost, const std::vector<bool>& allowed) {
    std::vector<Rational> d(cols_ + 1);
    for (std::size_t i = 0; i < rows(); ++i) {
      const Rational& cb = cost[static_cast<std::size_t>(basis_[i])];
      if (cb == 0) continue;
      for (std::size_t j = 0; j <= cols_; ++j)
        if (t_[i][j] != 0) d[j] += cb * t_[i][j];
    }
    for (std::size_t j = 0; j < cols_; ++j) d[j] -= cost[j];
    while (true) {
      std::size_t enter = cols_;
      for (std::size_t j = 0; j < cols_; ++j) {
        if (allowed[j] && d[j] < 0) {
          enter = j;
          break;
        }
      }
      if (enter == cols_) return true;
      std::size_t leave = rows();
      Rational best;
      for (std::size_t i = 0; i < rows(); ++i) {
        if (t_[i][enter] <= 0) continue;
        Rational ratio = t_[i][cols_] / t_[i][enter];
        if (leave == rows() || ratio < best || (ratio == best && basis_[i] < basis_[leave])) {
          leave = i;
          best = ratio;
        }
      }
      if (leave == rows()) return false;
      pivot(leave, enter, &d);
    }
  }

  void pivot(std::size_t r, std::size_t c, std::vector<Rational>* d = nullptr) {
    auto& pr = t_[r];
    Rational inv = 1 / pr[c];
    std::vector<std::size_t> nz;
    for (std::size_t j = 0; j <= cols_; ++j) {
      if (pr[j] != 0) {
        pr[j] *= inv;
        nz.push_back(j);
      }
    }
    auto eliminate = [&](std::vector<Rational>& row) {
      if (row[c] == 0) return;
      Rational f = row[c];
      for (std::size_t j : nz) row[j] -= f * pr[j];
    };
    for (std::size_t i = 0; i < rows(); ++i)
      if (i != r) eliminate(t_[i]);
    if (d) eliminate(*d);
    basis_[r] = static_cast<int>(c);
  }

 private:
  std::vector<std::vector<Rational>> t_;
  std::vector<int> basis_;
  std::size_t cols_;
};

}  // namespace

LpResult LinearProgram::solve() const {
  const std::size_t n = static_cast<std::size_t>(num_vars_);
  const std::size_t m = rows_.size();
  std::vector<Sense> sense(m);
  std::vector<int> sign(m, 1);
  std::size_t n_slack = 0, n_art = 0;
  for (std::size_t i = 0; i < m; ++i) {
    sense[i] = rows_[i].sense;
    if (rows_[i].rhs < 0) {
      sign[i] = -1;
      if (sense[i] == Sense::Le) sense[i] = Sense::Ge;
      else if (sense[i] == Sense::Ge) sense[i] = Sense::Le;
    }
    if (sense[i] != Sense::Eq) ++n_slack;
    if (sense[i] != Sense::Le) ++n_art;
  }
  const std::size_t cols = n + n_slack + n_art;
  Tableau tab(m, cols);
  std::size_t next_slack = n, next_art = n + n_slack;
  for (std::size_t i = 0; i < m; ++i) {
    auto& row = tab.row(i);
    for (const auto& [v, c] : rows_[i].terms) row[static_cast<std::size_t>(v)] += sign[i] * c;
    row[cols] = sign[i] * rows_[i].rhs;
    if (sense[i] == Sense::Le) {
      row[next_slack] = 1;
      tab.basis()[i] = static_cast<int>(next_slack++);
    } else {
      if (sense[i] == Sense::Ge) row[next_slack++] = -1;
      row[next_art] = 1;
      tab.basis()[i] = static_cast<int>(next_art++);
    }
  }

  LpResult result;
  std::vector<bool> allowed(cols, true);
  if (n_art > 0) {
    std::vector<Rational> phase1(cols);
    for (std::size_t j = n + n_slack; j < cols; ++j) phase1[j] = -1;
    tab.optimise(phase1, allowed);
    Rational infeas = 0;
    for (std::size_t i = 0; i < tab.rows(); ++i)
      if (static_cast<std::size_t>(tab.basis()[i]) >= n + n_slack) infeas += tab.row(i)[cols];
    if (infeas != 0) {
      result.status = LpStatus::Infeasible;
      return result;
    }
    for (std::size_t i = 0; i < tab.rows();) {
      if (static_cast<std::size_t>(tab.basis()[i]) < n + n_slack) {
        ++i;
        continue;
      }
      std::size_t j = 0;
      while (j < n + n_slack && tab.row(i)[j] == 0) ++j;
      if (j < n + n_slack) {
        tab.pivot(i, j);
        ++i;
      } else {
        tab.remove_row(i);
      }
    }
    for (std::size_t j = n + n_slack; j < cols; ++j) allowed[j] = false;
  }

  std::vector<Rational> cost(cols);
  for (const auto& [v, c] : objective_) cost[static_cast<std::size_t>(v)] += c;
  if (!tab.optimise(cost, allowed)) {
    result.status = LpStatus::Unbounded;
    return result;
  }
  result.status = LpStatus::Optimal;
  result.values.assign(n, Rational(0));
  for (std::size_t i = 0; i < tab.rows(); ++i) {
    auto b = static_cast<std::size_t>(tab.basis()[i]);
    if (b < n) result.values[b] = tab.row(i)[cols];
  }
  result.objective = 0;
  for (const auto& [v, c] : objective_) result.objective += c * result.values[static_cast<std::size_t>(v)];
  return result;
}

bool LinearProgram::satisfied_by(const std::vector<Rational>& x) const {
  if (x.size() != static_cast<std::size_t>(num_vars_)) return false;
  for (const auto& v : x)
    if (v < 0) return false;
  for (const auto& row : rows_) {
    Rational lhs = 0;
    for (const auto& [v, c] : row.terms) lhs += c * x[static_cast<std::size_t>(v)];
    bool ok = row.sense == Sense::Le ? lhs <= row.rhs : row.sense == Sense::Ge ? lhs >= row.rhs : lhs == row.rhs;
    if (!ok) return false;
  }
  return true;
}

std::string LinearProgram::to_text() const {
  std::ostringstream os;
  auto name = [&](int v) {
    auto i = static_cast<std::size_t>(v);
    return i < names_.size() && !names_[i].empty() ? names_[i] : "v" + std::to_string(v);
  };
  os << "maximize";
  if (objective_.empty()) os << " 0";
  for (const auto& [v, c] : objective_) os << " + " << to_string(c) << ' ' << name(v);
  os << "\nsubject to\n";
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    const auto& row = rows_[i];
    os << "  ";
    if (!labels_[i].empty()) os << labels_[i] << ": ";
    if (row.terms.empty()) os << '0';
    for (std::size_t k = 0; k < row.terms.size(); ++k)
      os << (k ? " + " : "") << to_string(row.terms[k].second) << ' ' << name(row.terms[k].first);
    os << (row.sense == Sense::Le ? " <= " : row.sense == Sense::Ge ? " >= " : " = ")
       << to_string(row.rhs) << '\n';
  }
  os << "  all variables >= 0\n";
  return os.str();
}

bool solve_linear_system(std::vector<std::vector<Rational>> a, std::vector<Rational> b,
                         std::vector<Rational>& x) {
  const std::size_t n = b.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t p = col;
    while (p < n && a[p][col] == 0) ++p;
    if (p == n) return false;
    std::swap(a[p], a[col]);
    std::swap(b[p], b[col]);
    Rational inv = 1 / a[col][col];
    for (std::size_t j = col; j < n; ++j) a[col][j] *= inv;
    b[col] *= inv;
    for (std::size_t i = 0; i < n; ++i) {
      if (i == col || a[i][col] == 0) continue;
      Rational f = a[i][col];
      for (std::size_t j = col; j < n; ++j)
        if (a[col][j] != 0) a[i][j] -= f * a[col][j];
      b[i] -= f * b[col];
    }
  }
  x = std::move(b);
  return true;
}

}  // namespace freqsynth
