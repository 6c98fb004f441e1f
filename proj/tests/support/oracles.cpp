#include "oracles.hpp"

#include "freqsynth/calculus.hpp"
#include "freqsynth/lasso.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <stdexcept>

namespace oracle {

using namespace freqsynth;

std::optional<std::vector<Rational>> solve(Matrix a, std::vector<Rational> b) {
  const std::size_t n = b.size();
  std::size_t row = 0;
  for (std::size_t col = 0; col < n && row < n; ++col) {
    std::size_t p = row;
    while (p < n && a[p][col] == 0) ++p;
    if (p == n) return std::nullopt;
    std::swap(a[p], a[row]);
    std::swap(b[p], b[row]);
    for (std::size_t i = row + 1; i < n; ++i) {
      if (a[i][col] == 0) continue;
      Rational f = a[i][col] / a[row][col];
      for (std::size_t j = col; j < n; ++j)
        if (a[row][j] != 0) a[i][j] -= f * a[row][j];
      b[i] -= f * b[row];
    }
    ++row;
  }
  std::vector<Rational> x(n);
  for (std::size_t i = n; i-- > 0;) {
    Rational s = b[i];
    for (std::size_t j = i + 1; j < n; ++j)
      if (a[i][j] != 0) s -= a[i][j] * x[j];
    x[i] = s / a[i][i];
  }
  return x;
}

namespace {

std::vector<std::vector<bool>> reach_closure(const Matrix& p) {
  const std::size_t n = p.size();
  std::vector<std::vector<bool>> r(n, std::vector<bool>(n));
  for (std::size_t s = 0; s < n; ++s) {
    std::vector<std::size_t> stack{s};
    r[s][s] = true;
    while (!stack.empty()) {
      std::size_t u = stack.back();
      stack.pop_back();
      for (std::size_t t = 0; t < n; ++t) {
        if (p[u][t] != 0 && !r[s][t]) {
          r[s][t] = true;
          stack.push_back(t);
        }
      }
    }
  }
  return r;
}

}  // namespace

std::vector<std::vector<int>> bottom_sccs(const Matrix& p) {
  const std::size_t n = p.size();
  auto r = reach_closure(p);
  std::vector<std::vector<int>> out;
  std::vector<bool> done(n);
  for (std::size_t s = 0; s < n; ++s) {
    if (done[s]) continue;
    // s is in a bottom class iff everything it reaches reaches it back.
    bool bottom = true;
    for (std::size_t t = 0; t < n && bottom; ++t)
      if (r[s][t] && !r[t][s]) bottom = false;
    if (!bottom) continue;
    std::vector<int> cls;
    for (std::size_t t = 0; t < n; ++t) {
      if (r[s][t]) {
        cls.push_back(static_cast<int>(t));
        done[t] = true;
      }
    }
    out.push_back(std::move(cls));
  }
  return out;
}

std::vector<Rational> stationary(const Matrix& p, const std::vector<int>& cls) {
  const std::size_t k = cls.size();
  // pi (P - I) = 0 with the last balance equation replaced by sum pi = 1.
  Matrix a(k, std::vector<Rational>(k));
  std::vector<Rational> b(k);
  for (std::size_t j = 0; j + 1 < k; ++j) {
    for (std::size_t i = 0; i < k; ++i)
      a[j][i] = p[static_cast<std::size_t>(cls[i])][static_cast<std::size_t>(cls[j])];
    a[j][j] -= 1;
  }
  for (std::size_t i = 0; i < k; ++i) a[k - 1][i] = 1;
  b[k - 1] = 1;
  auto x = solve(std::move(a), std::move(b));
  if (!x) throw std::logic_error("stationary system is singular");
  return *x;
}

std::vector<Rational> absorption(const Matrix& p, const std::vector<bool>& good) {
  const std::size_t n = p.size();
  auto r = reach_closure(p);
  std::vector<bool> can(n);
  for (std::size_t s = 0; s < n; ++s)
    for (std::size_t t = 0; t < n; ++t)
      if (good[t] && r[s][t]) can[s] = true;
  std::vector<int> idx(n, -1);
  std::vector<std::size_t> open;
  for (std::size_t s = 0; s < n; ++s) {
    if (!good[s] && can[s]) {
      idx[s] = static_cast<int>(open.size());
      open.push_back(s);
    }
  }
  std::vector<Rational> value(n);
  for (std::size_t s = 0; s < n; ++s) value[s] = good[s] ? 1 : 0;
  if (open.empty()) return value;
  Matrix a(open.size(), std::vector<Rational>(open.size()));
  std::vector<Rational> b(open.size());
  for (std::size_t i = 0; i < open.size(); ++i) {
    a[i][i] = 1;
    for (std::size_t t = 0; t < n; ++t) {
      if (p[open[i]][t] == 0) continue;
      if (good[t]) b[i] += p[open[i]][t];
      else if (idx[t] >= 0) a[i][static_cast<std::size_t>(idx[t])] -= p[open[i]][t];
    }
  }
  auto x = solve(std::move(a), std::move(b));
  if (!x) throw std::logic_error("absorption system is singular");
  for (std::size_t i = 0; i < open.size(); ++i) value[open[i]] = (*x)[i];
  return value;
}

Matrix induced_chain(const Mdp& m, const std::vector<int>& choice) {
  const std::size_t n = m.state_names.size();
  Matrix p(n, std::vector<Rational>(n));
  for (std::size_t s = 0; s < n; ++s)
    for (const auto& t : m.actions[static_cast<std::size_t>(choice[s])].successors)
      p[s][static_cast<std::size_t>(t.target)] += t.probability;
  return p;
}

namespace {

bool holds_on_class(const Matrix& p, const std::vector<int>& cls, const GbmpCondition& cond) {
  for (const auto& inf : cond.infs) {
    bool hit = false;
    for (int s : cls) hit = hit || inf[static_cast<std::size_t>(s)];
    if (!hit) return false;
  }
  auto pi = stationary(p, cls);
  auto check = [&](const MpConstraint& c) {
    Rational avg = 0;
    for (std::size_t i = 0; i < cls.size(); ++i) avg += pi[i] * c.reward[static_cast<std::size_t>(cls[i])];
    return c.cmp == Cmp::Geq ? avg >= c.bound : avg > c.bound;
  };
  for (const auto& c : cond.mp_inf)
    if (!check(c)) return false;
  for (const auto& c : cond.mp_sup)
    if (!check(c)) return false;
  return true;
}

}  // namespace

bool md_strategy_exists(const Mdp& m, const GbmpCondition& cond) {
  const std::size_t n = m.state_names.size();
  std::vector<std::vector<int>> options(n);
  for (std::size_t i = 0; i < m.actions.size(); ++i)
    options[static_cast<std::size_t>(m.actions[i].state)].push_back(static_cast<int>(i));
  std::vector<std::size_t> digit(n, 0);
  while (true) {
    std::vector<int> choice(n);
    for (std::size_t s = 0; s < n; ++s) choice[s] = options[s][digit[s]];
    Matrix p = induced_chain(m, choice);
    for (const auto& cls : bottom_sccs(p))
      if (holds_on_class(p, cls, cond)) return true;
    std::size_t s = 0;
    while (s < n && ++digit[s] == options[s].size()) digit[s++] = 0;
    if (s == n) return false;
  }
}

Rational chain_probability(const Mdp& chain, const Valuation& valuation, const Dgrma& a) {
  const auto& sigma = a.lts.alphabet;
  auto letter_of = [&](int s) {
    Letter l = 0;
    for (std::size_t i = 0; i < sigma.atoms().size(); ++i) {
      const auto& labels = valuation[static_cast<std::size_t>(s)];
      if (std::find(labels.begin(), labels.end(), sigma.atoms()[i]) != labels.end()) l |= Letter{1} << i;
    }
    return l;
  };
  // Product chain: (s, q) where q has read the label of s.
  std::map<std::pair<int, int>, int> index;
  std::vector<std::pair<int, int>> states;
  auto add = [&](int s, int q) {
    auto [it, fresh] = index.emplace(std::make_pair(s, q), static_cast<int>(states.size()));
    if (fresh) states.emplace_back(s, q);
    return it->second;
  };
  add(chain.initial, a.lts.successor(a.lts.initial, letter_of(chain.initial)));
  std::vector<std::vector<std::pair<int, Rational>>> edges;
  for (std::size_t i = 0; i < states.size(); ++i) {
    auto [s, q] = states[i];
    const auto& act = chain.actions[static_cast<std::size_t>(chain.enabled[static_cast<std::size_t>(s)].at(0))];
    std::vector<std::pair<int, Rational>> out;
    for (const auto& t : act.successors)
      out.emplace_back(add(t.target, a.lts.successor(q, letter_of(t.target))), t.probability);
    edges.push_back(std::move(out));
  }
  const std::size_t n = states.size();
  Matrix p(n, std::vector<Rational>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (const auto& [j, pr] : edges[i]) p[i][static_cast<std::size_t>(j)] += pr;

  std::vector<bool> good(n);
  for (const auto& cls : bottom_sccs(p)) {
    auto pi = stationary(p, cls);
    bool accepted = false;
    for (const auto& pair : a.pairs) {
      bool ok = true;
      for (int s : cls) ok = ok && !pair.fin[static_cast<std::size_t>(states[static_cast<std::size_t>(s)].second)];
      for (const auto& inf : pair.infs) {
        bool hit = false;
        for (int s : cls) hit = hit || inf[static_cast<std::size_t>(states[static_cast<std::size_t>(s)].second)];
        ok = ok && hit;
      }
      for (const auto& mp : pair.mps) {
        Rational avg = 0;
        for (std::size_t i = 0; i < cls.size(); ++i)
          avg += pi[i] * mp.reward[static_cast<std::size_t>(states[static_cast<std::size_t>(cls[i])].second)];
        ok = ok && (mp.cmp == Cmp::Geq ? avg >= mp.p : avg > mp.p);
      }
      if (ok) {
        accepted = true;
        break;
      }
    }
    if (accepted)
      for (int s : cls) good[static_cast<std::size_t>(s)] = true;
  }
  return absorption(p, good)[0];
}

Formula random_formula(std::mt19937_64& rng, int size, const std::vector<std::string>& atoms, bool allow_until) {
  std::function<Formula(int, bool)> gen = [&](int budget, bool under_g) -> Formula {
    auto pick = [&](int k) { return static_cast<int>(rng() % static_cast<std::uint64_t>(k)); };
    if (budget <= 1) {
      int r = pick(10);
      if (r == 0) return tt();
      if (r == 1) return ff();
      const auto& a = atoms[static_cast<std::size_t>(pick(static_cast<int>(atoms.size())))];
      return r < 7 ? atom(a) : neg_atom(a);
    }
    bool until_ok = allow_until && !under_g && budget >= 3;
    int r = pick(until_ok ? 8 : 7);
    switch (r) {
      case 0: return next(gen(budget - 1, under_g));
      case 1: return eventually(gen(budget - 1, under_g));
      case 2: return always(gen(budget - 1, true));
      case 3: {
        static const Rational ps[] = {Rational(0), Rational(1, 4), Rational(1, 3), Rational(1, 2),
                                      Rational(2, 3), Rational(3, 4), Rational(1)};
        FreqBound b{pick(2) ? Cmp::Geq : Cmp::Gt, ps[pick(7)], pick(2) ? Ext::Inf : Ext::Sup};
        return freq_always(b, gen(budget - 1, true));
      }
      default: {
        if (budget < 3) return next(gen(budget - 1, under_g));
        int left = 1 + pick(budget - 2);
        Formula l = gen(left, under_g);
        Formula rr = gen(budget - 1 - left, under_g);
        if (r == 7) return until(l, rr);
        return r % 2 ? conj(l, rr) : disj(l, rr);
      }
    }
  };
  return gen(size, false);
}

namespace {

Rational fraction(long num, long den) {
  Rational q(num, den);
  q.canonicalize();
  return q;
}

bool strongly_connected(const Mdp& m) {
  const std::size_t n = m.state_names.size();
  Matrix p(n, std::vector<Rational>(n));
  for (const auto& a : m.actions)
    for (const auto& t : a.successors) p[static_cast<std::size_t>(a.state)][static_cast<std::size_t>(t.target)] = 1;
  auto r = reach_closure(p);
  for (std::size_t s = 0; s < n; ++s)
    for (std::size_t t = 0; t < n; ++t)
      if (!r[s][t]) return false;
  return true;
}

std::vector<Transition> random_distribution(std::mt19937_64& rng, int n) {
  int k = 1 + static_cast<int>(rng() % 2);
  std::vector<int> targets;
  while (static_cast<int>(targets.size()) < std::min(k, n)) {
    int t = static_cast<int>(rng() % static_cast<std::uint64_t>(n));
    if (std::find(targets.begin(), targets.end(), t) == targets.end()) targets.push_back(t);
  }
  std::sort(targets.begin(), targets.end());
  std::vector<Transition> out;
  if (targets.size() == 1) {
    out.push_back({targets[0], Rational(1)});
  } else {
    Rational p = fraction(static_cast<long>(1 + rng() % 3), 4);
    out.push_back({targets[0], p});
    out.push_back({targets[1], 1 - p});
  }
  return out;
}

}  // namespace

Mdp random_strongly_connected_mdp(std::mt19937_64& rng, int max_states, int max_actions) {
  while (true) {
    Mdp m;
    int n = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(max_states));
    for (int s = 0; s < n; ++s) m.add_state("s" + std::to_string(s));
    for (int s = 0; s < n; ++s) {
      int k = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(max_actions));
      for (int a = 0; a < k; ++a) m.add_action(s, "a" + std::to_string(a), random_distribution(rng, n));
    }
    if (strongly_connected(m)) return m;
  }
}

GbmpCondition random_condition(std::mt19937_64& rng, const Mdp& m, int max_inf, int max_sup, int max_sets) {
  const std::size_t n = m.state_names.size();
  auto reward = [&] {
    std::vector<Rational> r(n);
    for (auto& v : r) v = fraction(static_cast<long>(rng() % 5), 4);
    return r;
  };
  auto constraint = [&] {
    static const Rational bounds[] = {Rational(0), Rational(1, 4), Rational(1, 3), Rational(1, 2),
                                      Rational(2, 3), Rational(3, 4), Rational(1)};
    return MpConstraint{reward(), rng() % 3 == 0 ? Cmp::Gt : Cmp::Geq, bounds[rng() % 7]};
  };
  GbmpCondition c;
  for (int i = static_cast<int>(rng() % static_cast<std::uint64_t>(max_inf + 1)); i > 0; --i) c.mp_inf.push_back(constraint());
  for (int i = static_cast<int>(rng() % static_cast<std::uint64_t>(max_sup + 1)); i > 0; --i) c.mp_sup.push_back(constraint());
  for (int i = static_cast<int>(rng() % static_cast<std::uint64_t>(max_sets + 1)); i > 0; --i) {
    std::vector<bool> set(n);
    for (std::size_t s = 0; s < n; ++s) set[s] = rng() % 3 == 0;
    c.infs.push_back(std::move(set));
  }
  return c;
}

ParsedModel random_chain(std::mt19937_64& rng, int max_states, const std::vector<std::string>& atoms) {
  ParsedModel pm;
  int n = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(max_states));
  for (int s = 0; s < n; ++s) pm.mdp.add_state("s" + std::to_string(s));
  for (int s = 0; s < n; ++s) pm.mdp.add_action(s, "step", random_distribution(rng, n));
  pm.valuation.resize(static_cast<std::size_t>(n));
  for (auto& v : pm.valuation)
    for (const auto& a : atoms)
      if (rng() % 2) v.push_back(a);
  return pm;
}

const std::vector<std::string>& corpus() {
  static const std::vector<std::string> formulas = {
      "a & X (b U a)",
      "a | b | X (b & G F a)",
      "G (X a | G X b)",
      "((l U b) -> G{>=0.99,inf} (r -> X (f & F c))) & ((l U w) -> G{>=0.85,inf} (r -> (X p | X X p)))",
      "F a",
      "G a",
      "G F a",
      "F G a",
      "a U b",
      "X X a",
      "G{>=1/2,inf} a",
      "G{>1/2,sup} a",
      "G{>=1/3,inf} F b",
      "G (a -> F b)",
      "G F a & G F b",
      "F G a | G F b",
      "(a U b) & G{>=1/2,inf} c",
      "G{>=1/2,inf} a & G{>=1/2,inf} !a",
      "G{>=2/3,sup} (a | X b)",
      "X (a U (b U c))",
      "F (a & X G b)",
      "G (a | X X b)",
      "tt",
      "ff",
      "!a U (b & F G c)",
      "G{>=1/4,inf} G F a",
  };
  return formulas;
}

}  // namespace oracle
