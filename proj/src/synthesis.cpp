#include "freqsynth/synthesis.hpp"

#include "freqsynth/calculus.hpp"

#include <algorithm>
#include <atomic>
#include <future>
#include <sstream>

namespace freqsynth {

namespace {

GbmpCondition local_condition(const GrmpPair& pair, const SubMdp& sub) {
  GbmpCondition cond;
  const std::size_t n = sub.mdp.num_states();
  for (const auto& inf : pair.infs) {
    std::vector<bool> local(n);
    for (std::size_t s = 0; s < n; ++s) local[s] = inf[static_cast<std::size_t>(sub.state_origin[s])];
    cond.infs.push_back(std::move(local));
  }
  for (const auto& mp : pair.mps) {
    MpConstraint c{{}, mp.cmp, mp.p};
    c.reward.reserve(n);
    for (std::size_t s = 0; s < n; ++s) c.reward.push_back(mp.reward[static_cast<std::size_t>(sub.state_origin[s])]);
    (mp.ext == Ext::Inf ? cond.mp_inf : cond.mp_sup).push_back(std::move(c));
  }
  return cond;
}

std::vector<WinningMec> analyze_pair(const Mdp& m, const GrmpPair& pair, std::size_t index,
                                     const AnalysisOptions& options, std::size_t* examined) {
  std::vector<bool> allowed(m.num_states());
  for (std::size_t s = 0; s < m.num_states(); ++s) allowed[s] = !pair.fin[s];
  std::vector<WinningMec> out;
  auto mecs = mec_decomposition(m, allowed);
  *examined = mecs.size();
  for (auto& ec : mecs) {
    SubMdp sub = sub_mdp(m, ec);
    GbmpCondition cond = local_condition(pair, sub);
    MecVerdict v = accepting_mec(sub.mdp, cond);
    if (!v.accepting) continue;
    WinningMec w;
    w.ec = std::move(ec);
    w.pair = index;
    w.witness = build_witness_strategy(sub.mdp, *v.solution, cond, options.schedule);
    w.solution = std::move(*v.solution);
    w.sub = std::move(sub);
    w.condition = std::move(cond);
    out.push_back(std::move(w));
  }
  return out;
}

struct PairOutcome {
  std::vector<WinningMec> mecs;
  std::size_t examined = 0;
};

}  // namespace

WinningSet winning_union(const Mdp& m, const std::vector<GrmpPair>& pairs, const AnalysisOptions& options) {
  std::vector<PairOutcome> outcomes(pairs.size());
  auto work = [&](std::size_t p) {
    outcomes[p].mecs = analyze_pair(m, pairs[p], p, options, &outcomes[p].examined);
  };
  if (options.jobs <= 1 || pairs.size() <= 1) {
    for (std::size_t p = 0; p < pairs.size(); ++p) work(p);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::future<void>> workers;
    unsigned n = std::min<unsigned>(options.jobs, static_cast<unsigned>(pairs.size()));
    for (unsigned t = 0; t < n; ++t)
      workers.push_back(std::async(std::launch::async, [&] {
        for (std::size_t p; (p = next++) < pairs.size();) work(p);
      }));
    for (auto& f : workers) f.get();
  }
  WinningSet w;
  w.states.assign(m.num_states(), false);
  w.actions.assign(m.num_actions(), false);
  w.per_pair.resize(pairs.size());
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    w.mecs_examined += outcomes[p].examined;
    for (auto& mec : outcomes[p].mecs) {
      for (int s : mec.ec.states) w.states[static_cast<std::size_t>(s)] = true;
      for (int a : mec.ec.actions) w.actions[static_cast<std::size_t>(a)] = true;
      w.per_pair[p].push_back(w.mecs.size());
      w.mecs.push_back(std::move(mec));
    }
  }
  return w;
}

ReachResult max_reach(const Mdp& m, const std::vector<bool>& target) {
  const std::size_t n = m.num_states();
  auto succ_all = [&](int a, const std::vector<bool>& set) {
    for (const auto& t : m.actions[static_cast<std::size_t>(a)].successors)
      if (!set[static_cast<std::size_t>(t.target)]) return false;
    return true;
  };
  auto succ_any = [&](int a, const std::vector<bool>& set) {
    for (const auto& t : m.actions[static_cast<std::size_t>(a)].successors)
      if (set[static_cast<std::size_t>(t.target)]) return true;
    return false;
  };

  std::vector<bool> reach = target;
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t s = 0; s < n; ++s) {
      if (reach[s]) continue;
      for (int a : m.enabled[s]) {
        if (succ_any(a, reach)) {
          reach[s] = true;
          changed = true;
          break;
        }
      }
    }
  }

  std::vector<bool> sure = reach;
  std::vector<int> sure_choice(n, -1);
  while (true) {
    std::vector<bool> r = target;
    std::fill(sure_choice.begin(), sure_choice.end(), -1);
    for (bool changed = true; changed;) {
      changed = false;
      for (std::size_t s = 0; s < n; ++s) {
        if (r[s] || !sure[s]) continue;
        for (int a : m.enabled[s]) {
          if (succ_all(a, sure) && succ_any(a, r)) {
            r[s] = true;
            sure_choice[s] = a;
            changed = true;
            break;
          }
        }
      }
    }
    if (r == sure) break;
    sure = std::move(r);
  }

  ReachResult res;
  res.probability.assign(n, Rational(0));
  res.choice.assign(n, -1);
  std::vector<int> maybe_index(n, -1);
  std::vector<int> maybe;
  for (std::size_t s = 0; s < n; ++s) {
    if (sure[s]) {
      res.probability[s] = 1;
      res.choice[s] = target[s] ? -1 : sure_choice[s];
    } else if (reach[s]) {
      maybe_index[s] = static_cast<int>(maybe.size());
      maybe.push_back(static_cast<int>(s));
    } else {
      res.choice[s] = m.enabled[s].empty() ? -1 : m.enabled[s].front();
    }
  }
  if (maybe.empty()) return res;

  // Initial proper policy: positive-probability attractor towards the sure set.
  std::vector<int> policy = attractor_moves(m, sure);
  std::vector<Rational> value(n);
  for (std::size_t s = 0; s < n; ++s) value[s] = sure[s] ? 1 : 0;
  const std::size_t k = maybe.size();
  while (true) {
    std::vector<std::vector<Rational>> a(k, std::vector<Rational>(k));
    std::vector<Rational> b(k);
    for (std::size_t i = 0; i < k; ++i) {
      auto s = static_cast<std::size_t>(maybe[i]);
      a[i][i] += 1;
      for (const auto& t : m.actions[static_cast<std::size_t>(policy[s])].successors) {
        auto ti = static_cast<std::size_t>(t.target);
        if (maybe_index[ti] >= 0) a[i][static_cast<std::size_t>(maybe_index[ti])] -= t.probability;
        else if (sure[ti]) b[i] += t.probability;
      }
    }
    std::vector<Rational> x;
    if (!solve_linear_system(std::move(a), std::move(b), x))
      throw std::logic_error("reachability system is singular");
    for (std::size_t i = 0; i < k; ++i) value[static_cast<std::size_t>(maybe[i])] = x[i];
    bool changed = false;
    for (int s : maybe) {
      auto si = static_cast<std::size_t>(s);
      Rational best = value[si];
      for (int act : m.enabled[si]) {
        Rational v = 0;
        for (const auto& t : m.actions[static_cast<std::size_t>(act)].successors) v += t.probability * value[static_cast<std::size_t>(t.target)];
        if (v > best) {
          best = v;
          policy[si] = act;
          changed = true;
        }
      }
    }
    if (!changed) break;
  }
  for (int s : maybe) {
    auto si = static_cast<std::size_t>(s);
    res.probability[si] = value[si];
    res.choice[si] = policy[si];
  }
  return res;
}

GrmpPair lift_pair(const GrmpPair& pair, const ProductMdp& product) {
  GrmpPair out;
  out.assumptions = pair.assumptions;
  const std::size_t n = product.state_map.size();
  auto lift = [&](const std::vector<bool>& set) {
    std::vector<bool> r(n);
    for (std::size_t s = 0; s < n; ++s) r[s] = set[static_cast<std::size_t>(product.state_map[s].second)];
    return r;
  };
  out.fin = lift(pair.fin);
  for (const auto& f : pair.fin_parts) out.fin_parts.push_back(lift(f));
  for (const auto& i : pair.infs) out.infs.push_back(lift(i));
  for (const auto& mp : pair.mps) {
    MpAtom atom{mp.ext, mp.cmp, mp.p, {}};
    atom.reward.reserve(n);
    for (std::size_t s = 0; s < n; ++s) atom.reward.push_back(mp.reward[static_cast<std::size_t>(product.state_map[s].second)]);
    out.mps.push_back(std::move(atom));
  }
  return out;
}

SynthesisReport analyze(const Mdp& m, const std::vector<GrmpPair>& pairs, const SynthesisOptions& options) {
  if (options.threshold < 0 || options.threshold > 1)
    throw std::invalid_argument("threshold must lie in [0,1]");
  SynthesisReport r;
  r.threshold = options.threshold;
  r.strict = options.strict;
  r.winning = winning_union(m, pairs, options.analysis);
  auto reach = max_reach(m, r.winning.states);
  r.state_probability = reach.probability;
  r.max_probability = reach.probability[static_cast<std::size_t>(m.initial)];
  r.threshold_met = options.strict ? r.max_probability > r.threshold : r.max_probability >= r.threshold;
  r.diagnostics.product_states = m.num_states();
  r.diagnostics.product_actions = m.num_actions();
  r.diagnostics.pairs = pairs.size();
  r.diagnostics.mecs_examined = r.winning.mecs_examined;
  if (r.max_probability > 0) {
    GlobalStrategy g;
    g.reach_choice = reach.choice;
    g.mec_of_state.assign(m.num_states(), -1);
    for (std::size_t i = 0; i < r.winning.mecs.size(); ++i)
      for (int s : r.winning.mecs[i].ec.states)
        if (g.mec_of_state[static_cast<std::size_t>(s)] < 0) g.mec_of_state[static_cast<std::size_t>(s)] = static_cast<int>(i);
    r.strategy = std::move(g);
  }
  return r;
}

SynthesisResult synthesize(const Mdp& m, const Valuation& valuation, Formula f, const SynthesisOptions& options) {
  if (!in_fragment(f)) throw std::invalid_argument("formula " + to_string(f) + " is outside the supported fragment");
  if (options.threshold < 0 || options.threshold > 1)
    throw std::invalid_argument("threshold must lie in [0,1]");
  m.validate();
  SynthesisResult res;
  res.formula = f;
  DgrmaOptions dopt;
  dopt.max_states = options.max_states;
  res.automaton = build_dgrma(f, formula_alphabet(f), dopt);
  res.product = product_mdp(m, valuation, res.automaton.lts, options.max_states);
  for (const auto& p : res.automaton.pairs) res.product_pairs.push_back(lift_pair(p, res.product));
  res.report = analyze(res.product.mdp, res.product_pairs, options);
  auto& d = res.report.diagnostics;
  d.master_states = res.automaton.master.size();
  d.automaton_states = res.automaton.lts.size();
  d.recurrence_formulas = res.automaton.rec.size();
  return res;
}

std::string format_report(const SynthesisResult& res) {
  const auto& r = res.report;
  const auto& d = r.diagnostics;
  std::ostringstream os;
  os << "formula: " << res.formula << '\n';
  os << "atoms:";
  for (const auto& a : res.automaton.lts.alphabet.atoms()) os << ' ' << a;
  os << '\n';
  os << "master_states: " << d.master_states << '\n';
  os << "automaton_states: " << d.automaton_states << '\n';
  os << "recurrence_formulas: " << d.recurrence_formulas << '\n';
  os << "acceptance_pairs: " << d.pairs << '\n';
  os << "product_states: " << d.product_states << '\n';
  os << "product_actions: " << d.product_actions << '\n';
  os << "winning_mecs: " << r.winning.mecs.size() << '\n';
  os << "winning_states: " << std::count(r.winning.states.begin(), r.winning.states.end(), true) << '\n';
  os << "max_probability: " << format_rational(r.max_probability) << '\n';
  os << "threshold: " << (r.strict ? "> " : ">= ") << format_rational(r.threshold) << '\n';
  os << "threshold_met: " << (r.threshold_met ? "yes" : "no") << '\n';
  os << "strategy: " << (r.strategy ? "yes" : "no") << '\n';
  for (std::size_t p = 0; p < res.automaton.pairs.size(); ++p) {
    os << "pair[" << p << "]: assumptions={";
    auto assumed = pair_assumptions(res.automaton, res.automaton.pairs[p]);
    for (std::size_t i = 0; i < assumed.size(); ++i) os << (i ? ", " : "") << assumed[i];
    os << "} winning_mecs=" << r.winning.per_pair[p].size() << '\n';
  }
  for (std::size_t i = 0; i < r.winning.mecs.size(); ++i) {
    const auto& w = r.winning.mecs[i];
    os << "mec[" << i << "]: pair=" << w.pair << " states=" << w.ec.states.size()
       << " actions=" << w.ec.actions.size() << " modes=" << w.witness.modes.size()
       << " margin=" << to_string(w.solution.margin) << '\n';
  }
  return os.str();
}

std::string product_to_dot(const SynthesisResult& res) {
  const auto& w = res.report.winning.states;
  return mdp_to_dot(res.product.mdp, [&](int s) {
    return w[static_cast<std::size_t>(s)] ? std::string("style=filled, fillcolor=palegreen") : std::string();
  });
}

GlobalTrace simulate_global(const Mdp& m, const SynthesisReport& report, std::uint64_t steps,
                            std::uint64_t seed, std::uint64_t episodes, double eps) {
  if (!report.strategy) throw std::invalid_argument("no strategy: the winning set is unreachable");
  const auto& g = *report.strategy;
  std::mt19937_64 rng(seed);
  GlobalTrace out;
  out.episodes = episodes;
  for (std::uint64_t e = 0; e < episodes; ++e) {
    int state = m.initial;
    for (std::uint64_t k = 0; k < steps; ++k) {
      int mec = g.mec_of_state[static_cast<std::size_t>(state)];
      if (mec >= 0) {
        const auto& w = report.winning.mecs[static_cast<std::size_t>(mec)];
        auto it = std::find(w.sub.state_origin.begin(), w.sub.state_origin.end(), state);
        int local = static_cast<int>(it - w.sub.state_origin.begin());
        auto stats = simulate_strategy(w.sub.mdp, w.witness, w.condition, steps - k, rng(), local);
        ++out.entered;
        if (trace_meets(w.condition, stats, eps)) ++out.satisfied;
        out.committed.push_back(std::move(stats));
        break;
      }
      int a = g.reach_choice[static_cast<std::size_t>(state)];
      if (a < 0) a = m.enabled[static_cast<std::size_t>(state)].front();
      state = sample_successor(m, a, rng);
    }
  }
  return out;
}

std::string format_global_trace(const GlobalTrace& t) {
  std::ostringstream os;
  os << "episodes: " << t.episodes << '\n';
  os << "entered_winning_set: " << t.entered << '\n';
  os << "satisfied_empirically: " << t.satisfied << '\n';
  for (std::size_t i = 0; i < t.committed.size(); ++i) {
    std::istringstream lines(format_trace(t.committed[i]));
    std::string line;
    while (std::getline(lines, line)) os << "episode[" << i << "]." << line << '\n';
  }
  return os.str();
}

}  // namespace freqsynth
