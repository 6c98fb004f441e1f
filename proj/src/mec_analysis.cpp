#include "freqsynth/mec_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>

namespace freqsynth {

FlowSystem build_lp(const Mdp& c, const GbmpCondition& cond) {
  FlowSystem sys;
  sys.flows = std::max<int>(1, static_cast<int>(cond.mp_sup.size()));
  sys.num_actions = static_cast<int>(c.num_actions());
  const int total = sys.flows * sys.num_actions;
  sys.lp = LinearProgram(total);
  for (int i = 0; i < sys.flows; ++i)
    for (int a = 0; a < sys.num_actions; ++a)
      sys.lp.set_name(sys.var(i, a), "x" + std::to_string(i) + "_" +
                                         c.actions[static_cast<std::size_t>(a)].name + "@" +
                                         c.state_names[static_cast<std::size_t>(c.actions[static_cast<std::size_t>(a)].state)]);
  sys.margin = sys.lp.add_variable("margin");

  auto reward_terms = [&](int flow, const MpConstraint& mp) {
    std::vector<std::pair<int, Rational>> terms;
    for (int a = 0; a < sys.num_actions; ++a) {
      const Rational& r = mp.reward[static_cast<std::size_t>(c.actions[static_cast<std::size_t>(a)].state)];
      if (r != 0) terms.emplace_back(sys.var(flow, a), r);
    }
    if (mp.cmp == Cmp::Gt) terms.emplace_back(sys.margin, Rational(-1));
    return terms;
  };

  for (int i = 0; i < sys.flows; ++i) {
    std::vector<std::pair<int, Rational>> norm;
    for (int a = 0; a < sys.num_actions; ++a) norm.emplace_back(sys.var(i, a), Rational(1));
    sys.lp.add_constraint(std::move(norm), Sense::Eq, 1, "flow" + std::to_string(i) + " total");

    std::vector<std::vector<std::pair<int, Rational>>> balance(c.num_states());
    for (int a = 0; a < sys.num_actions; ++a) {
      const auto& act = c.actions[static_cast<std::size_t>(a)];
      std::vector<Rational> coef(c.num_states());
      for (const auto& t : act.successors) coef[static_cast<std::size_t>(t.target)] += t.probability;
      coef[static_cast<std::size_t>(act.state)] -= 1;
      for (std::size_t s = 0; s < c.num_states(); ++s)
        if (coef[s] != 0) balance[s].emplace_back(sys.var(i, a), coef[s]);
    }
    for (std::size_t s = 0; s < c.num_states(); ++s)
      sys.lp.add_constraint(std::move(balance[s]), Sense::Eq, 0,
                            "flow" + std::to_string(i) + " balance " + c.state_names[s]);

    for (std::size_t j = 0; j < cond.mp_inf.size(); ++j)
      sys.lp.add_constraint(reward_terms(i, cond.mp_inf[j]), Sense::Ge, cond.mp_inf[j].bound,
                            "flow" + std::to_string(i) + " liminf " + std::to_string(j));
  }
  for (std::size_t i = 0; i < cond.mp_sup.size(); ++i)
    sys.lp.add_constraint(reward_terms(static_cast<int>(i), cond.mp_sup[i]), Sense::Ge,
                          cond.mp_sup[i].bound, "flow" + std::to_string(i) + " limsup");
  sys.lp.add_constraint({{sys.margin, Rational(1)}}, Sense::Le, 1, "margin cap");
  sys.lp.set_objective({{sys.margin, Rational(1)}});
  for (const auto& mp : cond.mp_inf) sys.has_strict = sys.has_strict || mp.cmp == Cmp::Gt;
  for (const auto& mp : cond.mp_sup) sys.has_strict = sys.has_strict || mp.cmp == Cmp::Gt;
  return sys;
}

std::optional<LpSolution> lp_feasible(const FlowSystem& sys) {
  LpResult r = sys.lp.solve();
  if (r.status != LpStatus::Optimal) return std::nullopt;
  LpSolution sol;
  sol.margin = r.values[static_cast<std::size_t>(sys.margin)];
  if (sys.has_strict && sol.margin <= 0) return std::nullopt;
  sol.x.assign(static_cast<std::size_t>(sys.flows), {});
  for (int i = 0; i < sys.flows; ++i)
    for (int a = 0; a < sys.num_actions; ++a)
      sol.x[static_cast<std::size_t>(i)].push_back(r.values[static_cast<std::size_t>(sys.var(i, a))]);
  return sol;
}

namespace {

Rational flow_value(const Mdp& c, const std::vector<Rational>& x, const MpConstraint& mp) {
  Rational v = 0;
  for (std::size_t a = 0; a < c.num_actions(); ++a)
    v += x[a] * mp.reward[static_cast<std::size_t>(c.actions[a].state)];
  return v;
}

}  // namespace

bool check_solution(const Mdp& c, const GbmpCondition& cond, const LpSolution& sol) {
  std::size_t flows = std::max<std::size_t>(1, cond.mp_sup.size());
  if (sol.x.size() != flows) return false;
  for (std::size_t i = 0; i < flows; ++i) {
    const auto& x = sol.x[i];
    if (x.size() != c.num_actions()) return false;
    Rational total = 0;
    std::vector<Rational> net(c.num_states());
    for (std::size_t a = 0; a < c.num_actions(); ++a) {
      if (x[a] < 0) return false;
      total += x[a];
      net[static_cast<std::size_t>(c.actions[a].state)] -= x[a];
      for (const auto& t : c.actions[a].successors) net[static_cast<std::size_t>(t.target)] += x[a] * t.probability;
    }
    if (total != 1) return false;
    for (const auto& v : net)
      if (v != 0) return false;
    for (const auto& mp : cond.mp_inf)
      if (!compare(flow_value(c, x, mp), mp.cmp, mp.bound)) return false;
    if (i < cond.mp_sup.size() && !compare(flow_value(c, x, cond.mp_sup[i]), cond.mp_sup[i].cmp, cond.mp_sup[i].bound))
      return false;
  }
  return true;
}

MecVerdict accepting_mec(const Mdp& c, const GbmpCondition& cond) {
  MecVerdict v;
  for (const auto& inf : cond.infs) {
    bool hit = false;
    for (std::size_t s = 0; s < c.num_states() && !hit; ++s) hit = inf[s];
    if (!hit) return v;
  }
  auto sol = lp_feasible(build_lp(c, cond));
  if (!sol) return v;
  v.accepting = true;
  v.solution = std::move(sol);
  return v;
}

std::uint64_t EpochSchedule::length(std::uint64_t history) const {
  std::uint64_t len;
  if (kind == Kind::Exponential) {
    len = history >= 63 ? cap : std::min<std::uint64_t>(cap, std::uint64_t{1} << history);
  } else {
    std::uint64_t g = growth != 0 && history > cap / growth ? cap : growth * history;
    len = std::min(cap, std::max(base, g));
  }
  return std::max<std::uint64_t>(1, len);
}

std::uint64_t EpochSchedule::round_length(std::uint64_t history) const {
  auto root = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(history)));
  return std::max(round_base, 2 * root);
}

std::vector<int> attractor_moves(const Mdp& c, const std::vector<bool>& target) {
  const std::size_t n = c.num_states();
  std::vector<int> moves(n, -1);
  std::vector<int> dist(n, -1);
  for (std::size_t s = 0; s < n; ++s)
    if (target[s]) dist[s] = 0;
  for (int level = 0;; ++level) {
    bool changed = false;
    for (std::size_t s = 0; s < n; ++s) {
      if (dist[s] >= 0) continue;
      for (int a : c.enabled[s]) {
        bool closer = false;
        for (const auto& t : c.actions[static_cast<std::size_t>(a)].successors) {
          int d = dist[static_cast<std::size_t>(t.target)];
          closer = closer || (d >= 0 && d <= level);
        }
        if (closer) {
          dist[s] = level + 1;
          moves[s] = a;
          changed = true;
          break;
        }
      }
    }
    if (!changed) break;
  }
  return moves;
}

WitnessStrategy build_witness_strategy(const Mdp& c, const LpSolution& sol, const GbmpCondition& cond,
                                       const EpochSchedule& schedule) {
  WitnessStrategy w;
  w.schedule = schedule;
  const std::size_t n = c.num_states();
  for (const auto& x : sol.x) {
    std::vector<Rational> out(n);
    std::vector<bool> support_s(n, false), support_a(c.num_actions(), false);
    for (std::size_t a = 0; a < c.num_actions(); ++a) {
      if (x[a] <= 0) continue;
      auto s = static_cast<std::size_t>(c.actions[a].state);
      out[s] += x[a];
      support_s[s] = true;
      support_a[a] = true;
    }
    int count = 0;
    auto comp = scc_components(c, support_s, support_a, &count);
    Mode mode;
    mode.components.resize(static_cast<std::size_t>(count));
    std::vector<Rational> weight(static_cast<std::size_t>(count));
    for (auto& mc : mode.components) {
      mc.states.assign(n, false);
      mc.choice.assign(n, {});
    }
    for (std::size_t a = 0; a < c.num_actions(); ++a) {
      if (!support_a[a]) continue;
      auto s = static_cast<std::size_t>(c.actions[a].state);
      auto& mc = mode.components[static_cast<std::size_t>(comp[s])];
      mc.states[s] = true;
      mc.choice[s].emplace_back(static_cast<int>(a), to_double(Rational(x[a] / out[s])));
      weight[static_cast<std::size_t>(comp[s])] += x[a];
    }
    for (std::size_t k = 0; k < mode.components.size(); ++k) mode.components[k].weight = to_double(weight[k]);
    std::sort(mode.components.begin(), mode.components.end(),
              [](const ModeComponent& a, const ModeComponent& b) { return a.states > b.states; });
    std::vector<std::vector<int>> moves;
    for (const auto& mc : mode.components) moves.push_back(attractor_moves(c, mc.states));
    w.component_moves.push_back(std::move(moves));
    w.modes.push_back(std::move(mode));
  }
  for (const auto& inf : cond.infs) {
    w.pilgrimage.push_back(inf);
    w.pilgrimage_moves.push_back(attractor_moves(c, inf));
  }
  return w;
}

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * (1.0 / 9007199254740992.0);
}

int sample_successor(const Mdp& m, int action, std::mt19937_64& rng) {
  const auto& succ = m.actions[static_cast<std::size_t>(action)].successors;
  double u = uniform01(rng);
  double acc = 0;
  for (const auto& t : succ) {
    acc += to_double(t.probability);
    if (u < acc) return t.target;
  }
  return succ.back().target;
}

WitnessExecutor::WitnessExecutor(const Mdp& c, const WitnessStrategy& s) : c_(c), s_(s) {
  for (const auto& m : s.modes) carry_.emplace_back(m.components.size(), 0.0);
  start_epoch();
}

void WitnessExecutor::start_epoch() {
  if (epochs_started_ > 0) {
    ++completed_;
    if (std::all_of(visited_.begin(), visited_.end(), [](bool b) { return b; })) ++completed_all_visited_;
  }
  mode_ = static_cast<std::size_t>(epochs_started_ % s_.modes.size());
  ++epochs_started_;
  budget_ = s_.schedule.length(history_);
  in_pilgrimage_ = true;
  pilgrim_ = 0;
  visited_.assign(s_.pilgrimage.size(), false);
}

void WitnessExecutor::start_component(std::size_t k) {
  const auto& comps = s_.modes[mode_].components;
  component_ = k;
  navigating_ = true;
  if (comps.size() == 1) {
    chunk_ = std::numeric_limits<std::uint64_t>::max();
    return;
  }
  double exact = comps[k].weight * static_cast<double>(s_.schedule.round_length(history_)) + carry_[mode_][k];
  double whole = std::floor(exact);
  carry_[mode_][k] = exact - whole;
  chunk_ = static_cast<std::uint64_t>(whole);
}

int WitnessExecutor::choose(int state, std::mt19937_64& rng) {
  auto si = static_cast<std::size_t>(state);
  for (std::size_t j = 0; j < s_.pilgrimage.size(); ++j)
    if (s_.pilgrimage[j][si]) visited_[j] = true;
  while (true) {
    if (in_pilgrimage_) {
      for (std::size_t j = 0; j < s_.pilgrimage.size(); ++j)
        if (s_.pilgrimage[j][si]) visited_[j] = true;
      while (pilgrim_ < s_.pilgrimage.size() && visited_[pilgrim_]) ++pilgrim_;
      if (pilgrim_ < s_.pilgrimage.size()) {
        ++history_;
        return s_.pilgrimage_moves[pilgrim_][si];
      }
      in_pilgrimage_ = false;
      start_component(0);
    }
    if (budget_ == 0) {
      start_epoch();
      continue;
    }
    const auto& comps = s_.modes[mode_].components;
    if (chunk_ == 0) {
      start_component((component_ + 1) % comps.size());
      continue;
    }
    const auto& mc = comps[component_];
    if (navigating_) {
      if (mc.states[si]) {
        navigating_ = false;
      } else {
        --budget_;
        ++history_;
        return s_.component_moves[mode_][component_][si];
      }
    }
    --chunk_;
    --budget_;
    ++history_;
    const auto& options = mc.choice[si];
    double u = uniform01(rng);
    double acc = 0;
    for (const auto& [a, p] : options) {
      acc += p;
      if (u < acc) return a;
    }
    return options.back().first;
  }
}

TraceStats simulate_strategy(const Mdp& c, const WitnessStrategy& s, const GbmpCondition& cond,
                             std::uint64_t steps, std::uint64_t seed, int start) {
  std::mt19937_64 rng(seed);
  WitnessExecutor exec(c, s);
  TraceStats t;
  t.steps = steps;
  const std::size_t n = c.num_states();
  auto to_doubles = [&](const MpConstraint& mp) {
    std::vector<double> r(n);
    for (std::size_t q = 0; q < n; ++q) r[q] = to_double(mp.reward[q]);
    return r;
  };
  std::vector<std::vector<double>> rin, rsup;
  for (const auto& mp : cond.mp_inf) rin.push_back(to_doubles(mp));
  for (const auto& mp : cond.mp_sup) rsup.push_back(to_doubles(mp));
  std::vector<double> sum_in(rin.size(), 0), sum_sup(rsup.size(), 0);
  t.inf_min_late.assign(rin.size(), std::numeric_limits<double>::infinity());
  t.sup_max_prefix.assign(rsup.size(), -std::numeric_limits<double>::infinity());
  t.inf_visits.assign(cond.infs.size(), 0);
  std::vector<std::uint64_t> action_count(c.num_actions(), 0);
  const std::uint64_t late = std::max<std::uint64_t>(1, steps / 5);
  const std::uint64_t min_prefix = std::min<std::uint64_t>(steps, 1000);
  int state = start;
  for (std::uint64_t k = 0; k < steps; ++k) {
    auto si = static_cast<std::size_t>(state);
    const double len = static_cast<double>(k + 1);
    for (std::size_t j = 0; j < rin.size(); ++j) {
      sum_in[j] += rin[j][si];
      if (k + 1 >= late) t.inf_min_late[j] = std::min(t.inf_min_late[j], sum_in[j] / len);
    }
    for (std::size_t j = 0; j < rsup.size(); ++j) {
      sum_sup[j] += rsup[j][si];
      if (k + 1 >= min_prefix) t.sup_max_prefix[j] = std::max(t.sup_max_prefix[j], sum_sup[j] / len);
    }
    for (std::size_t j = 0; j < cond.infs.size(); ++j)
      if (cond.infs[j][si]) ++t.inf_visits[j];
    int a = exec.choose(state, rng);
    ++action_count[static_cast<std::size_t>(a)];
    state = sample_successor(c, a, rng);
  }
  const double total = static_cast<double>(std::max<std::uint64_t>(1, steps));
  for (auto v : action_count) t.action_frequency.push_back(static_cast<double>(v) / total);
  for (double v : sum_in) t.inf_final.push_back(v / total);
  for (double v : sum_sup) t.sup_final.push_back(v / total);
  t.epochs_started = exec.epochs_started();
  t.epochs_completed = exec.epochs_completed();
  t.epochs_all_visited = exec.epochs_all_visited();
  return t;
}

bool trace_meets(const GbmpCondition& cond, const TraceStats& t, double eps) {
  for (std::size_t j = 0; j < cond.mp_inf.size(); ++j)
    if (t.inf_min_late[j] < to_double(cond.mp_inf[j].bound) - eps) return false;
  for (std::size_t j = 0; j < cond.mp_sup.size(); ++j)
    if (t.sup_max_prefix[j] < to_double(cond.mp_sup[j].bound) - eps) return false;
  for (auto v : t.inf_visits)
    if (v == 0) return false;
  return t.epochs_all_visited == t.epochs_completed;
}

std::string format_trace(const TraceStats& t) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(6);
  os << "steps: " << t.steps << '\n';
  os << "epochs_started: " << t.epochs_started << '\n';
  os << "epochs_completed: " << t.epochs_completed << '\n';
  os << "epochs_visiting_all_inf_sets: " << t.epochs_all_visited << '\n';
  for (std::size_t j = 0; j < t.inf_visits.size(); ++j) os << "inf_set[" << j << "].visits: " << t.inf_visits[j] << '\n';
  for (std::size_t j = 0; j < t.inf_final.size(); ++j)
    os << "liminf[" << j << "].average: " << t.inf_final[j] << "\nliminf[" << j
       << "].min_late_prefix: " << t.inf_min_late[j] << '\n';
  for (std::size_t j = 0; j < t.sup_final.size(); ++j)
    os << "limsup[" << j << "].average: " << t.sup_final[j] << "\nlimsup[" << j
       << "].max_prefix: " << t.sup_max_prefix[j] << '\n';
  for (std::size_t a = 0; a < t.action_frequency.size(); ++a)
    os << "action[" << a << "].frequency: " << t.action_frequency[a] << '\n';
  return os.str();
}

}  // namespace freqsynth
