#pragma once

#include "freqsynth/formula.hpp"
#include "freqsynth/lp.hpp"
#include "freqsynth/mdp.hpp"

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace freqsynth {

// Long-run average of a state reward compared against a bound.
struct MpConstraint {
  std::vector<Rational> reward;  // per state
  Cmp cmp = Cmp::Geq;
  Rational bound;
};

// Generalized Büchi condition with mean-payoff constraints on a strongly
// connected MDP: visit every set in `infs` infinitely often, keep every
// lim-inf average in `mp_inf` and every lim-sup average in `mp_sup`.
struct GbmpCondition {
  std::vector<std::vector<bool>> infs;
  std::vector<MpConstraint> mp_inf;
  std::vector<MpConstraint> mp_sup;
};

// Flow system with one block of action frequencies per lim-sup constraint
// (at least one block). A shared margin variable is subtracted from every
// strict mean-payoff row and maximised; strict rows need a positive margin.
struct FlowSystem {
  LinearProgram lp;
  int flows = 1;
  int num_actions = 0;
  int margin = -1;
  bool has_strict = false;
  int var(int flow, int action) const { return flow * num_actions + action; }
};

FlowSystem build_lp(const Mdp& c, const GbmpCondition& cond);

struct LpSolution {
  std::vector<std::vector<Rational>> x;  // x[flow][action]
  Rational margin;
};

std::optional<LpSolution> lp_feasible(const FlowSystem& system);

// Re-checks balance, normalisation and all bounds exactly.
bool check_solution(const Mdp& c, const GbmpCondition& cond, const LpSolution& sol);

struct MecVerdict {
  bool accepting = false;
  std::optional<LpSolution> solution;
};

// c must be strongly connected (an end component on its own).
MecVerdict accepting_mec(const Mdp& c, const GbmpCondition& cond);

// Epoch lengths. Geometric: min(cap, max(base, growth * |history|)).
// Exponential: min(cap, 2^|history|).
struct EpochSchedule {
  enum class Kind { Geometric, Exponential } kind = Kind::Geometric;
  std::uint64_t base = 3000;
  std::uint64_t growth = 30;
  std::uint64_t cap = 1000000000;
  std::uint64_t round_base = 400;

  std::uint64_t length(std::uint64_t history) const;
  std::uint64_t round_length(std::uint64_t history) const;
};

// One recurrent class of a flow: memoryless randomised choice inside
// `states` and the share of time it should receive.
struct ModeComponent {
  std::vector<bool> states;
  double weight = 0;
  std::vector<std::vector<std::pair<int, double>>> choice;  // per state of C
};

struct Mode {
  std::vector<ModeComponent> components;
};

// Witness for an accepting MEC: epochs cycle through the modes; each epoch
// first visits every Inf set, then plays the mode, moving between its
// components in rounds. Navigation uses positive-probability attractors.
struct WitnessStrategy {
  std::vector<Mode> modes;
  std::vector<std::vector<bool>> pilgrimage;
  std::vector<std::vector<int>> pilgrimage_moves;        // per target, action per state
  std::vector<std::vector<std::vector<int>>> component_moves;  // [mode][component]
  EpochSchedule schedule;
};

// Action per state that moves closer to the target with positive
// probability; -1 on target states.
std::vector<int> attractor_moves(const Mdp& c, const std::vector<bool>& target);

WitnessStrategy build_witness_strategy(const Mdp& c, const LpSolution& sol,
                                       const GbmpCondition& cond,
                                       const EpochSchedule& schedule = {});

double uniform01(std::mt19937_64& rng);
int sample_successor(const Mdp& m, int action, std::mt19937_64& rng);

// Stateful execution of a witness strategy.
class WitnessExecutor {
 public:
  WitnessExecutor(const Mdp& c, const WitnessStrategy& s);
  int choose(int state, std::mt19937_64& rng);

  std::uint64_t epochs_started() const { return epochs_started_; }
  std::uint64_t epochs_completed() const { return completed_; }
  std::uint64_t epochs_all_visited() const { return completed_all_visited_; }

 private:
  void start_epoch();
  void start_component(std::size_t k);

  const Mdp& c_;
  const WitnessStrategy& s_;
  std::uint64_t history_ = 0;
  std::size_t mode_ = 0;
  std::uint64_t epochs_started_ = 0;
  std::uint64_t completed_ = 0;
  std::uint64_t completed_all_visited_ = 0;
  bool in_pilgrimage_ = true;
  std::size_t pilgrim_ = 0;
  std::vector<bool> visited_;
  std::uint64_t budget_ = 0;
  std::size_t component_ = 0;
  bool navigating_ = false;
  std::uint64_t chunk_ = 0;
  std::vector<std::vector<double>> carry_;
};

struct TraceStats {
  std::uint64_t steps = 0;
  std::vector<double> action_frequency;
  std::vector<double> inf_final;      // average over the whole run
  std::vector<double> inf_min_late;   // min over prefixes of at least 20% of the run
  std::vector<double> sup_final;
  std::vector<double> sup_max_prefix; // max over prefixes of at least min_prefix steps
  std::vector<std::uint64_t> inf_visits;
  std::uint64_t epochs_started = 0;
  std::uint64_t epochs_completed = 0;
  std::uint64_t epochs_all_visited = 0;
};

TraceStats simulate_strategy(const Mdp& c, const WitnessStrategy& s, const GbmpCondition& cond,
                             std::uint64_t steps, std::uint64_t seed, int start = 0);

// Empirical checks with tolerance eps.
bool trace_meets(const GbmpCondition& cond, const TraceStats& t, double eps);

std::string format_trace(const TraceStats& t);

}  // namespace freqsynth
