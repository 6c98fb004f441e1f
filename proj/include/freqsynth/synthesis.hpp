#pragma once

#include "freqsynth/dgrma.hpp"
#include "freqsynth/mdp.hpp"
#include "freqsynth/mec_analysis.hpp"

#include <optional>
#include <string>
#include <vector>

namespace freqsynth {

struct WinningMec {
  EndComponent ec;
  std::size_t pair = 0;
  SubMdp sub;
  GbmpCondition condition;  // over the states of sub
  LpSolution solution;
  WitnessStrategy witness;
};

struct WinningSet {
  std::vector<bool> states;
  std::vector<bool> actions;
  std::vector<WinningMec> mecs;
  std::vector<std::vector<std::size_t>> per_pair;  // indices into mecs
  std::size_t mecs_examined = 0;
};

struct AnalysisOptions {
  unsigned jobs = 1;
  EpochSchedule schedule;
};

// Restricts to the complement of each pair's Fin set, decomposes into MECs
// and keeps those accepted by the pair's Inf and mean-payoff requirements.
WinningSet winning_union(const Mdp& m, const std::vector<GrmpPair>& pairs,
                         const AnalysisOptions& options = {});

struct ReachResult {
  std::vector<Rational> probability;
  std::vector<int> choice;  // optimal action per state, -1 on targets
};

// Exact maximal reachability probabilities and a memoryless optimal selector.
ReachResult max_reach(const Mdp& m, const std::vector<bool>& target);

// Reach the winning set, then follow the witness of the first winning MEC
// containing the entry state.
struct GlobalStrategy {
  std::vector<int> reach_choice;
  std::vector<int> mec_of_state;  // -1 outside the winning set
};

struct Diagnostics {
  std::size_t master_states = 0;
  std::size_t automaton_states = 0;
  std::size_t recurrence_formulas = 0;
  std::size_t pairs = 0;
  std::size_t product_states = 0;
  std::size_t product_actions = 0;
  std::size_t mecs_examined = 0;
};

struct SynthesisReport {
  Rational max_probability;
  Rational threshold;
  bool strict = false;
  bool threshold_met = false;
  WinningSet winning;
  std::optional<GlobalStrategy> strategy;
  Diagnostics diagnostics;
  std::vector<Rational> state_probability;  // per product state
};

struct SynthesisOptions {
  Rational threshold = 0;
  bool strict = false;
  std::size_t max_states = kDefaultMaxStates;
  AnalysisOptions analysis;
};

struct SynthesisResult {
  Formula formula;
  Dgrma automaton;
  ProductMdp product;
  std::vector<GrmpPair> product_pairs;
  SynthesisReport report;
};

// Lifts an automaton pair to product states.
GrmpPair lift_pair(const GrmpPair& pair, const ProductMdp& product);

// Analysis of an MDP against an explicit acceptance condition.
SynthesisReport analyze(const Mdp& m, const std::vector<GrmpPair>& pairs,
                        const SynthesisOptions& options = {});

SynthesisResult synthesize(const Mdp& m, const Valuation& valuation, Formula f,
                           const SynthesisOptions& options = {});

std::string format_report(const SynthesisResult& r);
std::string product_to_dot(const SynthesisResult& r);

struct GlobalTrace {
  std::uint64_t episodes = 0;
  std::uint64_t entered = 0;    // episodes reaching the winning set
  std::uint64_t satisfied = 0;  // episodes passing the empirical checks
  std::vector<TraceStats> committed;  // per entering episode, from the entry step on
};

GlobalTrace simulate_global(const Mdp& m, const SynthesisReport& report, std::uint64_t steps,
                            std::uint64_t seed, std::uint64_t episodes = 1, double eps = 0.05);

std::string format_global_trace(const GlobalTrace& t);

}  // namespace freqsynth
