#pragma once

#include "freqsynth/boolfn.hpp"
#include "freqsynth/lts.hpp"
#include "freqsynth/master.hpp"

#include <string>
#include <vector>

namespace freqsynth {

// Transition system of a subformula x under step only (no unfolding).
// Sinks are states fixed by every letter and have no outgoing transitions.
struct SlaveLts {
  Formula xi;
  Lts<BoolFn> lts;
  std::vector<bool> sink;
};

SlaveLts build_slave_lts(Formula xi, const Alphabet& alphabet,
                         std::size_t max_states = kDefaultMaxStates);

// Sorted indices of occupied slave states.
using TokenSet = std::vector<int>;
// Number of tokens per slave state.
using TokenCount = std::vector<int>;

// Tokens advance from every non-sink state, a fresh token is placed on x and
// tokens in sinks are dropped on the next step.
Lts<TokenSet> build_token_lts(const SlaveLts& slave, std::size_t max_states = kDefaultMaxStates);
Lts<TokenCount> build_count_lts(const SlaveLts& slave,
                                std::size_t max_states = kDefaultMaxStates);

// Whether the sink `state` follows from the assumption set R.
bool sink_proved(const SlaveLts& slave, int state, const std::vector<Formula>& assumptions);

// Token sets holding a sink proved by R.
std::vector<bool> buchi_accepting_sets(const SlaveLts& slave, const Lts<TokenSet>& tokens,
                                       const std::vector<Formula>& assumptions);
// Token sets holding a sink not proved by R.
std::vector<bool> cobuchi_rejecting_sets(const SlaveLts& slave, const Lts<TokenSet>& tokens,
                                         const std::vector<Formula>& assumptions);
// Number of tokens sitting in sinks proved by R.
std::vector<Rational> mp_reward(const SlaveLts& slave, const Lts<TokenCount>& counts,
                                const std::vector<Formula>& assumptions);

std::string slave_to_dot(const SlaveLts& slave);
std::string token_lts_to_dot(const SlaveLts& slave, const Lts<TokenSet>& tokens);
std::string count_lts_to_dot(const SlaveLts& slave, const Lts<TokenCount>& counts);

}  // namespace freqsynth
