#pragma once

#include "freqsynth/boolfn.hpp"
#include "freqsynth/lts.hpp"

#include <string>
#include <vector>

namespace freqsynth {

inline constexpr std::size_t kDefaultMaxStates = 100000;

// Atoms of the formula together with any extra atoms requested by the caller.
Alphabet formula_alphabet(Formula f, const std::vector<std::string>& extra = {});

// Reachable part of the transition system psi --a--> step(unfold(psi), a),
// starting from the formula itself. Total over the alphabet.
Lts<BoolFn> build_master(Formula f, const Alphabet& alphabet,
                         std::size_t max_states = kDefaultMaxStates);

std::string master_to_dot(const Lts<BoolFn>& master);

}  // namespace freqsynth
