#pragma once

#include "freqsynth/alphabet.hpp"
#include "freqsynth/boolfn.hpp"
#include "freqsynth/formula.hpp"

#include <span>
#include <vector>

namespace freqsynth {

// No Until occurs inside the scope of G or a frequency operator, and the
// formula is in negation normal form.
bool in_fragment(Formula f);

// Eliminates Not nodes, pushing negations down to the atoms.
Formula push_negation(Formula f);

// Non-Boolean, non-constant subformulas in first-occurrence (pre-order) order.
std::vector<Formula> nb_subformulas(Formula f);

// The Boolean structure of f over its maximal non-Boolean subformulas.
BoolFn to_boolfn(Formula f);

// One-step unfolding of temporal operators.
BoolFn unfold(Formula f);
BoolFn unfold(const BoolFn& f);

// Reads a letter: literals are decided and one X is stripped.
BoolFn step(Formula f, const Alphabet& alphabet, Letter letter);
BoolFn step(const BoolFn& f, const Alphabet& alphabet, Letter letter);

// Every assignment satisfying all assumptions satisfies the goal.
bool proves(std::span<const BoolFn> assumptions, const BoolFn& goal);
bool proves(std::span<const Formula> assumptions, const BoolFn& goal);

// Replaces the listed formulas by ff.
BoolFn substitute_ff(const BoolFn& f, std::span<const Formula> removed);

// Sorted, duplicate-free ids of a formula set.
std::vector<BoolFn::Var> id_set(std::span<const Formula> formulas);

}  // namespace freqsynth
