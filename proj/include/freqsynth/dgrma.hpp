#pragma once

#include "freqsynth/lts.hpp"
#include "freqsynth/master.hpp"
#include "freqsynth/slave.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace freqsynth {

// Mean-payoff requirement lr_ext(reward) cmp p over the states of a run.
struct MpAtom {
  Ext ext = Ext::Inf;
  Cmp cmp = Cmp::Geq;
  Rational p;
  std::vector<Rational> reward;
};

// Generalized Rabin pair with mean-payoff atoms: visit `fin` finitely often,
// every set in `infs` infinitely often and satisfy every atom in `mps`.
struct GrmpPair {
  std::uint64_t assumptions = 0;  // bit i set when rec[i] is assumed
  std::vector<bool> fin;
  std::vector<std::vector<bool>> fin_parts;  // fin is their union
  std::vector<std::vector<bool>> infs;
  std::vector<MpAtom> mps;
};

enum class RecKind { Eventually, Always, Frequency };

struct SlaveAutomaton {
  Formula member;  // F x, G x or a frequency formula
  RecKind kind;
  SlaveLts slave;  // over x
  Lts<TokenSet> tokens;
  Lts<TokenCount> counts;
};

// Component 0 is the master state, component i+1 the state of slave i.
using ProductState = std::vector<int>;

struct Dgrma {
  Formula formula;
  Lts<BoolFn> master;
  std::vector<Formula> rec;
  std::vector<SlaveAutomaton> slaves;  // parallel to rec
  Lts<ProductState> lts;
  std::vector<GrmpPair> pairs;
};

struct DgrmaOptions {
  std::size_t max_states = kDefaultMaxStates;
  bool prune = true;  // drop pairs that no cycle can satisfy
  std::size_t max_rec = 16;
};

// F-, G- and frequency subformulas in pre-order, outermost first.
std::vector<Formula> rec_set(Formula f);

Dgrma build_dgrma(Formula f, const Alphabet& alphabet, const DgrmaOptions& options = {});

std::vector<Formula> pair_assumptions(const Dgrma& a, const GrmpPair& pair);

// Acceptance of a run whose states visited infinitely often, with
// multiplicity, are `cycle`.
bool pair_accepts_cycle(const GrmpPair& pair, const std::vector<int>& cycle);
bool accepts_lasso(const Dgrma& a, const Lasso& w);
// Same verdict, computed from the individual Fin parts rather than their union.
bool accepts_lasso_by_parts(const Dgrma& a, const Lasso& w);

std::string acceptance_dump(const Dgrma& a);
std::string dgrma_to_dot(const Dgrma& a);
std::string state_label(const Dgrma& a, int q);

}  // namespace freqsynth
