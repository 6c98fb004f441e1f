#include "freqsynth/master.hpp"

#include "freqsynth/calculus.hpp"

namespace freqsynth {

Alphabet formula_alphabet(Formula f, const std::vector<std::string>& extra) {
  auto atoms = atoms_of(f);
  atoms.insert(atoms.end(), extra.begin(), extra.end());
  return Alphabet(std::move(atoms));
}

Lts<BoolFn> build_master(Formula f, const Alphabet& alphabet, std::size_t max_states) {
  BoolFn last_state;
  BoolFn last_unfolded;
  auto next = [&](const BoolFn& psi, Letter a) -> std::optional<BoolFn> {
    if (!(psi == last_state)) {
      last_state = psi;
      last_unfolded = unfold(psi);
    }
    return step(last_unfolded, alphabet, a);
  };
  return explore<BoolFn>(alphabet, to_boolfn(f), next, max_states, "master automaton");
}

std::string master_to_dot(const Lts<BoolFn>& master) {
  return lts_to_dot(
      master, [&](int q) { return master.states[static_cast<std::size_t>(q)].to_string(); },
      "master");
}

}  // namespace freqsynth
