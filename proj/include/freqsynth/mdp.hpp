#pragma once

#include "freqsynth/lts.hpp"
#include "freqsynth/rational.hpp"

#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace freqsynth {

class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Transition {
  int target;
  Rational probability;
};

// Every action belongs to exactly one state.
struct Action {
  std::string name;
  int state;
  std::vector<Transition> successors;
};

class Mdp {
 public:
  std::vector<std::string> state_names;
  std::vector<Action> actions;
  std::vector<std::vector<int>> enabled;  // action ids per state
  int initial = 0;

  std::size_t num_states() const { return state_names.size(); }
  std::size_t num_actions() const { return actions.size(); }

  int add_state(std::string name);
  int add_action(int state, std::string name, std::vector<Transition> successors);

  // Distributions sum to one, targets exist and every state has an action.
  void validate() const;
};

// Atom names per state, sorted.
using Valuation = std::vector<std::vector<std::string>>;

struct ParsedModel {
  Mdp mdp;
  Valuation valuation;
};

ParsedModel parse_mdp(std::string_view text);
ParsedModel load_mdp(const std::string& path);

struct EndComponent {
  std::vector<int> states;   // sorted
  std::vector<int> actions;  // sorted
};

// Maximal end components among the allowed states (all states if empty).
std::vector<EndComponent> mec_decomposition(const Mdp& m, const std::vector<bool>& allowed = {});

// A sub-MDP with the origin of each state and action in the parent.
struct SubMdp {
  Mdp mdp;
  std::vector<int> state_origin;
  std::vector<int> action_origin;
};

// Removes the given states, every action with a removed successor and, in
// turn, states left without actions.
SubMdp restrict(const Mdp& m, const std::vector<bool>& removed);
SubMdp sub_mdp(const Mdp& m, const EndComponent& ec);

bool is_strongly_connected(const Mdp& m);

// Strongly connected components of the graph restricted to the allowed
// actions; comp[s] is -1 for states outside `states`.
std::vector<int> scc_components(const Mdp& m, const std::vector<bool>& states,
                                const std::vector<bool>& actions, int* count);

struct ProductMdp {
  Mdp mdp;
  std::vector<std::pair<int, int>> state_map;  // (model state, automaton state)
  std::vector<int> action_origin;
};

// Reachable part of M x A. A product state (s, q) has read the labels up to
// and including s.
ProductMdp product_mdp(const Mdp& m, const Valuation& valuation, const Alphabet& alphabet,
                       int automaton_initial, const std::function<int(int, Letter)>& delta,
                       const std::function<std::string(int)>& automaton_label,
                       std::size_t max_states);

template <class State>
ProductMdp product_mdp(const Mdp& m, const Valuation& valuation, const Lts<State>& a,
                       std::size_t max_states = 1000000) {
  return product_mdp(
      m, valuation, a.alphabet, a.initial, [&](int q, Letter l) { return a.successor(q, l); },
      [](int q) { return std::to_string(q); }, max_states);
}

std::string mdp_to_dot(const Mdp& m, const std::function<std::string(int)>& style = nullptr);
std::string mdp_to_text(const Mdp& m, const Valuation& valuation);

}  // namespace freqsynth
