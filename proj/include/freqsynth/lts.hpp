#pragma once

#include "freqsynth/alphabet.hpp"
#include "freqsynth/lasso.hpp"

#include <cstddef>
#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace freqsynth {

class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct VectorHash {
  std::size_t operator()(const std::vector<int>& v) const noexcept {
    std::size_t h = 0xcbf29ce484222325ULL;
    for (int x : v) h = (h ^ static_cast<std::size_t>(x)) * 0x100000001b3ULL;
    return h;
  }
};

// Labelled transition system over 2^Ap. delta[q * letters + a] is -1 where
// the transition is undefined.
template <class State>
struct Lts {
  Alphabet alphabet;
  std::vector<State> states;
  std::vector<int> delta;
  int initial = 0;

  std::size_t size() const { return states.size(); }
  int successor(int q, Letter a) const {
    return delta[static_cast<std::size_t>(q) * alphabet.letter_count() + a];
  }
};

// Breadth-first exploration from `init`. next(state, letter) returns the
// successor or std::nullopt where the transition is undefined.
template <class State, class Hash = std::hash<State>, class Next>
Lts<State> explore(const Alphabet& alphabet, State init, Next next, std::size_t max_states,
                   const std::string& what) {
  Lts<State> lts;
  lts.alphabet = alphabet;
  std::unordered_map<State, int, Hash> index;
  auto add = [&](State s) -> int {
    auto [it, fresh] = index.emplace(s, static_cast<int>(lts.states.size()));
    if (fresh) {
      if (lts.states.size() >= max_states)
        throw ResourceError(what + " exceeds the state limit of " + std::to_string(max_states));
      lts.states.push_back(std::move(s));
    }
    return it->second;
  };
  lts.initial = add(std::move(init));
  const Letter letters = alphabet.letter_count();
  for (std::size_t q = 0; q < lts.states.size(); ++q) {
    lts.delta.resize((q + 1) * letters, -1);
    for (Letter a = 0; a < letters; ++a) {
      std::optional<State> succ = next(lts.states[q], a);
      if (succ) lts.delta[q * letters + a] = add(std::move(*succ));
    }
  }
  lts.delta.resize(lts.states.size() * letters, -1);
  return lts;
}

// States visited while reading a lasso: trace[0] is the initial state and the
// run is ultimately periodic with period trace[cycle_start..].
struct LassoRun {
  std::vector<int> trace;
  std::size_t cycle_start = 0;
  bool complete = true;  // false when an undefined transition was hit

  std::vector<int> cycle() const {
    return {trace.begin() + static_cast<std::ptrdiff_t>(cycle_start), trace.end()};
  }
};

template <class State>
LassoRun run_lasso(const Lts<State>& lts, const Lasso& w) {
  LassoRun run;
  std::map<std::pair<std::size_t, int>, std::size_t> seen;
  int q = lts.initial;
  for (std::size_t i = 0;; ++i) {
    if (i >= w.stem.size()) {
      auto key = std::make_pair((i - w.stem.size()) % w.loop.size(), q);
      auto [it, fresh] = seen.emplace(key, i);
      if (!fresh) {
        run.cycle_start = it->second;
        return run;
      }
    }
    run.trace.push_back(q);
    int next = lts.successor(q, lts.alphabet.translate(w.letter_at(i), w.alphabet));
    if (next < 0) {
      run.complete = false;
      run.cycle_start = run.trace.size();
      return run;
    }
    q = next;
  }
}

// Graphviz rendering; parallel edges are merged into one label.
template <class State>
std::string lts_to_dot(const Lts<State>& lts, const std::function<std::string(int)>& label,
                       const std::string& name = "lts",
                       const std::function<std::string(int)>& style = nullptr) {
  std::ostringstream os;
  os << "digraph " << name << " {\n  rankdir=LR;\n  node [shape=box];\n";
  os << "  init [shape=point];\n  init -> q" << lts.initial << ";\n";
  auto escape = [](const std::string& s) {
    std::string out;
    for (char c : s) {
      if (c == '"' || c == '\\') out.push_back('\\');
      out.push_back(c);
    }
    return out;
  };
  for (std::size_t q = 0; q < lts.size(); ++q) {
    os << "  q" << q << " [label=\"" << escape(label(static_cast<int>(q))) << "\"";
    if (style) {
      std::string extra = style(static_cast<int>(q));
      if (!extra.empty()) os << ", " << extra;
    }
    os << "];\n";
  }
  const Letter letters = lts.alphabet.letter_count();
  for (std::size_t q = 0; q < lts.size(); ++q) {
    std::map<int, std::vector<Letter>> by_target;
    for (Letter a = 0; a < letters; ++a) {
      int t = lts.successor(static_cast<int>(q), a);
      if (t >= 0) by_target[t].push_back(a);
    }
    for (const auto& [t, ls] : by_target) {
      os << "  q" << q << " -> q" << t << " [label=\"";
      for (std::size_t i = 0; i < ls.size(); ++i) {
        if (i) os << ", ";
        os << lts.alphabet.format(ls[i]);
      }
      os << "\"];\n";
    }
  }
  os << "}\n";
  return os.str();
}

}  // namespace freqsynth
