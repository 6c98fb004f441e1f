#include "freqsynth/slave.hpp"

#include "freqsynth/calculus.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace freqsynth {

namespace {

void check_acyclic(const Lts<BoolFn>& lts) {
  const std::size_t n = lts.size();
  const Letter letters = lts.alphabet.letter_count();
  std::vector<int> indegree(n, 0);
  std::vector<std::vector<int>> out(n);
  for (std::size_t q = 0; q < n; ++q) {
    for (Letter a = 0; a < letters; ++a) {
      int t = lts.successor(static_cast<int>(q), a);
      if (t >= 0 && std::find(out[q].begin(), out[q].end(), t) == out[q].end()) {
        out[q].push_back(t);
        ++indegree[static_cast<std::size_t>(t)];
      }
    }
  }
  std::vector<int> queue;
  for (std::size_t q = 0; q < n; ++q)
    if (indegree[q] == 0) queue.push_back(static_cast<int>(q));
  std::size_t done = 0;
  while (done < queue.size()) {
    int q = queue[done++];
    for (int t : out[static_cast<std::size_t>(q)])
      if (--indegree[static_cast<std::size_t>(t)] == 0) queue.push_back(t);
  }
  if (done != n) throw std::logic_error("slave transition system has a cycle");
}

std::string token_label(const SlaveLts& slave, const TokenSet& tokens) {
  std::string s = "{";
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) s += ", ";
    s += slave.lts.states[static_cast<std::size_t>(tokens[i])].to_string();
  }
  return s + "}";
}

}  // namespace

SlaveLts build_slave_lts(Formula xi, const Alphabet& alphabet, std::size_t max_states) {
  std::map<BoolFn, bool> sink_cache;
  auto is_sink = [&](const BoolFn& psi) {
    if (auto it = sink_cache.find(psi); it != sink_cache.end()) return it->second;
    bool fixed = true;
    for (Letter a = 0; a < alphabet.letter_count() && fixed; ++a)
      fixed = step(psi, alphabet, a) == psi;
    sink_cache.emplace(psi, fixed);
    return fixed;
  };
  auto next = [&](const BoolFn& psi, Letter a) -> std::optional<BoolFn> {
    if (is_sink(psi)) return std::nullopt;
    return step(psi, alphabet, a);
  };
  SlaveLts slave{xi, explore<BoolFn>(alphabet, to_boolfn(xi), next, max_states, "slave"), {}};
  for (const auto& psi : slave.lts.states) slave.sink.push_back(is_sink(psi));
  check_acyclic(slave.lts);
  return slave;
}

Lts<TokenSet> build_token_lts(const SlaveLts& slave, std::size_t max_states) {
  const int root = slave.lts.initial;
  auto next = [&](const TokenSet& tokens, Letter a) -> std::optional<TokenSet> {
    TokenSet out{root};
    for (int psi : tokens)
      if (!slave.sink[static_cast<std::size_t>(psi)]) out.push_back(slave.lts.successor(psi, a));
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  };
  return explore<TokenSet, VectorHash>(slave.lts.alphabet, TokenSet{root}, next, max_states,
                                       "token automaton");
}

Lts<TokenCount> build_count_lts(const SlaveLts& slave, std::size_t max_states) {
  const int root = slave.lts.initial;
  const std::size_t n = slave.lts.size();
  auto next = [&](const TokenCount& count, Letter a) -> std::optional<TokenCount> {
    TokenCount out(n, 0);
    out[static_cast<std::size_t>(root)] = 1;
    for (std::size_t psi = 0; psi < n; ++psi) {
      if (count[psi] == 0 || slave.sink[psi]) continue;
      out[static_cast<std::size_t>(slave.lts.successor(static_cast<int>(psi), a))] += count[psi];
    }
    return out;
  };
  TokenCount init(n, 0);
  init[static_cast<std::size_t>(root)] = 1;
  return explore<TokenCount, VectorHash>(slave.lts.alphabet, std::move(init), next, max_states,
                                         "counting automaton");
}

bool sink_proved(const SlaveLts& slave, int state, const std::vector<Formula>& assumptions) {
  return proves(std::span<const Formula>(assumptions),
                slave.lts.states[static_cast<std::size_t>(state)]);
}

std::vector<bool> buchi_accepting_sets(const SlaveLts& slave, const Lts<TokenSet>& tokens,
                                       const std::vector<Formula>& assumptions) {
  std::vector<bool> out;
  for (const auto& set : tokens.states) {
    bool hit = false;
    for (int psi : set)
      if (slave.sink[static_cast<std::size_t>(psi)] && sink_proved(slave, psi, assumptions))
        hit = true;
    out.push_back(hit);
  }
  return out;
}

std::vector<bool> cobuchi_rejecting_sets(const SlaveLts& slave, const Lts<TokenSet>& tokens,
                                         const std::vector<Formula>& assumptions) {
  std::vector<bool> out;
  for (const auto& set : tokens.states) {
    bool hit = false;
    for (int psi : set)
      if (slave.sink[static_cast<std::size_t>(psi)] && !sink_proved(slave, psi, assumptions))
        hit = true;
    out.push_back(hit);
  }
  return out;
}

std::vector<Rational> mp_reward(const SlaveLts& slave, const Lts<TokenCount>& counts,
                                const std::vector<Formula>& assumptions) {
  std::vector<bool> good(slave.lts.size());
  for (std::size_t psi = 0; psi < slave.lts.size(); ++psi)
    good[psi] = slave.sink[psi] && sink_proved(slave, static_cast<int>(psi), assumptions);
  std::vector<Rational> out;
  out.reserve(counts.size());
  for (const auto& count : counts.states) {
    long r = 0;
    for (std::size_t psi = 0; psi < count.size(); ++psi)
      if (good[psi]) r += count[psi];
    out.emplace_back(r);
  }
  return out;
}

std::string slave_to_dot(const SlaveLts& slave) {
  return lts_to_dot(
      slave.lts,
      [&](int q) { return slave.lts.states[static_cast<std::size_t>(q)].to_string(); }, "slave",
      [&](int q) {
        return slave.sink[static_cast<std::size_t>(q)] ? std::string("peripheries=2")
                                                       : std::string();
      });
}

std::string token_lts_to_dot(const SlaveLts& slave, const Lts<TokenSet>& tokens) {
  return lts_to_dot(
      tokens,
      [&](int q) { return token_label(slave, tokens.states[static_cast<std::size_t>(q)]); },
      "tokens");
}

std::string count_lts_to_dot(const SlaveLts& slave, const Lts<TokenCount>& counts) {
  return lts_to_dot(
      counts,
      [&](int q) {
        const auto& c = counts.states[static_cast<std::size_t>(q)];
        std::string s = "{";
        bool first = true;
        for (std::size_t psi = 0; psi < c.size(); ++psi) {
          if (c[psi] == 0) continue;
          if (!first) s += ", ";
          first = false;
          s += slave.lts.states[psi].to_string() + ":" + std::to_string(c[psi]);
        }
        return s + "}";
      },
      "counts");
}

}  // namespace freqsynth
