#pragma once

#include "freqsynth/alphabet.hpp"
#include "freqsynth/boolfn.hpp"
#include "freqsynth/formula.hpp"

#include <cstdint>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace freqsynth {

// Ultimately periodic word stem . loop^omega.
struct Lasso {
  Alphabet alphabet;
  std::vector<Letter> stem;
  std::vector<Letter> loop;  // non-empty

  std::size_t positions() const { return stem.size() + loop.size(); }
  std::size_t successor(std::size_t i) const { return i + 1 < positions() ? i + 1 : stem.size(); }
  Letter letter_at(std::size_t i) const;  // any i >= 0, unrolling the loop

  // The suffix starting at position n.
  Lasso shifted(std::size_t n) const;
  std::string to_string() const;
};

// Letters as "{a b};{};{a}". The alphabet collects every atom mentioned
// plus `extra`.
Lasso parse_lasso(std::string_view stem, std::string_view loop,
                  const std::vector<std::string>& extra = {});

// Direct fixpoint semantics on the finitely many positions of the lasso.
class LassoEvaluator {
 public:
  explicit LassoEvaluator(const Lasso& w) : w_(w) {}
  // Truth value of f at every position.
  const std::vector<char>& eval(Formula f);
  bool holds(Formula f, std::size_t position = 0) { return eval(f)[position] != 0; }
  bool holds(const BoolFn& f, std::size_t position = 0);

 private:
  const Lasso& w_;
  std::unordered_map<std::uint32_t, std::vector<char>> memo_;
};

bool models(const Lasso& w, Formula f);
bool models(const Lasso& w, const BoolFn& f);

// Share of loop positions satisfying f.
Rational freq_on_lasso(const Lasso& w, Formula f);

// For each element of rec: F x holds infinitely often, G x holds
// eventually always, a frequency formula holds.
std::vector<bool> rec_truth(const Lasso& w, const std::vector<Formula>& rec);
std::vector<Formula> rec_truth_set(const Lasso& w, const std::vector<Formula>& rec);

Lasso random_lasso(std::uint64_t seed, std::size_t max_stem, std::size_t max_loop,
                   const Alphabet& alphabet);

}  // namespace freqsynth
