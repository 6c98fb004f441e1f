#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace freqsynth {

// A letter is a bit mask over the atoms of an Alphabet.
using Letter = std::uint32_t;

class Alphabet {
 public:
  static constexpr std::size_t kMaxAtoms = 16;

  Alphabet() = default;
  explicit Alphabet(std::vector<std::string> atoms);

  const std::vector<std::string>& atoms() const { return atoms_; }
  std::size_t size() const { return atoms_.size(); }
  Letter letter_count() const { return Letter{1} << atoms_.size(); }

  int index_of(std::string_view atom) const;
  bool holds(Letter letter, std::string_view atom) const;

  // Throws std::invalid_argument for names outside the alphabet.
  Letter make_letter(const std::vector<std::string>& names) const;
  // Re-encodes a letter of another alphabet; atoms unknown here are dropped.
  Letter translate(Letter letter, const Alphabet& from) const;
  std::vector<std::string> names(Letter letter) const;
  // "{a b}" / "{}"
  std::string format(Letter letter) const;

  Alphabet merged(const Alphabet& other) const;

  friend bool operator==(const Alphabet&, const Alphabet&) = default;

 private:
  std::vector<std::string> atoms_;
};

}  // namespace freqsynth
