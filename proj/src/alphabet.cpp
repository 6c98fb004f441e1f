#include "freqsynth/alphabet.hpp"

#include <algorithm>
#include <stdexcept>

namespace freqsynth {

Alphabet::Alphabet(std::vector<std::string> atoms) : atoms_(std::move(atoms)) {
  std::sort(atoms_.begin(), atoms_.end());
  atoms_.erase(std::unique(atoms_.begin(), atoms_.end()), atoms_.end());
  if (atoms_.size() > kMaxAtoms)
    throw std::invalid_argument("alphabet has more than " + std::to_string(kMaxAtoms) + " atoms");
}

int Alphabet::index_of(std::string_view atom) const {
  auto it = std::lower_bound(atoms_.begin(), atoms_.end(), atom);
  if (it == atoms_.end() || *it != atom) return -1;
  return static_cast<int>(it - atoms_.begin());
}

bool Alphabet::holds(Letter letter, std::string_view atom) const {
  int i = index_of(atom);
  return i >= 0 && ((letter >> i) & 1U);
}

Letter Alphabet::make_letter(const std::vector<std::string>& names) const {
  Letter l = 0;
  for (const auto& n : names) {
    int i = index_of(n);
    if (i < 0) throw std::invalid_argument("atom '" + n + "' is not in the alphabet");
    l |= Letter{1} << i;
  }
  return l;
}

Letter Alphabet::translate(Letter letter, const Alphabet& from) const {
  if (&from == this || from.atoms_ == atoms_) return letter;
  Letter l = 0;
  for (std::size_t i = 0; i < from.atoms_.size(); ++i) {
    if (!((letter >> i) & 1U)) continue;
    int j = index_of(from.atoms_[i]);
    if (j >= 0) l |= Letter{1} << j;
  }
  return l;
}

std::vector<std::string> Alphabet::names(Letter letter) const {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < atoms_.size(); ++i)
    if ((letter >> i) & 1U) out.push_back(atoms_[i]);
  return out;
}

std::string Alphabet::format(Letter letter) const {
  std::string s = "{";
  bool first = true;
  for (const auto& n : names(letter)) {
    if (!first) s += ' ';
    first = false;
    s += n;
  }
  return s + "}";
}

Alphabet Alphabet::merged(const Alphabet& other) const {
  auto all = atoms_;
  all.insert(all.end(), other.atoms_.begin(), other.atoms_.end());
  return Alphabet(std::move(all));
}

}  // namespace freqsynth
