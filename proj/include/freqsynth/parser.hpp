#pragma once

#include "freqsynth/formula.hpp"

#include <stdexcept>
#include <string>
#include <string_view>

namespace freqsynth {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, std::size_t position);
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

// Parses the textual syntax and returns the negation normal form.
Formula parse_formula(std::string_view text);

// Same grammar, but negations and implications are kept as Not nodes.
Formula parse_formula_raw(std::string_view text);

}  // namespace freqsynth
