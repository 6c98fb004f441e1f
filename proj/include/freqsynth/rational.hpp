#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace freqsynth {

// Exact rational arithmetic; values are kept in lowest terms by GMP.
using Rational = mpq_class;

// Accepts "n/d", an integer "n" or a decimal "0.25". Throws std::invalid_argument.
Rational parse_rational(std::string_view text);

std::string to_string(const Rational& q);
std::string to_decimal(const Rational& q, int digits = 6);

// "p/q (≈decimal)"
std::string format_rational(const Rational& q);

double to_double(const Rational& q);

}  // namespace freqsynth
