#include "freqsynth/rational.hpp"

#include <cctype>
#include <stdexcept>

namespace freqsynth {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string_view body = text;
  bool negative = false;
  if (!body.empty() && (body[0] == '-' || body[0] == '+')) {
    negative = body[0] == '-';
    body.remove_prefix(1);
  }
  Rational value;
  if (auto slash = body.find('/'); slash != std::string_view::npos) {
    auto num = body.substr(0, slash);
    auto den = body.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den))
      throw std::invalid_argument("malformed rational '" + std::string(text) + "'");
    mpz_class d{std::string(den), 10};
    if (d == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
    mpz_class n{std::string(num), 10};
    value = Rational(n, d);
    value.canonicalize();
  } else if (auto dot = body.find('.'); dot != std::string_view::npos) {
    auto whole = body.substr(0, dot);
    auto frac = body.substr(dot + 1);
    if ((!whole.empty() && !all_digits(whole)) || !all_digits(frac))
      throw std::invalid_argument("malformed decimal '" + std::string(text) + "'");
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, frac.size());
    mpz_class num{std::string(whole) + std::string(frac), 10};
    value = Rational(num, scale);
    value.canonicalize();
  } else {
    if (!all_digits(body))
      throw std::invalid_argument("malformed number '" + std::string(text) + "'");
    value = Rational(mpz_class{std::string(body), 10});
  }
  return negative ? Rational(-value) : value;
}

std::string to_string(const Rational& q) { return q.get_str(); }

std::string to_decimal(const Rational& q, int digits) {
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(digits));
  Rational scaled = abs(q) * scale + Rational(1, 2);
  mpz_class rounded = scaled.get_num() / scaled.get_den();
  std::string s = rounded.get_str();
  if (digits > 0) {
    if (s.size() <= static_cast<std::size_t>(digits))
      s.insert(0, static_cast<std::size_t>(digits) + 1 - s.size(), '0');
    s.insert(s.size() - static_cast<std::size_t>(digits), ".");
  }
  if (q < 0 && rounded != 0) s.insert(0, "-");
  return s;
}

std::string format_rational(const Rational& q) {
  return to_string(q) + " (≈" + to_decimal(q) + ")";
}

double to_double(const Rational& q) { return q.get_d(); }

}  // namespace freqsynth
