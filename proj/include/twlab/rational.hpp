#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>

#include "twlab/error.hpp"

namespace twlab {

using Rational = mpq_class;
using Integer = mpz_class;

inline Rational make_rational(long num, long den = 1) {
  Rational q(num, den);
  q.canonicalize();
  return q;
}

// Accepts "p", "p/q" and plain decimals; "0.05" is read exactly as 1/20.
// Exponent notation is rejected.
inline Rational parse_rational(std::string_view text) {
  std::string s(text);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.pop_back();
  std::size_t first = s.find_first_not_of(" \t");
  if (first == std::string::npos) throw InvalidInput("empty rational literal");
  s = s.substr(first);

  auto valid_int = [](std::string_view t) {
    std::size_t i = 0;
    if (!t.empty() && (t[0] == '-' || t[0] == '+')) i = 1;
    if (i == t.size()) return false;
    for (; i < t.size(); ++i)
      if (t[i] < '0' || t[i] > '9') return false;
    return true;
  };
  auto strip_plus = [](std::string t) {
    if (!t.empty() && t[0] == '+') t.erase(0, 1);
    return t;
  };

  if (auto slash = s.find('/'); slash != std::string::npos) {
    std::string num = s.substr(0, slash);
    std::string den = s.substr(slash + 1);
    if (!valid_int(num) || !valid_int(den) || den[0] == '-' || den[0] == '+')
      throw InvalidInput("malformed rational literal '" + s + "'");
    Integer d(den);
    if (d == 0) throw InvalidInput("zero denominator in '" + s + "'");
    Rational q{Integer(strip_plus(num)), d};
    q.canonicalize();
    return q;
  }
  if (auto dot = s.find('.'); dot != std::string::npos) {
    std::string whole = s.substr(0, dot);
    std::string frac = s.substr(dot + 1);
    bool negative = !whole.empty() && whole[0] == '-';
    if (!whole.empty() && (whole[0] == '-' || whole[0] == '+')) whole.erase(0, 1);
    if (whole.empty()) whole = "0";
    if (frac.empty() || !valid_int(whole) || !valid_int(frac) || frac[0] == '-' || frac[0] == '+')
      throw InvalidInput("malformed decimal literal '" + s + "'");
    Integer scale = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
    Rational q{Integer(whole) * scale + Integer(frac), scale};
    q.canonicalize();
    return negative ? Rational(-q) : q;
  }
  if (!valid_int(s)) throw InvalidInput("malformed rational literal '" + s + "'");
  return Rational(Integer(strip_plus(s)));
}

inline std::string to_string(const Rational& q) { return q.get_str(); }

inline Rational abs_value(const Rational& q) { return q < 0 ? Rational(-q) : q; }

inline bool is_integral(const Rational& q) { return q.get_den() == 1; }

inline Rational power(const Rational& base, unsigned exponent) {
  Rational result = 1;
  for (unsigned i = 0; i < exponent; ++i) result *= base;
  return result;
}

// Nearest integer; exact halves round up.
inline Integer round_nearest(const Rational& q) {
  Rational shifted = q + Rational(1, 2);
  Integer f;
  mpz_fdiv_q(f.get_mpz_t(), shifted.get_num_mpz_t(), shifted.get_den_mpz_t());
  return f;
}

inline double to_double(const Rational& q) { return q.get_d(); }

}  // namespace twlab
