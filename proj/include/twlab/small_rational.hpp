#pragma once

#include <cstdint>
#include <stdexcept>

#include "twlab/rational.hpp"

namespace twlab {

// Thrown when a SmallRational result leaves the int64 range. Callers that
// use SmallRational as a fast path catch it and redo the work with Rational.
struct SmallRationalOverflow : std::overflow_error {
  SmallRationalOverflow() : std::overflow_error("SmallRational overflow") {}
};

// Exact rational with int64 numerator/denominator. Always reduced, with a
// positive denominator. Arithmetic goes through __int128 and throws
// SmallRationalOverflow instead of wrapping.
class SmallRational {
 public:
  using i64 = std::int64_t;
  using i128 = __int128;

  constexpr SmallRational() = default;
  constexpr SmallRational(i64 value) : num_(value), den_(1) {}  // NOLINT implicit

  static SmallRational from(const Rational& q) {
    if (!q.get_num().fits_slong_p() || !q.get_den().fits_slong_p()) throw SmallRationalOverflow();
    SmallRational r;
    r.num_ = q.get_num().get_si();
    r.den_ = q.get_den().get_si();
    return r;
  }

  Rational to_rational() const {
    Rational q(Integer(static_cast<long>(num_)), Integer(static_cast<long>(den_)));
    return q;
  }

  i64 num() const { return num_; }
  i64 den() const { return den_; }
  bool is_zero() const { return num_ == 0; }
  int sign() const { return (num_ > 0) - (num_ < 0); }

  friend SmallRational operator+(const SmallRational& a, const SmallRational& b) {
    if (a.num_ == 0) return b;
    if (b.num_ == 0) return a;
    if (a.den_ == 1 && b.den_ == 1) return make(i128(a.num_) + b.num_, 1);
    i64 g = gcd64(a.den_, b.den_);
    i128 num = i128(a.num_) * (b.den_ / g) + i128(b.num_) * (a.den_ / g);
    i128 den = i128(a.den_) * (b.den_ / g);
    return reduce(num, den);
  }
  friend SmallRational operator-(const SmallRational& a, const SmallRational& b) { return a + (-b); }
  friend SmallRational operator*(const SmallRational& a, const SmallRational& b) {
    if (a.num_ == 0 || b.num_ == 0) return SmallRational();
    i64 g1 = gcd64(abs64(a.num_), b.den_);
    i64 g2 = gcd64(abs64(b.num_), a.den_);
    i128 num = i128(a.num_ / g1) * (b.num_ / g2);
    i128 den = i128(a.den_ / g2) * (b.den_ / g1);
    return make(num, den);
  }
  friend SmallRational operator/(const SmallRational& a, const SmallRational& b) {
    if (b.num_ == 0) throw std::domain_error("SmallRational division by zero");
    SmallRational inv;
    inv.num_ = b.num_ < 0 ? -b.den_ : b.den_;
    inv.den_ = abs64(b.num_);
    return a * inv;
  }
  SmallRational operator-() const {
    if (num_ == INT64_MIN) throw SmallRationalOverflow();
    SmallRational r = *this;
    r.num_ = -r.num_;
    return r;
  }
  SmallRational& operator+=(const SmallRational& o) { return *this = *this + o; }
  SmallRational& operator-=(const SmallRational& o) { return *this = *this - o; }
  SmallRational& operator*=(const SmallRational& o) { return *this = *this * o; }
  SmallRational& operator/=(const SmallRational& o) { return *this = *this / o; }

  friend bool operator==(const SmallRational& a, const SmallRational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator<(const SmallRational& a, const SmallRational& b) {
    return i128(a.num_) * b.den_ < i128(b.num_) * a.den_;
  }
  friend bool operator>(const SmallRational& a, const SmallRational& b) { return b < a; }
  friend bool operator<=(const SmallRational& a, const SmallRational& b) { return !(b < a); }
  friend bool operator>=(const SmallRational& a, const SmallRational& b) { return !(a < b); }

 private:
  i64 num_ = 0;
  i64 den_ = 1;

  static i64 abs64(i64 v) { return v < 0 ? -v : v; }
  static i64 gcd64(i64 a, i64 b) {
    while (b != 0) {
      i64 t = a % b;
      a = b;
      b = t;
    }
    return a < 0 ? -a : a;
  }
  static i128 gcd128(i128 a, i128 b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
      i128 t = a % b;
      a = b;
      b = t;
    }
    return a;
  }
  static SmallRational make(i128 num, i128 den) {
    constexpr i128 lo = INT64_MIN + 1;
    constexpr i128 hi = INT64_MAX;
    if (num < lo || num > hi || den > hi) throw SmallRationalOverflow();
    SmallRational r;
    r.num_ = static_cast<i64>(num);
    r.den_ = static_cast<i64>(den);
    return r;
  }
  static SmallRational reduce(i128 num, i128 den) {
    if (num == 0) return SmallRational();
    i128 g = gcd128(num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
    return make(num, den);
  }
};

}  // namespace twlab
