// SPDX-License-Identifier: Apache-2.0
#ifndef BALLISTIC_RATIONAL_HPP
#define BALLISTIC_RATIONAL_HPP

#include <cstdint>
#include <numeric>

namespace ballistic {

/// Exact small rational. Enough arithmetic for drift tables and symbolic
/// polynomial sums; values stay tiny, no overflow handling needed.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  constexpr Rational() = default;
  constexpr Rational(std::int64_t n) : num(n), den(1) {}
  Rational(std::int64_t n, std::int64_t d) : num(n), den(d) { normalize(); }

  void normalize() {
    if (den < 0) {
      num = -num;
      den = -den;
    }
    std::int64_t g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
    if (num == 0) den = 1;
  }

  double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }

  friend Rational operator+(Rational a, Rational b) { return Rational(a.num * b.den + b.num * a.den, a.den * b.den); }
  friend Rational operator-(Rational a, Rational b) { return Rational(a.num * b.den - b.num * a.den, a.den * b.den); }
  friend Rational operator*(Rational a, Rational b) { return Rational(a.num * b.num, a.den * b.den); }
  friend bool operator==(Rational a, Rational b) { return a.num == b.num && a.den == b.den; }
};

}  // namespace ballistic

#endif
