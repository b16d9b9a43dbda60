#pragma once

#include <compare>
#include <string>

#include "json.hpp"
#include "splitcubic/core.hpp"

namespace splitcubic {

// An exponent r + cD*Delta + cd*delta + ce*eps where 0 < eps < delta < Delta
// are symbolic infinitesimals. Comparison is lexicographic on
// (r, cD, cd, ce): Delta is smaller than every positive rational, delta is
// smaller than every positive multiple of Delta, and so on.
//
// Coefficients are exact rationals: slopes such as Delta*(n/8 - 2/v) are
// rarely integral.
struct AugmentedExponent {
  Rational value;
  Rational big_delta;
  Rational delta;
  Rational eps;

  AugmentedExponent() = default;
  AugmentedExponent(Rational r) : value(std::move(r)) {}  // NOLINT: implicit by intent
  AugmentedExponent(long r) : value(r) {}                  // NOLINT
  template <class T, class U>
  AugmentedExponent(const __gmp_expr<T, U>& r) : value(r) {}  // NOLINT: gmpxx expressions
  AugmentedExponent(Rational r, Rational cD, Rational cd, Rational ce)
      : value(std::move(r)), big_delta(std::move(cD)), delta(std::move(cd)), eps(std::move(ce)) {}

  static AugmentedExponent Delta(const Rational& c = 1) { return {0, c, 0, 0}; }
  static AugmentedExponent small_delta(const Rational& c = 1) { return {0, 0, c, 0}; }
  static AugmentedExponent epsilon(const Rational& c = 1) { return {0, 0, 0, c}; }

  bool is_rational() const { return big_delta == 0 && delta == 0 && eps == 0; }
  // Largest infinitesimal with a nonzero coefficient that is negative, i.e.
  // the quantity lies strictly below its rational part.
  int sign_of_infinitesimal_part() const;

  AugmentedExponent& operator+=(const AugmentedExponent& o);
  AugmentedExponent& operator-=(const AugmentedExponent& o);
  AugmentedExponent& operator*=(const Rational& s);

  friend AugmentedExponent operator+(AugmentedExponent a, const AugmentedExponent& b) { return a += b; }
  friend AugmentedExponent operator-(AugmentedExponent a, const AugmentedExponent& b) { return a -= b; }
  friend AugmentedExponent operator*(AugmentedExponent a, const Rational& s) { return a *= s; }
  friend AugmentedExponent operator*(const Rational& s, AugmentedExponent a) { return a *= s; }
  friend AugmentedExponent operator/(AugmentedExponent a, const Rational& s) {
    if (s == 0) throw PreconditionError("division of an exponent by zero");
    return a *= Rational(1) / s;
  }
  AugmentedExponent operator-() const { return {-value, -big_delta, -delta, -eps}; }

  friend bool operator==(const AugmentedExponent& a, const AugmentedExponent& b) {
    return a.value == b.value && a.big_delta == b.big_delta && a.delta == b.delta && a.eps == b.eps;
  }
  friend std::strong_ordering operator<=>(const AugmentedExponent& a, const AugmentedExponent& b);

  std::string to_string() const;
};

const AugmentedExponent& max(const AugmentedExponent& a, const AugmentedExponent& b);
const AugmentedExponent& min(const AugmentedExponent& a, const AugmentedExponent& b);

// {"r":"p/q","mD":..,"md":..,"me":..}; coefficients are JSON integers when
// integral and "p/q" strings otherwise.
nlohmann::json to_json(const AugmentedExponent& e);
AugmentedExponent augmented_from_json(const nlohmann::json& j);
nlohmann::json rational_to_json(const Rational& q);  // "p/q" string
Rational rational_from_json(const nlohmann::json& j);

}  // namespace splitcubic
