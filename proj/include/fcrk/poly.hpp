#pragma once

#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

#include "fcrk/rational.hpp"

namespace fcrk {

/// Univariate polynomial in the local step coordinate α with exact rational
/// coefficients, constant term first. Trailing zeros are always stripped, so
/// the zero polynomial has no coefficients and equality is structural.
class RationalPoly {
 public:
  RationalPoly() = default;
  explicit RationalPoly(std::vector<Rational> coeffs);
  RationalPoly(std::initializer_list<Rational> coeffs);

  static RationalPoly constant(const Rational& value);
  /// value · α^k
  static RationalPoly monomial(std::size_t k, const Rational& value = 1);

  const std::vector<Rational>& coeffs() const noexcept { return coeffs_; }
  bool is_zero() const noexcept { return coeffs_.empty(); }
  /// Degree, or -1 for the zero polynomial.
  int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
  /// Coefficient of α^k (zero beyond the degree).
  Rational coeff(std::size_t k) const;

  Rational operator()(const Rational& x) const;
  double operator()(double x) const;

  /// ∫₀¹ p(α) dα
  Rational integral01() const;
  /// Antiderivative vanishing at 0.
  RationalPoly antiderivative() const;

  RationalPoly& operator+=(const RationalPoly& other);
  RationalPoly& operator-=(const RationalPoly& other);
  RationalPoly& operator*=(const Rational& scale);

  friend RationalPoly operator+(RationalPoly a, const RationalPoly& b) { return a += b; }
  friend RationalPoly operator-(RationalPoly a, const RationalPoly& b) { return a -= b; }
  friend RationalPoly operator*(RationalPoly a, const Rational& s) { return a *= s; }
  friend RationalPoly operator*(const Rational& s, RationalPoly a) { return a *= s; }
  friend RationalPoly operator*(const RationalPoly& a, const RationalPoly& b);
  friend bool operator==(const RationalPoly& a, const RationalPoly& b) = default;

  /// Human-readable form, e.g. "a - 5/4*a^2 + 1/2*a^3" (variable name configurable).
  std::string to_string(const std::string& var = "a") const;

 private:
  void normalize();

  std::vector<Rational> coeffs_;
};

}  // namespace fcrk
