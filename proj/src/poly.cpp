#include "fcrk/poly.hpp"

#include <sstream>
#include <utility>

namespace fcrk {

RationalPoly::RationalPoly(std::vector<Rational> coeffs) : coeffs_(std::move(coeffs)) { normalize(); }

RationalPoly::RationalPoly(std::initializer_list<Rational> coeffs) : coeffs_(coeffs) { normalize(); }

RationalPoly RationalPoly::constant(const Rational& value) { return RationalPoly({value}); }

RationalPoly RationalPoly::monomial(std::size_t k, const Rational& value) {
  std::vector<Rational> c(k + 1);
  c[k] = value;
  return RationalPoly(std::move(c));
}

void RationalPoly::normalize() {
  while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

Rational RationalPoly::coeff(std::size_t k) const { return k < coeffs_.size() ? coeffs_[k] : Rational(0); }

Rational RationalPoly::operator()(const Rational& x) const {
  Rational acc = 0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

double RationalPoly::operator()(double x) const {
  double acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + to_double(*it);
  return acc;
}

RationalPoly RationalPoly::antiderivative() const {
  std::vector<Rational> c(coeffs_.size() + 1);
  for (std::size_t k = 0; k < coeffs_.size(); ++k) c[k + 1] = coeffs_[k] / Rational(k + 1);
  return RationalPoly(std::move(c));
}

Rational RationalPoly::integral01() const { return antiderivative()(Rational(1)); }

RationalPoly& RationalPoly::operator+=(const RationalPoly& other) {
  if (other.coeffs_.size() > coeffs_.size()) coeffs_.resize(other.coeffs_.size());
  for (std::size_t k = 0; k < other.coeffs_.size(); ++k) coeffs_[k] += other.coeffs_[k];
  normalize();
  return *this;
}

RationalPoly& RationalPoly::operator-=(const RationalPoly& other) {
  if (other.coeffs_.size() > coeffs_.size()) coeffs_.resize(other.coeffs_.size());
  for (std::size_t k = 0; k < other.coeffs_.size(); ++k) coeffs_[k] -= other.coeffs_[k];
  normalize();
  return *this;
}

RationalPoly& RationalPoly::operator*=(const Rational& scale) {
  for (auto& c : coeffs_) c *= scale;
  normalize();
  return *this;
}

RationalPoly operator*(const RationalPoly& a, const RationalPoly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<Rational> c(a.coeffs_.size() + b.coeffs_.size() - 1);
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
    for (std::size_t j = 0; j < b.coeffs_.size(); ++j) c[i + j] += a.coeffs_[i] * b.coeffs_[j];
  return RationalPoly(std::move(c));
}

std::string RationalPoly::to_string(const std::string& var) const {
  if (is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (std::size_t k = 0; k < coeffs_.size(); ++k) {
    const Rational& c = coeffs_[k];
    if (c == 0) continue;
    const Rational mag = c < 0 ? Rational(-c) : c;
    if (first)
      os << (c < 0 ? "-" : "");
    else
      os << (c < 0 ? " - " : " + ");
    first = false;
    if (k == 0) {
      os << fcrk::to_string(mag);
      continue;
    }
    if (mag != 1) os << fcrk::to_string(mag) << "*";
    os << var;
    if (k > 1) os << "^" << k;
  }
  return os.str();
}

}  // namespace fcrk
