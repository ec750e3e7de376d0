#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <stdexcept>

#include "fcrk/poly.hpp"

using namespace fcrk;

namespace {
Rational R(const char* s) { return parse_rational(s); }
}  // namespace

TEST_CASE("parse and print rationals") {
  CHECK(R("3") == 3);
  CHECK(R("-5/4") == Rational(-5) / 4);
  CHECK(R(" +6/8 ") == Rational(3) / 4);
  CHECK(to_string(R("6/8")) == "3/4");
  CHECK(to_string(R("-10/5")) == "-2");
  CHECK_THROWS_AS(R("1/0"), std::invalid_argument);
  CHECK_THROWS_AS(R("1.5"), std::invalid_argument);
  CHECK_THROWS_AS(R(""), std::invalid_argument);
  CHECK_THROWS_AS(R("1/"), std::invalid_argument);
}

TEST_CASE("to_double rounds to nearest") {
  CHECK(to_double(R("1/3")) == 1.0 / 3.0);
  CHECK(to_double(R("-2/7")) == -2.0 / 7.0);
  CHECK(to_double(R("4299619/15622416")) == 4299619.0 / 15622416.0);
}

TEST_CASE("canonical form strips trailing zeros") {
  RationalPoly p{0, 1, 0, 0};
  CHECK(p.coeffs().size() == 2);
  CHECK(p.degree() == 1);
  RationalPoly z{0, 0};
  CHECK(z.is_zero());
  CHECK(z.degree() == -1);
  CHECK(z == RationalPoly{});
  CHECK((p - p).is_zero());
}

TEST_CASE("evaluation of tableau entries") {
  // b_1 of the order-3 FCRK method: α − 5/4α² + 1/2α³
  RationalPoly b1{0, 1, R("-5/4"), R("1/2")};
  CHECK(b1(Rational(1)) == R("1/4"));
  CHECK(b1(Rational(0)) == 0);
  RationalPoly a21{0, 0, R("1/2")};
  CHECK(a21(R("1/2")) == R("1/8"));
  CHECK(b1(1.0) == doctest::Approx(0.25));
}

TEST_CASE("arithmetic matches pointwise evaluation") {
  std::mt19937 gen(7);
  std::uniform_int_distribution<int> coef(-9, 9);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Rational> ca, cb;
    for (int k = 0; k < 4; ++k) ca.push_back(Rational(coef(gen)) / (1 + trial));
    for (int k = 0; k < 3; ++k) cb.push_back(Rational(coef(gen), 7));
    const RationalPoly a(ca), b(cb);
    for (const Rational x : {R("0"), R("1"), R("-2/3"), R("5/11")}) {
      CHECK((a + b)(x) == a(x) + b(x));
      CHECK((a - b)(x) == a(x) - b(x));
      CHECK((a * b)(x) == a(x) * b(x));
      CHECK((a * R("3/5"))(x) == a(x) * R("3/5"));
    }
  }
}

TEST_CASE("integral and antiderivative") {
  RationalPoly p{1, 2, 3};  // 1 + 2α + 3α²
  CHECK(p.integral01() == 3);
  const RationalPoly P = p.antiderivative();
  CHECK(P == RationalPoly{0, 1, 1, 1});
  CHECK(P(Rational(1)) == p.integral01());
  CHECK(RationalPoly{}.integral01() == 0);
}

TEST_CASE("monomial and constant") {
  CHECK(RationalPoly::monomial(3, 2) == RationalPoly{0, 0, 0, 2});
  CHECK(RationalPoly::constant(0).is_zero());
  CHECK(RationalPoly::monomial(2).coeff(2) == 1);
  CHECK(RationalPoly::monomial(2).coeff(7) == 0);
}

TEST_CASE("to_string") {
  CHECK(RationalPoly{0, 1, R("-5/4"), R("1/2")}.to_string() == "a - 5/4*a^2 + 1/2*a^3");
  CHECK(RationalPoly{}.to_string() == "0");
  CHECK(RationalPoly{R("-1")}.to_string("b") == "-1");
}
