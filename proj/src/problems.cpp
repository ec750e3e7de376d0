#include "fcrk/problems.hpp"

#include <cmath>
#include <numbers>

#include "fcrk/errors.hpp"

namespace fcrk {

double shrinking_argument(double t) {
  const double q = 1.0 + 2.0 * t;
  return t / (q * q);
}

double vanishing_delay_argument(double t) {
  const double s = std::sin(100.0 * std::numbers::pi * t);
  return t - s * s / 100.0;
}

namespace {

State exp_pos(double t) { return {std::exp(t)}; }
State exp_neg(double t) { return {std::exp(-t)}; }
State minus_exp_neg(double t) { return {-std::exp(-t)}; }

// u(θ)^{(1+2t)²} with θ = t/(1+2t)²
State shrinking_power(double t, const SolutionView& u) {
  const double q = 1.0 + 2.0 * t;
  const double theta = shrinking_argument(t);
  const double base = u(theta)[0];
  if (!(base > 0.0)) throw DomainError("real power of nonpositive base", theta, 0.0, t);
  return {std::pow(base, q * q)};
}

State vanishing_product(double t, const SolutionView& u) {
  const double g = vanishing_delay_argument(t);
  return {u(g)[0] * u(t)[0] * std::exp(g)};
}

}  // namespace

RfdeProblem problem1() {
  RfdeProblem p;
  p.id = "p1";
  p.history = HistorySpec{0.0, 0.0, exp_pos, std::nullopt};
  p.rhs = shrinking_power;
  p.exact = exp_pos;
  p.t_final = 1.0;
  return p;
}

RfdeProblem problem2() {
  RfdeProblem p;
  p.id = "p2";
  // g(t) ≥ t − 1/100
  p.history = HistorySpec{0.0, 0.01, exp_neg, std::nullopt};
  p.rhs = [](double t, const SolutionView& u) {
    State f = vanishing_product(t, u);
    f[0] = -f[0];
    return f;
  };
  p.exact = exp_neg;
  p.t_final = 0.5;
  return p;
}

Rfde2Problem problem3() {
  Rfde2Problem p;
  p.id = "p3";
  p.history = HistorySpec{0.0, 0.0, exp_neg, State{-1.0}};
  p.rhs = shrinking_power;
  p.exact = exp_neg;
  p.exact_derivative = minus_exp_neg;
  p.t_final = 3.0;
  return p;
}

Rfde2Problem problem4() {
  Rfde2Problem p;
  p.id = "p4";
  p.history = HistorySpec{0.0, 0.01, exp_neg, State{-1.0}};
  p.rhs = vanishing_product;
  p.exact = exp_neg;
  p.exact_derivative = minus_exp_neg;
  p.t_final = 0.5;
  return p;
}

namespace {

// k(k−1)···(k−m+1) t^{k−m}
double monomial_derivative(int k, int m, double t) {
  if (m > k) return 0.0;
  double f = 1.0;
  for (int j = 0; j < m; ++j) f *= k - j;
  return f * std::pow(t, k - m);
}

void require_degree(int degree) {
  if (degree < 0) throw ConfigError("quadrature degree must be nonnegative");
}

}  // namespace

RfdeProblem quadrature_problem1(int degree) {
  require_degree(degree);
  RfdeProblem p;
  p.id = "quad1-" + std::to_string(degree);
  auto exact = [degree](double t) { return State{monomial_derivative(degree, 0, t)}; };
  p.history = HistorySpec{0.0, 0.0, exact, std::nullopt};
  p.rhs = [degree](double t, const SolutionView&) { return State{monomial_derivative(degree, 1, t)}; };
  p.exact = exact;
  p.t_final = 1.0;
  return p;
}

Rfde2Problem quadrature_problem2(int degree) {
  require_degree(degree);
  Rfde2Problem p;
  p.id = "quad2-" + std::to_string(degree);
  auto exact = [degree](double t) { return State{monomial_derivative(degree, 0, t)}; };
  auto dexact = [degree](double t) { return State{monomial_derivative(degree, 1, t)}; };
  p.history = HistorySpec{0.0, 0.0, exact, dexact(0.0)};
  p.rhs = [degree](double t, const SolutionView&) { return State{monomial_derivative(degree, 2, t)}; };
  p.exact = exact;
  p.exact_derivative = dexact;
  p.t_final = 1.0;
  return p;
}

Problem quadrature_problem(int degree, OrderKind kind) {
  if (kind == OrderKind::first) return quadrature_problem1(degree);
  return quadrature_problem2(degree);
}

std::optional<Problem> problem_by_id(std::string_view id) {
  if (id == "p1") return problem1();
  if (id == "p2") return problem2();
  if (id == "p3") return problem3();
  if (id == "p4") return problem4();
  for (auto [prefix, kind] : {std::pair{std::string_view("quad1-"), OrderKind::first},
                              std::pair{std::string_view("quad2-"), OrderKind::second}}) {
    if (!id.starts_with(prefix)) continue;
    const auto digits = id.substr(prefix.size());
    if (digits.empty() || digits.size() > 2) return std::nullopt;
    int d = 0;
    for (char ch : digits) {
      if (ch < '0' || ch > '9') return std::nullopt;
      d = 10 * d + (ch - '0');
    }
    return quadrature_problem(d, kind);
  }
  return std::nullopt;
}

}  // namespace fcrk
