#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "fcrk/errors.hpp"
#include "fcrk/problems.hpp"

using namespace fcrk;

namespace {

struct FunctionView final : SolutionView {
  std::function<State(double)> f;
  explicit FunctionView(std::function<State(double)> g) : f(std::move(g)) {}
  State operator()(double t) const override { return f(t); }
};

}  // namespace

TEST_CASE("exact solutions satisfy their equations") {
  // second derivative of e^{±t} is itself; first derivative is ±e^{±t}
  const RfdeProblem p1 = problem1(), p2 = problem2();
  const Rfde2Problem p3 = problem3(), p4 = problem4();
  for (int j = 0; j < 20; ++j) {
    const double t = (j + 0.5) / 20.0;
    {
      const double f = p1.rhs(t, FunctionView(p1.exact))[0];
      CHECK(std::abs(f - std::exp(t)) <= 1e-12 * std::max(1.0, std::abs(f)));
    }
    {
      const double s = 0.5 * t;
      const double f = p2.rhs(s, FunctionView(p2.exact))[0];
      CHECK(std::abs(f + std::exp(-s)) <= 1e-12 * std::max(1.0, std::abs(f)));
    }
    {
      const double s = 3.0 * t;
      const double f = p3.rhs(s, FunctionView(p3.exact))[0];
      CHECK(std::abs(f - std::exp(-s)) <= 1e-12 * std::max(1.0, std::abs(f)));
    }
    {
      const double s = 0.5 * t;
      const double f = p4.rhs(s, FunctionView(p4.exact))[0];
      CHECK(std::abs(f - std::exp(-s)) <= 1e-12 * std::max(1.0, std::abs(f)));
    }
  }
}

TEST_CASE("initial values of the right-hand sides") {
  CHECK(problem1().rhs(0.0, FunctionView(problem1().exact))[0] == 1.0);
  CHECK(problem2().rhs(0.0, FunctionView(problem2().exact))[0] == -1.0);
  CHECK(problem3().rhs(0.0, FunctionView(problem3().exact))[0] == 1.0);
  CHECK(problem4().rhs(0.0, FunctionView(problem4().exact))[0] == 1.0);
  for (double t : {0.5, 1.0, 2.0}) {
    const double f = problem3().rhs(t, FunctionView(problem3().exact))[0];
    CHECK(f == doctest::Approx(std::exp(-t)).epsilon(1e-14));
  }
}

TEST_CASE("spans and initial data") {
  CHECK(problem1().t_final == 1.0);
  CHECK(problem2().t_final == 0.5);
  CHECK(problem3().t_final == 3.0);
  CHECK(problem4().t_final == 0.5);
  CHECK(problem1().exact(1.0)[0] == doctest::Approx(std::numbers::e));
  CHECK(problem3().exact(3.0)[0] == doctest::Approx(std::exp(-3.0)));
  CHECK(*problem3().history.phi_dot0 == State{-1.0});
  CHECK(*problem4().history.phi_dot0 == State{-1.0});
  CHECK(problem4().exact_derivative(0.0)[0] == -1.0);
  CHECK(problem1().history.phi(0.0) == State{1.0});
}

TEST_CASE("exact solutions match the history") {
  for (double t : {0.0, -0.002, -0.004, -0.007, -0.01}) {
    CHECK(problem2().exact(t) == problem2().history.phi(t));
    CHECK(problem4().exact(t) == problem4().history.phi(t));
  }
}

TEST_CASE("exact derivatives are derivatives of the exact solutions") {
  for (const Rfde2Problem& p : {problem3(), problem4()}) {
    for (double t : {0.1, 0.25, 0.4}) {
      const double d = 1e-6;
      const double fd = (p.exact(t + d)[0] - p.exact(t - d)[0]) / (2 * d);
      CHECK(fd == doctest::Approx(p.exact_derivative(t)[0]).epsilon(1e-8));
    }
  }
}

TEST_CASE("deviating arguments") {
  for (int j = 0; j <= 200; ++j) {
    const double t = j / 50.0;
    const double th = shrinking_argument(t);
    CHECK(th >= 0.0);
    CHECK(th <= t);
  }
  CHECK(shrinking_argument(1.0) == doctest::Approx(1.0 / 9.0));
  for (int j = 0; j <= 500; ++j) {
    const double t = j / 1000.0 + 0.0003;
    CHECK(vanishing_delay_argument(t) <= t);
  }
  for (int k = 0; k <= 50; ++k) {
    const double t = k / 100.0;
    CHECK(std::abs(vanishing_delay_argument(t) - t) <= 1e-28);
  }
  CHECK(vanishing_delay_argument(1.0 / 200) == doctest::Approx(1.0 / 200 - 1.0 / 100));
}

TEST_CASE("nonpositive base is a domain error") {
  const FunctionView bad([](double) { return State{-1.0}; });
  CHECK_THROWS_AS(problem1().rhs(0.5, bad), DomainError);
  CHECK_THROWS_AS(problem3().rhs(0.5, bad), DomainError);
  const FunctionView zero([](double) { return State{0.0}; });
  CHECK_THROWS_AS(problem1().rhs(0.5, zero), DomainError);
}

TEST_CASE("quadrature problems") {
  const FunctionView none([](double) -> State { throw std::logic_error("quadrature rhs must not read u"); });
  const RfdeProblem q0 = quadrature_problem1(0);
  CHECK(q0.rhs(0.3, none) == State{0.0});
  CHECK(q0.exact(0.7) == State{1.0});
  CHECK(q0.history.phi(0.0) == State{1.0});
  const RfdeProblem q3 = quadrature_problem1(3);
  CHECK(q3.rhs(0.5, none)[0] == 0.75);
  CHECK(q3.exact(0.5)[0] == 0.125);
  const Rfde2Problem q4 = quadrature_problem2(4);
  CHECK(q4.rhs(0.5, none)[0] == 3.0);
  CHECK(*q4.history.phi_dot0 == State{0.0});
  CHECK(*quadrature_problem2(1).history.phi_dot0 == State{1.0});
  CHECK(std::holds_alternative<Rfde2Problem>(quadrature_problem(2, OrderKind::second)));
  CHECK_THROWS_AS(quadrature_problem1(-1), ConfigError);
}

TEST_CASE("problem ids") {
  for (const char* id : {"p1", "p2", "p3", "p4"}) {
    const auto p = problem_by_id(id);
    REQUIRE(p.has_value());
    CHECK(problem_id(*p) == id);
  }
  CHECK(std::holds_alternative<Rfde2Problem>(*problem_by_id("p3")));
  CHECK(problem_id(*problem_by_id("quad2-4")) == "quad2-4");
  CHECK_FALSE(problem_by_id("p9").has_value());
  CHECK_FALSE(problem_by_id("quad1-").has_value());
  CHECK_FALSE(problem_by_id("quad1-x").has_value());
}
