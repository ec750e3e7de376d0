#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <atomic>
#include <cmath>
#include <future>
#include <limits>

#include "fcrk/bench.hpp"
#include "fcrk/errors.hpp"
#include "fcrk/stepper.hpp"

using namespace fcrk;

namespace {

constexpr double eps = std::numeric_limits<double>::epsilon();

IntegrationConfig config(double h, double t_end, bool reuse = true) {
  IntegrationConfig cfg;
  cfg.h = h;
  cfg.t_end = t_end;
  cfg.reuse_enabled = reuse;
  return cfg;
}

RfdeProblem ode(std::string id, Rhs rhs, std::function<State(double)> exact) {
  RfdeProblem p;
  p.id = std::move(id);
  p.history = HistorySpec{0.0, 0.0, exact, std::nullopt};
  p.rhs = std::move(rhs);
  p.exact = std::move(exact);
  return p;
}

Rfde2Problem ode2(Rhs rhs, std::function<State(double)> exact, State du0) {
  Rfde2Problem p;
  p.id = "ode2";
  p.history = HistorySpec{0.0, 0.0, exact, du0};
  p.rhs = std::move(rhs);
  p.exact = std::move(exact);
  return p;
}

double max_err(const SolutionTrace& tr, const std::function<State(double)>& exact, int samples) {
  return sample_error(tr, exact, {}, samples).err;
}

}  // namespace

TEST_CASE("constant right-hand side is reproduced exactly") {
  const auto p = ode("one", [](double, const SolutionView&) { return State{1.0}; },
                     [](double t) { return State{t}; });
  const auto res = integrate_fcrk(p, builtin_fcrk(MethodId::FCRK3R), config(0.25, 1.0));
  for (const auto& seg : res.trace.segments())
    for (int j = 0; j <= 20; ++j) CHECK(std::abs(seg.value(j / 20.0)[0] - (seg.sigma + j / 20.0 * 0.25)) <= 4 * eps);
}

TEST_CASE("FCRK reuse adopts the last stage bitwise") {
  const auto res = integrate_fcrk(problem1(), builtin_fcrk(MethodId::FCRK3R), config(1.0 / 16, 1.0));
  const auto& segs = res.trace.segments();
  for (std::size_t n = 1; n < segs.size(); ++n) CHECK(segs[n].K.front() == segs[n - 1].K.back());
}

TEST_CASE("Problem 1 first step") {
  const auto res = integrate_fcrk(problem1(), builtin_fcrk(MethodId::FCRK3R), config(0.1, 1.0));
  CHECK(std::abs(res.trace.segments().front().value(1.0)[0] - std::exp(0.1)) < 1e-5);
}

TEST_CASE("evaluation accounting") {
  const FcrkTableau t = builtin_fcrk(MethodId::FCRK3R);
  const auto on = integrate_fcrk(problem2(), t, config(1.0 / 128, 0.5));
  CHECK(on.stats.steps == 64);
  CHECK(on.stats.nf == 193);
  CHECK(on.stats.restarts == 1);
  const auto off = integrate_fcrk(problem2(), t, config(1.0 / 128, 0.5, false));
  CHECK(off.stats.nf == 256);
  CHECK(off.stats.restarts == 64);
  IntegrationConfig bp = config(1.0 / 128, 0.5);
  bp.breakpoints = {0.25};
  const auto br = integrate_fcrk(problem2(), t, bp);
  CHECK(br.stats.nf == 194);
  CHECK(br.stats.restarts == 2);

  const auto n3 = integrate_fcrkn(problem3(), builtin_fcrkn(MethodId::FCRKN3R), config(1.0 / 32, 3.0));
  CHECK(n3.stats.steps == 96);
  CHECK(n3.stats.nf == 193);
  const auto n4 = integrate_fcrkn(problem4(), builtin_fcrkn(MethodId::FCRKN4R), config(1.0 / 64, 0.5));
  CHECK(n4.stats.steps == 32);
  CHECK(n4.stats.nf == 129);
  CHECK(n4.stats.in_step_queries.size() == 32);
}

TEST_CASE("right-hand side calls per step") {
  for (MethodId id : kAllMethods) {
    INFO(method_name(id));
    auto calls = std::make_shared<std::atomic<std::size_t>>(0);
    std::vector<std::size_t> per_step;
    Problem p = std::holds_alternative<FcrkTableau>(builtin(id)) ? Problem(problem1()) : Problem(problem3());
    std::visit(
        [&](auto& q) {
          Rhs inner = q.rhs;
          q.rhs = [inner, calls](double t, const SolutionView& u) {
            ++*calls;
            return inner(t, u);
          };
        },
        p);
    const auto res = integrate(p, builtin(id), config(0.125, std::holds_alternative<RfdeProblem>(p) ? 1.0 : 3.0));
    const std::size_t s = std::visit([](const auto& t) { return t.stages(); }, builtin(id));
    CHECK(*calls == res.stats.steps * (s - 1) + 1);
    CHECK(res.stats.nf == *calls);
  }
}

TEST_CASE("second-order steps") {
  const FcrknTableau t = builtin_fcrkn(MethodId::FCRKN3R);
  SUBCASE("constant acceleration") {
    const auto p = ode2([](double, const SolutionView&) { return State{2.0}; }, [](double t) { return State{t * t}; },
                        State{0.0});
    const auto res = integrate_fcrkn(p, t, config(0.5, 0.5));
    CHECK(res.trace.segments().front().value(1.0)[0] == 0.25);
  }
  SUBCASE("cubic from rest") {
    const auto p = ode2([](double s, const SolutionView&) { return State{6.0 * s}; },
                        [](double s) { return State{s * s * s}; }, State{0.0});
    const auto res = integrate_fcrkn(p, t, config(0.25, 1.0));
    const auto& seg = res.trace.segments().front();
    for (int j = 0; j <= 16; ++j) {
      const double x = j / 16.0 * 0.25;
      CHECK(std::abs(seg.value(j / 16.0)[0] - x * x * x) <= 4 * eps);
    }
  }
  SUBCASE("reuse adopts K_s") {
    const auto res = integrate_fcrkn(problem4(), t, config(1.0 / 64, 0.5));
    const auto& segs = res.trace.segments();
    for (std::size_t n = 1; n < segs.size(); ++n) CHECK(segs[n].K.front() == segs[n - 1].K.back());
  }
}

TEST_CASE("Problem 3 error reduction") {
  const FcrknTableau t = builtin_fcrkn(MethodId::FCRKN3R);
  const auto p = problem3();
  const double e1 = max_err(integrate_fcrkn(p, t, config(1.0 / 32, 3.0)).trace, p.exact, 16);
  const double e2 = max_err(integrate_fcrkn(p, t, config(1.0 / 64, 3.0)).trace, p.exact, 16);
  CHECK(e1 / e2 >= 8.0 * 0.7);
  CHECK(e1 / e2 <= std::pow(2.0, 3.5) * 1.4);
}

TEST_CASE("polynomial exactness at 101 points per step") {
  for (MethodId id : kAllMethods) {
    const Tableau t = builtin(id);
    const int p = std::visit([](const auto& x) { return x.claimed_order; }, t);
    const bool second = std::holds_alternative<FcrknTableau>(t);
    for (int d = 0; d <= p; ++d) {
      INFO(method_name(id), " degree ", d);
      const Problem q = quadrature_problem(d, second ? OrderKind::second : OrderKind::first);
      const auto res = integrate(q, t, config(1.0 / 16, 1.0));
      const auto& exact = std::visit([](const auto& x) { return x.exact; }, q);
      CHECK(max_err(res.trace, exact, 100) <= 50 * eps);
    }
  }
}

TEST_CASE("dense output is continuous at mesh points") {
  for (MethodId id : kAllMethods) {
    const Tableau t = builtin(id);
    const Problem p = std::holds_alternative<FcrkTableau>(t) ? Problem(problem2()) : Problem(problem4());
    const auto res = integrate(p, t, config(1.0 / 64, 0.5));
    const ContinuityReport c = mesh_continuity(res.trace);
    CHECK(c.max_jump == 0.0);
    CHECK(c.max_jump_derivative == 0.0);
  }
}

TEST_CASE("reuse on and off") {
  SUBCASE("FCRKN runs agree bitwise") {
    for (MethodId id : {MethodId::FCRKN3R, MethodId::FCRKN4R}) {
      for (const Rfde2Problem& p : {problem3(), problem4()}) {
        const auto a = integrate_fcrkn(p, builtin_fcrkn(id), config(1.0 / 32, p.t_final));
        const auto b = integrate_fcrkn(p, builtin_fcrkn(id), config(1.0 / 32, p.t_final, false));
        CHECK(a.trace.current_value() == b.trace.current_value());
        for (std::size_t n = 0; n < a.trace.segments().size(); ++n)
          CHECK(a.trace.segments()[n].y0 == b.trace.segments()[n].y0);
      }
    }
  }
  SUBCASE("FCRK without overlapping agrees bitwise") {
    const auto p = ode("decay", [](double t, const SolutionView& u) { return State{-u(t)[0]}; },
                       [](double t) { return State{std::exp(-t)}; });
    for (MethodId id : {MethodId::FCRK3R, MethodId::FCRK4R}) {
      const auto a = integrate_fcrk(p, builtin_fcrk(id), config(1.0 / 16, 1.0));
      const auto b = integrate_fcrk(p, builtin_fcrk(id), config(1.0 / 16, 1.0, false));
      for (std::size_t n = 0; n < a.trace.segments().size(); ++n)
        CHECK(a.trace.segments()[n].y0 == b.trace.segments()[n].y0);
      CHECK(a.stats.nf < b.stats.nf);
    }
  }
  SUBCASE("FCRK with overlapping differs at the level of the method error") {
    // The reused K_s saw the stage function Y^s inside the previous step,
    // a fresh K_1 sees η there.
    const auto p = problem1();
    const auto a = integrate_fcrk(p, builtin_fcrk(MethodId::FCRK3R), config(1.0 / 64, 1.0));
    const auto b = integrate_fcrk(p, builtin_fcrk(MethodId::FCRK3R), config(1.0 / 64, 1.0, false));
    const double gap = std::abs(a.trace.current_value()[0] - b.trace.current_value()[0]);
    CHECK(gap > 0.0);
    CHECK(gap < max_err(a.trace, p.exact, 16));
  }
}

TEST_CASE("configuration errors") {
  const FcrkTableau t = builtin_fcrk(MethodId::FCRK3R);
  CHECK_THROWS_AS(integrate_fcrk(problem1(), t, config(0.3, 1.0)), ConfigError);
  CHECK_THROWS_AS(integrate_fcrk(problem1(), t, config(0.0, 1.0)), ConfigError);
  CHECK_THROWS_AS(integrate_fcrk(problem1(), t, config(0.1, -1.0)), ConfigError);
  IntegrationConfig bp = config(0.125, 1.0);
  bp.breakpoints = {0.3};
  CHECK_THROWS_AS(integrate_fcrk(problem1(), t, bp), ConfigError);
  bp.breakpoints = {1.0};
  CHECK_THROWS_AS(integrate_fcrk(problem1(), t, bp), ConfigError);
  CHECK_THROWS_AS(integrate(problem1(), builtin(MethodId::FCRKN3R), config(0.125, 1.0)), ConfigError);
  CHECK_THROWS_AS(integrate(problem3(), builtin(MethodId::FCRK3R), config(0.125, 1.0)), ConfigError);
  FcrkTableau bad = t;
  bad.c[3] = Rational(1, 2);
  CHECK_THROWS_AS(integrate_fcrk(problem1(), bad, config(0.125, 1.0)), ConfigError);
  // 0.1 does not divide exactly in binary but passes the 1e-8 tolerance
  CHECK_NOTHROW(integrate_fcrk(problem1(), t, config(0.1, 1.0)));
}

TEST_CASE("step failures carry context") {
  const FcrkTableau t = builtin_fcrk(MethodId::FCRK3R);
  SUBCASE("rhs exception") {
    auto p = ode("boom",
                 [](double s, const SolutionView&) -> State {
                   if (s > 0.5) throw std::runtime_error("boom");
                   return {1.0};
                 },
                 [](double s) { return State{s}; });
    try {
      integrate_fcrk(p, t, config(0.125, 1.0));
      FAIL("expected an IntegrationError");
    } catch (const IntegrationError& e) {
      CHECK(e.cause() == IntegrationError::Cause::rhs);
      CHECK(e.step() == 4);
      CHECK(e.sigma() == 0.5);
      CHECK(std::string(e.what()).find("boom") != std::string::npos);
    }
  }
  SUBCASE("advanced argument") {
    auto p = ode("ahead", [](double s, const SolutionView& u) { return u(s + 0.01); },
                 [](double s) { return State{std::exp(s)}; });
    try {
      integrate_fcrk(p, t, config(0.125, 1.0));
      FAIL("expected an IntegrationError");
    } catch (const IntegrationError& e) {
      CHECK(e.cause() == IntegrationError::Cause::domain);
      CHECK(e.step() == 0);
    }
  }
  SUBCASE("blowup") {
    auto p = ode("inf", [](double, const SolutionView&) { return State{std::numeric_limits<double>::infinity()}; },
                 [](double s) { return State{s}; });
    try {
      integrate_fcrk(p, t, config(0.125, 1.0));
      FAIL("expected an IntegrationError");
    } catch (const IntegrationError& e) {
      CHECK(e.cause() == IntegrationError::Cause::blowup);
    }
  }
}

TEST_CASE("concurrent integrations match sequential ones") {
  const FcrknTableau t = builtin_fcrkn(MethodId::FCRKN4R);
  const auto seq = integrate_fcrkn(problem4(), t, config(1.0 / 128, 0.5)).trace.current_value();
  std::vector<std::future<State>> jobs;
  for (int k = 0; k < 4; ++k)
    jobs.push_back(std::async(std::launch::async, [&] {
      return integrate_fcrkn(problem4(), t, config(1.0 / 128, 0.5)).trace.current_value();
    }));
  for (auto& j : jobs) CHECK(j.get() == seq);
}
