#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "fcrk/history.hpp"

namespace fcrk {

/// Right-hand side f(t, u_t); `u` gives access to every admissible past value.
using Rhs = std::function<State(double t, const SolutionView& u)>;

/// u̇(t) = f(t, u_t)
struct RfdeProblem {
  std::string id;
  HistorySpec history;
  Rhs rhs;
  std::function<State(double)> exact;  // may be empty
  double t_final = 1.0;

  double t0() const noexcept { return history.t0; }
};

/// ü(t) = f(t, u_t); history.phi_dot0 holds u̇(t0).
struct Rfde2Problem {
  std::string id;
  HistorySpec history;
  Rhs rhs;
  std::function<State(double)> exact;
  std::function<State(double)> exact_derivative;
  double t_final = 1.0;

  double t0() const noexcept { return history.t0; }
};

using Problem = std::variant<RfdeProblem, Rfde2Problem>;

/// t / (1 + 2t)², the deviating argument of Problems 1 and 3.
double shrinking_argument(double t);
/// g(t) = t − sin(100πt)²/100, the vanishing-delay argument of Problems 2 and 4.
double vanishing_delay_argument(double t);

/// u̇ = u(t/(1+2t)²)^{(1+2t)²}, u(0) = 1, solution e^t on [0, 1].
RfdeProblem problem1();
/// u̇ = −u(g(t)) u(t) e^{g(t)}, φ = e^{−t}, solution e^{−t} on [0, 0.5].
RfdeProblem problem2();
/// ü = u(t/(1+2t)²)^{(1+2t)²}, u(0) = 1, u̇(0) = −1, solution e^{−t} on [0, 3].
Rfde2Problem problem3();
/// ü = u(g(t)) u(t) e^{g(t)}, φ = e^{−t}, solution e^{−t} on [0, 0.5].
Rfde2Problem problem4();

enum class OrderKind { first, second };

/// RHS is the first (or second) derivative of t^degree, exact solution t^degree
/// on [0, 1] with exact initial data at t0 = 0.
RfdeProblem quadrature_problem1(int degree);
Rfde2Problem quadrature_problem2(int degree);
Problem quadrature_problem(int degree, OrderKind kind);

/// "p1".."p4", or "quad1-<degree>" / "quad2-<degree>" for quadrature problems
std::optional<Problem> problem_by_id(std::string_view id);

inline const std::string& problem_id(const Problem& p) {
  return std::visit([](const auto& q) -> const std::string& { return q.id; }, p);
}

}  // namespace fcrk
