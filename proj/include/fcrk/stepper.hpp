#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "fcrk/history.hpp"
#include "fcrk/problems.hpp"
#include "fcrk/tableau.hpp"

namespace fcrk {

struct IntegrationConfig {
  double h = 0.0;
  double t_end = 0.0;
  /// Mesh-aligned times in (t0, t_end) where the first stage is recomputed.
  std::vector<double> breakpoints;
  bool reuse_enabled = true;
};

struct StepStats {
  std::size_t steps = 0;
  /// Right-hand side evaluations.
  std::size_t nf = 0;
  /// Steps whose first stage was evaluated rather than adopted.
  std::size_t restarts = 0;
  /// Per step: queries answered by an in-step stage polynomial.
  std::vector<std::uint32_t> in_step_queries;
  /// Per step: queries strictly inside (σ, σ + c_i h).
  std::vector<std::uint32_t> overlap_queries;
};

/// Floating-point form of an FCRK tableau, built once per run.
struct FcrkMethod {
  explicit FcrkMethod(const FcrkTableau& t);

  std::vector<double> c;
  std::vector<std::vector<DensePoly>> rows;  // rows[i] has i entries
  std::shared_ptr<const DenseWeights> weights;
  bool reuse = false;
  std::size_t stages() const noexcept { return c.size(); }
};

/// Floating-point form of an FCRKN tableau; rows[s-1] is the b row.
struct FcrknMethod {
  explicit FcrknMethod(const FcrknTableau& t);

  std::vector<double> c;
  std::vector<std::vector<DensePoly>> rows;
  std::shared_ptr<const DenseWeights> weights;
  std::size_t stages() const noexcept { return c.size(); }
};

struct StepResult {
  Segment segment;
  /// K_s, handed unchanged to the next step when reusing.
  State last_stage;
  std::size_t evaluations = 0;
  std::uint32_t in_step_queries = 0;
  std::uint32_t overlap_queries = 0;
};

/// One FCRK step from the trace's current end `sigma` to `end` (= sigma + h
/// up to rounding). `k1`, when given, is adopted as the first stage.
StepResult fcrk_step(const FcrkMethod& m, const SolutionTrace& trace, const Rhs& rhs,
                     double sigma, double end, double h, const std::optional<State>& k1);
StepResult fcrkn_step(const FcrknMethod& m, const SolutionTrace& trace, const Rhs& rhs,
                      double sigma, double end, double h, const std::optional<State>& k1);

struct IntegrationResult {
  SolutionTrace trace;
  StepStats stats;
};

/// Constant-step integration from t0 to cfg.t_end. Throws ConfigError for a
/// mesh that does not divide the span and IntegrationError for step failures.
IntegrationResult integrate_fcrk(const RfdeProblem& problem, const FcrkTableau& t,
                                 const IntegrationConfig& cfg);
IntegrationResult integrate_fcrkn(const Rfde2Problem& problem, const FcrknTableau& t,
                                  const IntegrationConfig& cfg);
/// Dispatches on the tableau; a first-order tableau with a second-order
/// problem (or vice versa) is a ConfigError.
IntegrationResult integrate(const Problem& problem, const Tableau& t, const IntegrationConfig& cfg);

}  // namespace fcrk
