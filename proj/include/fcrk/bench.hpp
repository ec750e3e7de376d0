#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fcrk/problems.hpp"
#include "fcrk/stepper.hpp"
#include "fcrk/tableau.hpp"

namespace fcrk {

inline constexpr int kDefaultSamplesPerStep = 16;

struct ConvergenceRow {
  std::string method;
  std::string problem;
  double h = 0.0;
  std::size_t steps = 0;
  std::size_t nf = 0;
  double err = 0.0;
  std::optional<double> errp;
  /// Set when the run failed; such rows are skipped by estimate_order.
  std::optional<std::string> failure;

  friend bool operator==(const ConvergenceRow&, const ConvergenceRow&) = default;
};

struct SampleError {
  double err = 0.0;
  std::optional<double> errp;
};

/// Max-norm error of η (and η′) against the exact solution at
/// samples_per_step + 1 equispaced points of every step.
SampleError sample_error(const SolutionTrace& trace, const std::function<State(double)>& exact,
                         const std::function<State(double)>& exact_derivative,
                         int samples_per_step);

/// Largest mesh-point mismatch |η_n(1) − y0_{n+1}| (and for η′); zero when the
/// dense output is continuous bitwise.
struct ContinuityReport {
  double max_jump = 0.0;
  double max_jump_derivative = 0.0;
};
ContinuityReport mesh_continuity(const SolutionTrace& trace);

struct RunOptions {
  int samples_per_step = kDefaultSamplesPerStep;
  bool reuse = true;
  std::vector<double> breakpoints;
  /// Overrides the problem's default end time.
  std::optional<double> t_end;
  /// Compute rows on worker threads; ordering of the output is unaffected.
  bool parallel = true;
};

/// Runs the tableau on the problem once and measures it.
ConvergenceRow run_once(const Problem& problem, const Tableau& t, const std::string& method_label,
                        double h, const RunOptions& opts);

/// One row per entry of h_list, in that order.
std::vector<ConvergenceRow> run_convergence(const Problem& problem, const Tableau& t,
                                            const std::string& method_label,
                                            std::span<const double> h_list,
                                            const RunOptions& opts = {});

struct SlopeEstimate {
  double slope = 0.0;
  double intercept = 0.0;
  int points_used = 0;
};

/// Least-squares fit of log err against log h over the smaller half
/// (rounded up, at least two) of the usable rows. Throws std::invalid_argument
/// when fewer than two rows have a finite positive error.
SlopeEstimate estimate_order(std::span<const ConvergenceRow> rows, bool derivative = false);
SlopeEstimate estimate_order(std::span<const double> h, std::span<const double> err);

std::string emit_csv(std::span<const ConvergenceRow> rows);
/// Inverse of emit_csv; throws ParseError.
std::vector<ConvergenceRow> parse_csv(std::string_view text);

/// Writes dense samples t, u_0.. [, du_0..] for every step.
std::string emit_samples_csv(const SolutionTrace& trace, int samples_per_step);

/// Plain-text tableau format:
///   fcrk|fcrkn <s> [reuse]
///   <c_1> ... <c_s>
///   one line per stored A row, entries as [c0,c1,...] coefficient lists
///   b: <entries>
///   bp: <entries>          (fcrkn only)
/// '#' starts a comment.
std::string serialize_tableau(const Tableau& t);
Tableau parse_tableau(std::string_view text, const std::string& name = "custom");
Tableau load_tableau_file(const std::string& path);

}  // namespace fcrk
