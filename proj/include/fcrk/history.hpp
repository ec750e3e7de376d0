#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "fcrk/poly.hpp"

namespace fcrk {

using State = std::vector<double>;

/// Read access to the solution u(t) as seen by a right-hand side.
class SolutionView {
 public:
  virtual ~SolutionView() = default;
  virtual State operator()(double t) const = 0;
};

/// Initial function φ on [t0 - r, t0]; r may be infinite.
struct HistorySpec {
  double t0 = 0.0;
  double r = std::numeric_limits<double>::infinity();
  std::function<State(double)> phi;
  /// u̇(t0); required by FCRKN.
  std::optional<State> phi_dot0;

  double lower() const noexcept { return t0 - r; }
};

enum class SchemeKind { fcrk, fcrkn };

/// Double-precision copy of a tableau polynomial. α = 0 and α = 1 return the
/// correctly rounded exact values so that endpoint identities between rows
/// (b_i(1) = a_si(1)) survive the conversion bitwise.
class DensePoly {
 public:
  DensePoly() = default;
  explicit DensePoly(const RationalPoly& p);

  double operator()(double alpha) const noexcept;
  bool is_zero() const noexcept { return coeffs_.empty(); }

 private:
  std::vector<double> coeffs_;
  double at_zero_ = 0.0;
  double at_one_ = 0.0;
};

std::vector<DensePoly> to_dense(std::span<const RationalPoly> row);

/// Weight rows shared by every segment of one run.
struct DenseWeights {
  SchemeKind kind = SchemeKind::fcrk;
  std::vector<DensePoly> b;
  std::vector<DensePoly> bp;  // FCRKN only
};

/// y0 + h Σ w_j(α) K_j (FCRK) or y0 + αh·ẏ0 + h² Σ w_j(α) K_j (FCRKN), summing
/// over j < min(w.size(), K.size()). Both committed segments and in-step stage
/// functions go through this one routine.
void dense_combine(SchemeKind kind, const State& y0, const State* ydot0, double h, double alpha,
                   std::span<const DensePoly> w, std::span<const State> K, State& out);

/// One committed step [sigma, end] of the numerical solution.
struct Segment {
  double sigma = 0.0;
  double end = 0.0;
  double h = 0.0;
  State y0;
  State ydot0;  // FCRKN only
  std::vector<State> K;
  std::shared_ptr<const DenseWeights> weights;

  SchemeKind kind() const noexcept { return weights->kind; }
  /// Local coordinate of t; exactly 1 at or beyond `end`.
  double alpha_of(double t) const noexcept;
  State value(double alpha) const;
  /// η′(αh); FCRKN only.
  State derivative(double alpha) const;
};

/// History plus time-ordered, abutting segments.
class SolutionTrace {
 public:
  SolutionTrace(HistorySpec spec, SchemeKind kind);

  const HistorySpec& history() const noexcept { return spec_; }
  SchemeKind kind() const noexcept { return kind_; }
  double t0() const noexcept { return spec_.t0; }
  /// End of the last committed segment (t0 when empty).
  double t_last() const noexcept;
  const std::vector<Segment>& segments() const noexcept { return segments_; }

  /// u(t0) for an empty trace, otherwise η of the last segment at α = 1.
  State current_value() const;
  /// u̇ at t_last (FCRKN).
  State current_derivative() const;

  /// Throws std::logic_error if the segment does not start at t_last.
  void append(Segment seg);

  State eval(double t) const;
  State eval_derivative(double t) const;

 private:
  const Segment& containing(double t) const;

  HistorySpec spec_;
  SchemeKind kind_;
  std::vector<Segment> segments_;
};

State trace_eval(const SolutionTrace& trace, double t);
State trace_eval_derivative(const SolutionTrace& trace, double t);

/// Stage function Y^i during the step [sigma, sigma + h]: the trace for
/// t <= sigma, the stage polynomial on (sigma, cap].
class StageAccessor final : public SolutionView {
 public:
  StageAccessor(const SolutionTrace& trace, double sigma, double h, double cap, double cap_alpha,
                const State& y0, const State* ydot0, std::span<const DensePoly> row,
                std::span<const State> K);

  State operator()(double t) const override;

  double cap() const noexcept { return cap_; }
  /// Queries served by the stage polynomial (sigma < t <= cap).
  std::uint32_t in_step_queries() const noexcept { return in_step_; }
  /// Queries strictly inside (sigma, cap): the overlapping case proper.
  std::uint32_t overlap_queries() const noexcept { return overlap_; }

 private:
  const SolutionTrace& trace_;
  double sigma_, h_, cap_, cap_alpha_;
  const State& y0_;
  const State* ydot0_;
  std::span<const DensePoly> row_;
  std::span<const State> K_;
  mutable std::uint32_t in_step_ = 0;
  mutable std::uint32_t overlap_ = 0;
};

State accessor_eval(const StageAccessor& acc, double t);

}  // namespace fcrk
