#include "fcrk/history.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "fcrk/errors.hpp"

namespace fcrk {

namespace {

std::string interval_message(const char* what, double t, double lo, double hi) {
  std::ostringstream os;
  os.precision(17);
  os << what << ": t = " << t << " is outside [" << lo << ", " << hi << "]";
  return os.str();
}

}  // namespace

DensePoly::DensePoly(const RationalPoly& p) {
  coeffs_.reserve(p.coeffs().size());
  for (const auto& c : p.coeffs()) coeffs_.push_back(to_double(c));
  at_zero_ = to_double(p.coeff(0));
  at_one_ = to_double(p(Rational(1)));
}

double DensePoly::operator()(double alpha) const noexcept {
  if (alpha == 0.0) return at_zero_;
  if (alpha == 1.0) return at_one_;
  double acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * alpha + *it;
  return acc;
}

std::vector<DensePoly> to_dense(std::span<const RationalPoly> row) {
  return {row.begin(), row.end()};
}

void dense_combine(SchemeKind kind, const State& y0, const State* ydot0, double h, double alpha,
                   std::span<const DensePoly> w, std::span<const State> K, State& out) {
  const std::size_t dim = y0.size();
  const std::size_t n = std::min(w.size(), K.size());
  out.assign(dim, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    const double wj = w[j](alpha);
    if (wj == 0.0) continue;
    for (std::size_t d = 0; d < dim; ++d) out[d] += wj * K[j][d];
  }
  if (kind == SchemeKind::fcrk) {
    for (std::size_t d = 0; d < dim; ++d) out[d] = y0[d] + h * out[d];
  } else {
    const double ah = alpha * h;
    const double h2 = h * h;
    for (std::size_t d = 0; d < dim; ++d) out[d] = y0[d] + ah * (*ydot0)[d] + h2 * out[d];
  }
}

double Segment::alpha_of(double t) const noexcept {
  if (t >= end) return 1.0;
  return (t - sigma) / h;
}

State Segment::value(double alpha) const {
  State out;
  dense_combine(kind(), y0, kind() == SchemeKind::fcrkn ? &ydot0 : nullptr, h, alpha, weights->b, K, out);
  return out;
}

State Segment::derivative(double alpha) const {
  if (kind() != SchemeKind::fcrkn) throw UnsupportedError("derivative output requires an FCRKN segment");
  const std::size_t dim = ydot0.size();
  State acc(dim, 0.0);
  const auto& bp = weights->bp;
  for (std::size_t j = 0; j < bp.size() && j < K.size(); ++j) {
    const double wj = bp[j](alpha);
    if (wj == 0.0) continue;
    for (std::size_t d = 0; d < dim; ++d) acc[d] += wj * K[j][d];
  }
  for (std::size_t d = 0; d < dim; ++d) acc[d] = ydot0[d] + h * acc[d];
  return acc;
}

SolutionTrace::SolutionTrace(HistorySpec spec, SchemeKind kind) : spec_(std::move(spec)), kind_(kind) {
  if (!spec_.phi) throw std::invalid_argument("history function is required");
  if (kind_ == SchemeKind::fcrkn && !spec_.phi_dot0)
    throw std::invalid_argument("second-order problems need the initial derivative");
}

double SolutionTrace::t_last() const noexcept { return segments_.empty() ? spec_.t0 : segments_.back().end; }

State SolutionTrace::current_value() const {
  if (segments_.empty()) return spec_.phi(spec_.t0);
  return segments_.back().value(1.0);
}

State SolutionTrace::current_derivative() const {
  if (kind_ != SchemeKind::fcrkn) throw UnsupportedError("derivative output requires an FCRKN trace");
  if (segments_.empty()) return *spec_.phi_dot0;
  return segments_.back().derivative(1.0);
}

void SolutionTrace::append(Segment seg) {
  if (seg.sigma != t_last()) throw std::logic_error("segment does not start at the end of the trace");
  if (!(seg.end > seg.sigma)) throw std::logic_error("segment has nonpositive length");
#ifndef NDEBUG
  if (seg.y0 != current_value()) throw std::logic_error("segment initial value breaks continuity");
  if (kind_ == SchemeKind::fcrkn && seg.ydot0 != current_derivative())
    throw std::logic_error("segment initial derivative breaks continuity");
#endif
  segments_.push_back(std::move(seg));
}

const Segment& SolutionTrace::containing(double t) const {
  // Last segment with sigma <= t, so mesh points land on the right segment.
  auto it = std::upper_bound(segments_.begin(), segments_.end(), t,
                             [](double x, const Segment& s) { return x < s.sigma; });
  return *std::prev(it);
}

State SolutionTrace::eval(double t) const {
  const double lo = spec_.lower();
  const double hi = t_last();
  if (t < lo || t > hi || t != t) throw DomainError(interval_message("solution queried outside its domain", t, lo, hi), t, lo, hi);
  if (t <= spec_.t0 || segments_.empty()) return spec_.phi(t);
  const Segment& seg = containing(t);
  return seg.value(seg.alpha_of(t));
}

State SolutionTrace::eval_derivative(double t) const {
  if (kind_ != SchemeKind::fcrkn) throw UnsupportedError("derivative output requires an FCRKN trace");
  const double lo = spec_.t0;
  const double hi = t_last();
  if (t < lo || t > hi || t != t)
    throw DomainError(interval_message("derivative queried outside its domain", t, lo, hi), t, lo, hi);
  if (t == spec_.t0 || segments_.empty()) return *spec_.phi_dot0;
  const Segment& seg = containing(t);
  return seg.derivative(seg.alpha_of(t));
}

State trace_eval(const SolutionTrace& trace, double t) { return trace.eval(t); }
State trace_eval_derivative(const SolutionTrace& trace, double t) { return trace.eval_derivative(t); }

StageAccessor::StageAccessor(const SolutionTrace& trace, double sigma, double h, double cap, double cap_alpha,
                             const State& y0, const State* ydot0, std::span<const DensePoly> row,
                             std::span<const State> K)
    : trace_(trace), sigma_(sigma), h_(h), cap_(cap), cap_alpha_(cap_alpha), y0_(y0), ydot0_(ydot0), row_(row), K_(K) {}

State StageAccessor::operator()(double t) const {
  if (t > cap_ || t != t)
    throw OverlapDomainError(interval_message("stage function queried beyond its reach", t, trace_.history().lower(), cap_),
                             t, trace_.history().lower(), cap_);
  if (t <= sigma_) return trace_.eval(t);
  ++in_step_;
  if (t < cap_) ++overlap_;
  const double alpha = t >= cap_ ? cap_alpha_ : (t - sigma_) / h_;
  State out;
  dense_combine(trace_.kind(), y0_, ydot0_, h_, alpha, row_, K_, out);
  return out;
}

State accessor_eval(const StageAccessor& acc, double t) { return acc(t); }

}  // namespace fcrk
