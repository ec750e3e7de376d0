#include "fcrk/stepper.hpp"

#include <cmath>
#include <set>
#include <sstream>

#include "fcrk/errors.hpp"

namespace fcrk {

IntegrationError::IntegrationError(Cause cause, std::size_t step, double sigma, const std::string& detail)
    : std::runtime_error([&] {
        std::ostringstream os;
        os.precision(17);
        os << "step " << step << " (t = " << sigma << "): " << detail;
        return os.str();
      }()),
      cause_(cause),
      step_(step),
      sigma_(sigma) {}

namespace {

void require_finite(const State& k, std::size_t stage, double tau, std::size_t dim) {
  if (k.size() != dim) {
    std::ostringstream os;
    os << "right-hand side returned " << k.size() << " components, expected " << dim;
    throw std::runtime_error(os.str());
  }
  for (double x : k) {
    if (!std::isfinite(x)) {
      std::ostringstream os;
      os.precision(17);
      os << "stage " << stage << " at t = " << tau << " is not finite";
      throw NumericalBlowup(os.str());
    }
  }
}

double stage_time(double c, double sigma, double end, double h) {
  if (c == 0.0) return sigma;
  if (c == 1.0) return end;
  return sigma + c * h;
}

struct Mesh {
  std::vector<double> t;        // steps + 1 points, last one is t_end
  std::set<std::size_t> restarts;  // mesh indices of breakpoints
};

Mesh build_mesh(double t0, const IntegrationConfig& cfg) {
  if (!(cfg.h > 0.0) || !std::isfinite(cfg.h)) throw ConfigError("step size must be positive and finite");
  const double span = cfg.t_end - t0;
  if (!(span > 0.0)) throw ConfigError("end time must lie after the initial time");
  const double ratio = span / cfg.h;
  const double steps = std::round(ratio);
  if (std::abs(ratio - steps) > 1e-8 || steps < 1.0) {
    std::ostringstream os;
    os.precision(17);
    os << "step size " << cfg.h << " does not divide [" << t0 << ", " << cfg.t_end << "]";
    throw ConfigError(os.str());
  }
  Mesh mesh;
  const auto n = static_cast<std::size_t>(steps);
  mesh.t.resize(n + 1);
  for (std::size_t k = 0; k < n; ++k) mesh.t[k] = t0 + static_cast<double>(k) * cfg.h;
  mesh.t[n] = cfg.t_end;
  for (double bp : cfg.breakpoints) {
    const double k = std::round((bp - t0) / cfg.h);
    if (!(bp > t0 && bp < cfg.t_end) || std::abs(t0 + k * cfg.h - bp) > 1e-12 * cfg.h) {
      std::ostringstream os;
      os.precision(17);
      os << "breakpoint " << bp << " is not an interior mesh point";
      throw ConfigError(os.str());
    }
    mesh.restarts.insert(static_cast<std::size_t>(k));
  }
  return mesh;
}

template <class Validate>
void require_valid(const Validate& t) {
  const auto v = validate_structure(t);
  if (!v.empty()) throw ConfigError("invalid tableau: " + v.front().to_string());
}

template <class Step>
void march(SolutionTrace& trace, StepStats& stats, const Mesh& mesh, bool reuse, double h, Step&& step) {
  const std::size_t n = mesh.t.size() - 1;
  stats.in_step_queries.reserve(n);
  stats.overlap_queries.reserve(n);
  std::optional<State> carry;
  for (std::size_t k = 0; k < n; ++k) {
    std::optional<State> k1;
    if (reuse && carry && !mesh.restarts.contains(k)) k1 = std::move(carry);
    if (!k1) ++stats.restarts;
    const double sigma = mesh.t[k];
    StepResult r;
    try {
      r = step(sigma, mesh.t[k + 1], h, k1);
    } catch (const DomainError& e) {
      throw IntegrationError(IntegrationError::Cause::domain, k, sigma, e.what());
    } catch (const NumericalBlowup& e) {
      throw IntegrationError(IntegrationError::Cause::blowup, k, sigma, e.what());
    } catch (const std::exception& e) {
      throw IntegrationError(IntegrationError::Cause::rhs, k, sigma, e.what());
    }
    stats.nf += r.evaluations;
    stats.in_step_queries.push_back(r.in_step_queries);
    stats.overlap_queries.push_back(r.overlap_queries);
    trace.append(std::move(r.segment));
    carry = std::move(r.last_stage);
    ++stats.steps;
  }
}

}  // namespace

FcrkMethod::FcrkMethod(const FcrkTableau& t) : c(t.c.size()), rows(t.c.size()), reuse(t.reuse) {
  for (std::size_t i = 0; i < c.size(); ++i) {
    c[i] = to_double(t.c[i]);
    rows[i] = to_dense(std::span<const RationalPoly>(t.A[i].data(), i));
  }
  auto w = std::make_shared<DenseWeights>();
  w->kind = SchemeKind::fcrk;
  w->b = to_dense(t.b);
  weights = std::move(w);
}

FcrknMethod::FcrknMethod(const FcrknTableau& t) : c(t.c.size()), rows(t.c.size()) {
  for (std::size_t i = 0; i < c.size(); ++i) {
    c[i] = to_double(t.c[i]);
    rows[i] = to_dense(t.row(i));
  }
  auto w = std::make_shared<DenseWeights>();
  w->kind = SchemeKind::fcrkn;
  w->b = to_dense(t.b);
  w->bp = to_dense(t.bp);
  weights = std::move(w);
}

StepResult fcrk_step(const FcrkMethod& m, const SolutionTrace& trace, const Rhs& rhs, double sigma, double end,
                     double h, const std::optional<State>& k1) {
  const std::size_t s = m.stages();
  StepResult out;
  Segment& seg = out.segment;
  seg.sigma = sigma;
  seg.end = end;
  seg.h = h;
  seg.y0 = trace.current_value();
  seg.weights = m.weights;
  seg.K.reserve(s);
  for (std::size_t i = 0; i < s; ++i) {
    if (i == 0 && k1) {
      seg.K.push_back(*k1);
      continue;
    }
    const double tau = stage_time(m.c[i], sigma, end, h);
    StageAccessor acc(trace, sigma, h, tau, m.c[i], seg.y0, nullptr, m.rows[i],
                      std::span<const State>(seg.K.data(), i));
    State k = rhs(tau, acc);
    ++out.evaluations;
    out.in_step_queries += acc.in_step_queries();
    out.overlap_queries += acc.overlap_queries();
    require_finite(k, i + 1, tau, seg.y0.size());
    seg.K.push_back(std::move(k));
  }
  out.last_stage = seg.K.back();
  return out;
}

StepResult fcrkn_step(const FcrknMethod& m, const SolutionTrace& trace, const Rhs& rhs, double sigma, double end,
                      double h, const std::optional<State>& k1) {
  const std::size_t s = m.stages();
  StepResult out;
  Segment& seg = out.segment;
  seg.sigma = sigma;
  seg.end = end;
  seg.h = h;
  seg.y0 = trace.current_value();
  seg.ydot0 = trace.current_derivative();
  seg.weights = m.weights;
  seg.K.reserve(s);
  for (std::size_t i = 0; i < s; ++i) {
    if (i == 0 && k1) {
      seg.K.push_back(*k1);
      continue;
    }
    const double tau = stage_time(m.c[i], sigma, end, h);
    StageAccessor acc(trace, sigma, h, tau, m.c[i], seg.y0, &seg.ydot0, m.rows[i],
                      std::span<const State>(seg.K.data(), i));
    State k = rhs(tau, acc);
    ++out.evaluations;
    out.in_step_queries += acc.in_step_queries();
    out.overlap_queries += acc.overlap_queries();
    require_finite(k, i + 1, tau, seg.y0.size());
    seg.K.push_back(std::move(k));
  }
  out.last_stage = seg.K.back();
  return out;
}

IntegrationResult integrate_fcrk(const RfdeProblem& problem, const FcrkTableau& t, const IntegrationConfig& cfg) {
  require_valid(t);
  if (!problem.rhs) throw ConfigError("problem has no right-hand side");
  const Mesh mesh = build_mesh(problem.t0(), cfg);
  IntegrationResult res{SolutionTrace(problem.history, SchemeKind::fcrk), {}};
  const FcrkMethod m(t);
  march(res.trace, res.stats, mesh, cfg.reuse_enabled && m.reuse, cfg.h,
        [&](double sigma, double end, double h, const std::optional<State>& k1) {
          return fcrk_step(m, res.trace, problem.rhs, sigma, end, h, k1);
        });
  return res;
}

IntegrationResult integrate_fcrkn(const Rfde2Problem& problem, const FcrknTableau& t, const IntegrationConfig& cfg) {
  require_valid(t);
  if (!problem.rhs) throw ConfigError("problem has no right-hand side");
  if (!problem.history.phi_dot0) throw ConfigError("second-order problem needs the initial derivative");
  const Mesh mesh = build_mesh(problem.t0(), cfg);
  IntegrationResult res{SolutionTrace(problem.history, SchemeKind::fcrkn), {}};
  const FcrknMethod m(t);
  march(res.trace, res.stats, mesh, cfg.reuse_enabled, cfg.h,
        [&](double sigma, double end, double h, const std::optional<State>& k1) {
          return fcrkn_step(m, res.trace, problem.rhs, sigma, end, h, k1);
        });
  return res;
}

IntegrationResult integrate(const Problem& problem, const Tableau& t, const IntegrationConfig& cfg) {
  if (const auto* p1 = std::get_if<RfdeProblem>(&problem)) {
    if (const auto* ft = std::get_if<FcrkTableau>(&t)) return integrate_fcrk(*p1, *ft, cfg);
    throw ConfigError("FCRKN methods need a second-order problem");
  }
  const auto& p2 = std::get<Rfde2Problem>(problem);
  if (const auto* nt = std::get_if<FcrknTableau>(&t)) return integrate_fcrkn(p2, *nt, cfg);
  throw ConfigError("FCRK methods need a first-order problem");
}

}  // namespace fcrk
