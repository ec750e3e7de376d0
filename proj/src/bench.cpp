#include "fcrk/bench.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <limits>
#include <sstream>

#include "fcrk/errors.hpp"

namespace fcrk {

namespace {

double max_diff(const State& a, const State& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

const std::function<State(double)>& exact_of(const Problem& p) {
  return std::visit([](const auto& q) -> const std::function<State(double)>& { return q.exact; }, p);
}

}  // namespace

SampleError sample_error(const SolutionTrace& trace, const std::function<State(double)>& exact,
                         const std::function<State(double)>& exact_derivative, int samples_per_step) {
  if (samples_per_step < 1) throw std::invalid_argument("samples_per_step must be at least 1");
  SampleError out;
  const bool with_derivative = trace.kind() == SchemeKind::fcrkn && exact_derivative;
  if (with_derivative) out.errp = 0.0;
  const double n = samples_per_step;
  for (const Segment& seg : trace.segments()) {
    for (int j = 0; j <= samples_per_step; ++j) {
      const double alpha = j / n;
      const double t = j == samples_per_step ? seg.end : seg.sigma + alpha * seg.h;
      out.err = std::max(out.err, max_diff(seg.value(alpha), exact(t)));
      if (with_derivative) *out.errp = std::max(*out.errp, max_diff(seg.derivative(alpha), exact_derivative(t)));
    }
  }
  return out;
}

ContinuityReport mesh_continuity(const SolutionTrace& trace) {
  ContinuityReport r;
  const auto& segs = trace.segments();
  if (segs.empty()) return r;
  const HistorySpec& h = trace.history();
  r.max_jump = max_diff(h.phi(h.t0), segs.front().y0);
  if (trace.kind() == SchemeKind::fcrkn) r.max_jump_derivative = max_diff(*h.phi_dot0, segs.front().ydot0);
  for (std::size_t n = 0; n + 1 < segs.size(); ++n) {
    r.max_jump = std::max(r.max_jump, max_diff(segs[n].value(1.0), segs[n + 1].y0));
    if (trace.kind() == SchemeKind::fcrkn)
      r.max_jump_derivative = std::max(r.max_jump_derivative, max_diff(segs[n].derivative(1.0), segs[n + 1].ydot0));
  }
  return r;
}

ConvergenceRow run_once(const Problem& problem, const Tableau& t, const std::string& method_label, double h,
                        const RunOptions& opts) {
  ConvergenceRow row;
  row.method = method_label;
  row.problem = problem_id(problem);
  row.h = h;
  IntegrationConfig cfg;
  cfg.h = h;
  cfg.t_end = opts.t_end ? *opts.t_end : std::visit([](const auto& q) { return q.t_final; }, problem);
  cfg.breakpoints = opts.breakpoints;
  cfg.reuse_enabled = opts.reuse;
  try {
    const IntegrationResult res = integrate(problem, t, cfg);
    row.steps = res.stats.steps;
    row.nf = res.stats.nf;
    std::function<State(double)> dexact;
    if (const auto* p2 = std::get_if<Rfde2Problem>(&problem)) dexact = p2->exact_derivative;
    const SampleError e = sample_error(res.trace, exact_of(problem), dexact, opts.samples_per_step);
    row.err = e.err;
    row.errp = e.errp;
  } catch (const IntegrationError& e) {
    row.err = std::numeric_limits<double>::quiet_NaN();
    row.failure = e.what();
  }
  return row;
}

std::vector<ConvergenceRow> run_convergence(const Problem& problem, const Tableau& t, const std::string& method_label,
                                            std::span<const double> h_list, const RunOptions& opts) {
  std::vector<ConvergenceRow> rows;
  rows.reserve(h_list.size());
  if (!opts.parallel) {
    for (double h : h_list) rows.push_back(run_once(problem, t, method_label, h, opts));
    return rows;
  }
  std::vector<std::future<ConvergenceRow>> jobs;
  jobs.reserve(h_list.size());
  for (double h : h_list)
    jobs.push_back(std::async(std::launch::async, [&, h] { return run_once(problem, t, method_label, h, opts); }));
  for (auto& j : jobs) rows.push_back(j.get());
  return rows;
}

SlopeEstimate estimate_order(std::span<const double> h, std::span<const double> err) {
  if (h.size() != err.size()) throw std::invalid_argument("h and err differ in length");
  std::vector<std::pair<double, double>> pts;
  for (std::size_t i = 0; i < h.size(); ++i)
    if (h[i] > 0.0 && std::isfinite(h[i]) && err[i] > 0.0 && std::isfinite(err[i]))
      pts.emplace_back(std::log(h[i]), std::log(err[i]));
  if (pts.size() < 2) throw std::invalid_argument("slope fit needs at least two rows with finite positive error");
  std::sort(pts.begin(), pts.end());
  const std::size_t m = std::max<std::size_t>(2, (pts.size() + 1) / 2);
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < m; ++i) {
    sx += pts[i].first;
    sy += pts[i].second;
  }
  const double mx = sx / m, my = sy / m;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < m; ++i) {
    sxx += (pts[i].first - mx) * (pts[i].first - mx);
    sxy += (pts[i].first - mx) * (pts[i].second - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("slope fit needs distinct step sizes");
  SlopeEstimate s;
  s.slope = sxy / sxx;
  s.intercept = my - s.slope * mx;
  s.points_used = static_cast<int>(m);
  return s;
}

SlopeEstimate estimate_order(std::span<const ConvergenceRow> rows, bool derivative) {
  std::vector<double> h, e;
  for (const auto& r : rows) {
    if (r.failure) continue;
    if (derivative && !r.errp) continue;
    h.push_back(r.h);
    e.push_back(derivative ? *r.errp : r.err);
  }
  return estimate_order(h, e);
}

// --- CSV ---

namespace {

constexpr std::string_view kCsvHeader = "method,problem,h,steps,nf,err,errp";

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto p = s.find(sep, start);
    out.push_back(s.substr(start, p == std::string_view::npos ? std::string_view::npos : p - start));
    if (p == std::string_view::npos) return out;
    start = p + 1;
  }
}

double parse_real(std::string_view s, std::size_t line) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw ParseError("bad real '" + std::string(s) + "'", line);
  return v;
}

std::size_t parse_count(std::string_view s, std::size_t line) {
  std::size_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
    throw ParseError("bad integer '" + std::string(s) + "'", line);
  return v;
}

std::vector<std::string_view> lines_of(std::string_view text) {
  auto lines = split(text, '\n');
  for (auto& l : lines)
    if (!l.empty() && l.back() == '\r') l.remove_suffix(1);
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  return lines;
}

}  // namespace

std::string emit_csv(std::span<const ConvergenceRow> rows) {
  std::string out(kCsvHeader);
  out += '\n';
  for (const auto& r : rows) {
    out += r.method + ',' + r.problem + ',' + fmt17(r.h) + ',' + std::to_string(r.steps) + ',' +
           std::to_string(r.nf) + ',' + fmt17(r.err) + ',';
    if (r.errp) out += fmt17(*r.errp);
    out += '\n';
  }
  return out;
}

std::vector<ConvergenceRow> parse_csv(std::string_view text) {
  const auto lines = lines_of(text);
  if (lines.empty() || lines[0] != kCsvHeader) throw ParseError("expected header '" + std::string(kCsvHeader) + "'", 1);
  std::vector<ConvergenceRow> rows;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const std::size_t ln = i + 1;
    const auto f = split(lines[i], ',');
    if (f.size() != 7) throw ParseError("expected 7 fields, got " + std::to_string(f.size()), ln);
    ConvergenceRow r;
    r.method = f[0];
    r.problem = f[1];
    r.h = parse_real(f[2], ln);
    r.steps = parse_count(f[3], ln);
    r.nf = parse_count(f[4], ln);
    r.err = parse_real(f[5], ln);
    if (!f[6].empty()) r.errp = parse_real(f[6], ln);
    rows.push_back(std::move(r));
  }
  return rows;
}

std::string emit_samples_csv(const SolutionTrace& trace, int samples_per_step) {
  if (samples_per_step < 1) throw std::invalid_argument("samples_per_step must be at least 1");
  const auto& segs = trace.segments();
  const bool second = trace.kind() == SchemeKind::fcrkn;
  const std::size_t dim = segs.empty() ? trace.history().phi(trace.t0()).size() : segs.front().y0.size();
  std::string out = "t";
  for (std::size_t i = 0; i < dim; ++i) out += ",u" + std::to_string(i);
  if (second)
    for (std::size_t i = 0; i < dim; ++i) out += ",du" + std::to_string(i);
  out += '\n';
  auto emit = [&](double t, const State& u, const State* du) {
    out += fmt17(t);
    for (double x : u) out += ',' + fmt17(x);
    if (du)
      for (double x : *du) out += ',' + fmt17(x);
    out += '\n';
  };
  for (std::size_t n = 0; n < segs.size(); ++n) {
    const Segment& seg = segs[n];
    const int last = n + 1 == segs.size() ? samples_per_step : samples_per_step - 1;
    for (int j = 0; j <= last; ++j) {
      const double alpha = static_cast<double>(j) / samples_per_step;
      const double t = j == samples_per_step ? seg.end : seg.sigma + alpha * seg.h;
      State du;
      if (second) du = seg.derivative(alpha);
      emit(t, seg.value(alpha), second ? &du : nullptr);
    }
  }
  return out;
}

// --- tableau files ---

namespace {

std::string poly_entry(const RationalPoly& p) {
  std::string s = "[";
  const auto& c = p.coeffs();
  for (std::size_t k = 0; k < c.size(); ++k) {
    if (k) s += ',';
    s += to_string(c[k]);
  }
  return s + "]";
}

std::string entries(std::span<const RationalPoly> row) {
  std::string s;
  for (std::size_t j = 0; j < row.size(); ++j) {
    if (j) s += ' ';
    s += poly_entry(row[j]);
  }
  return s;
}

std::string values(std::span<const Rational> c) {
  std::string s;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (i) s += ' ';
    s += to_string(c[i]);
  }
  return s;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> words(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    const std::size_t j = i;
    while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    if (i > j) out.push_back(s.substr(j, i - j));
  }
  return out;
}

Rational rational_at(std::string_view s, std::size_t line) {
  try {
    return parse_rational(s);
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what(), line);
  }
}

std::vector<RationalPoly> parse_entries(std::string_view s, std::size_t line) {
  std::vector<RationalPoly> out;
  s = trim(s);
  while (!s.empty()) {
    if (s.front() != '[') throw ParseError("expected '[' to open a polynomial entry", line);
    const auto close = s.find(']');
    if (close == std::string_view::npos) throw ParseError("unterminated polynomial entry", line);
    const auto body = trim(s.substr(1, close - 1));
    std::vector<Rational> coeffs;
    if (!body.empty())
      for (auto part : split(body, ',')) coeffs.push_back(rational_at(trim(part), line));
    out.emplace_back(std::move(coeffs));
    s = trim(s.substr(close + 1));
  }
  return out;
}

}  // namespace

std::string serialize_tableau(const Tableau& tab) {
  std::ostringstream os;
  std::visit(
      [&](const auto& t) {
        using T = std::decay_t<decltype(t)>;
        constexpr bool fcrk = std::is_same_v<T, FcrkTableau>;
        const std::size_t s = t.stages();
        os << (fcrk ? "fcrk " : "fcrkn ") << s;
        if constexpr (fcrk)
          if (t.reuse) os << " reuse";
        if (t.claimed_order > 0) os << " order=" << t.claimed_order;
        os << '\n' << values(t.c) << '\n';
        if constexpr (fcrk) {
          for (std::size_t i = 1; i < s; ++i)
            os << entries(std::span<const RationalPoly>(t.A[i].data(), i)) << '\n';
        } else {
          for (const auto& row : t.A) os << entries(row) << '\n';
        }
        os << "b: " << entries(t.b) << '\n';
        if constexpr (!fcrk) os << "bp: " << entries(t.bp) << '\n';
      },
      tab);
  return os.str();
}

Tableau parse_tableau(std::string_view text, const std::string& name) {
  std::vector<std::pair<std::size_t, std::string_view>> lines;
  std::size_t ln = 0;
  for (auto l : lines_of(text)) {
    ++ln;
    if (const auto hash = l.find('#'); hash != std::string_view::npos) l = l.substr(0, hash);
    l = trim(l);
    if (!l.empty()) lines.emplace_back(ln, l);
  }
  if (lines.empty()) throw ParseError("empty tableau file", 0);

  const auto head = words(lines[0].second);
  const std::size_t hl = lines[0].first;
  if (head.size() < 2 || (head[0] != "fcrk" && head[0] != "fcrkn"))
    throw ParseError("first line must be 'fcrk <s>' or 'fcrkn <s>'", hl);
  const bool fcrk = head[0] == "fcrk";
  std::size_t s = 0;
  {
    const auto [p, ec] = std::from_chars(head[1].data(), head[1].data() + head[1].size(), s);
    if (ec != std::errc() || p != head[1].data() + head[1].size() || s == 0)
      throw ParseError("bad stage count '" + std::string(head[1]) + "'", hl);
  }
  bool reuse = false;
  int order = 0;
  for (std::size_t k = 2; k < head.size(); ++k) {
    if (head[k] == "reuse" && fcrk) {
      reuse = true;
    } else if (head[k].starts_with("order=")) {
      const auto v = head[k].substr(6);
      const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), order);
      if (ec != std::errc() || p != v.data() + v.size() || order < 0)
        throw ParseError("bad order '" + std::string(v) + "'", hl);
    } else {
      throw ParseError("unknown header token '" + std::string(head[k]) + "'", hl);
    }
  }

  if (lines.size() < 2) throw ParseError("missing abscissa line", 0);
  std::vector<Rational> c;
  for (auto w : words(lines[1].second)) c.push_back(rational_at(w, lines[1].first));
  if (c.size() != s)
    throw ParseError("expected " + std::to_string(s) + " abscissae, got " + std::to_string(c.size()), lines[1].first);

  const std::size_t stored_rows = fcrk ? s - 1 : (s >= 2 ? s - 2 : 0);
  std::vector<std::vector<RationalPoly>> rows;
  std::optional<std::vector<RationalPoly>> b, bp;
  for (std::size_t k = 2; k < lines.size(); ++k) {
    const auto [l, body] = lines[k];
    if (body.starts_with("b:")) {
      if (b) throw ParseError("duplicate b row", l);
      b = parse_entries(body.substr(2), l);
    } else if (body.starts_with("bp:")) {
      if (fcrk) throw ParseError("bp row in an fcrk tableau", l);
      if (bp) throw ParseError("duplicate bp row", l);
      bp = parse_entries(body.substr(3), l);
    } else {
      if (b || bp) throw ParseError("coefficient rows must precede b and bp", l);
      if (rows.size() == stored_rows) throw ParseError("too many coefficient rows", l);
      auto r = parse_entries(body, l);
      // stage index of this row (1-based) is rows.size() + 2
      const std::size_t want = rows.size() + 1;
      if (r.size() != want)
        throw ParseError("row of stage " + std::to_string(want + 1) + " needs " + std::to_string(want) + " entries", l);
      rows.push_back(std::move(r));
    }
  }
  if (rows.size() != stored_rows)
    throw ParseError("expected " + std::to_string(stored_rows) + " coefficient rows, got " + std::to_string(rows.size()), 0);
  if (!b) throw ParseError("missing b row", 0);
  if (!fcrk && !bp) throw ParseError("missing bp row", 0);

  if (fcrk) {
    FcrkTableau t;
    t.name = name;
    t.c = std::move(c);
    t.A.assign(s, std::vector<RationalPoly>(s));
    for (std::size_t i = 0; i < rows.size(); ++i)
      for (std::size_t j = 0; j < rows[i].size(); ++j) t.A[i + 1][j] = rows[i][j];
    t.b = std::move(*b);
    t.reuse = reuse;
    t.claimed_order = order;
    return t;
  }
  FcrknTableau t;
  t.name = name;
  t.c = std::move(c);
  t.A = std::move(rows);
  t.b = std::move(*b);
  t.bp = std::move(*bp);
  t.claimed_order = order;
  return t;
}

Tableau load_tableau_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  std::string name = path;
  if (const auto slash = name.find_last_of('/'); slash != std::string::npos) name = name.substr(slash + 1);
  if (const auto dot = name.rfind('.'); dot != std::string::npos && dot > 0) name = name.substr(0, dot);
  return parse_tableau(ss.str(), name);
}

}  // namespace fcrk
