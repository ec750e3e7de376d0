#include "fcrk/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>

#include "fcrk/bench.hpp"
#include "fcrk/errors.hpp"
#include "fcrk/orderconds.hpp"

namespace fcrk {

namespace {

struct Usage : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string lower(std::string s) {
  for (char& ch : s) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  return s;
}

Tableau resolve_method(const std::string& spec, std::string& label) {
  if (const auto id = parse_method_id(spec)) {
    label = std::string(method_name(*id));
    return builtin(*id);
  }
  if (!std::filesystem::is_regular_file(spec)) throw Usage("unknown method '" + spec + "'");
  try {
    Tableau t = load_tableau_file(spec);
    label = std::visit([](const auto& x) { return x.name; }, t);
    return t;
  } catch (const ParseError& e) {
    throw Usage(spec + ": " + e.what());
  }
}

Problem resolve_problem(const std::string& id) {
  auto p = problem_by_id(lower(id));
  if (!p) throw Usage("unknown problem '" + id + "'");
  return *p;
}

std::vector<double> parse_breakpoints(const std::string& list) {
  std::vector<double> out;
  if (list.empty()) return out;
  std::size_t start = 0;
  for (;;) {
    const auto comma = list.find(',', start);
    const std::string item = list.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size()) throw Usage("bad breakpoint '" + item + "'");
    out.push_back(v);
    if (comma == std::string::npos) return out;
    start = comma + 1;
  }
}

void write_text(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << text;
}

std::string fmt(double x, const char* spec = "%.4f") {
  char buf[48];
  std::snprintf(buf, sizeof buf, spec, x);
  return buf;
}

struct RunFlags {
  std::string method;
  std::string problem;
  int samples = kDefaultSamplesPerStep;
  std::string out_path;
  bool no_reuse = false;
  std::string breakpoints;
};

void add_run_flags(CLI::App* sub, RunFlags& f) {
  sub->add_option("--method", f.method, "built-in method id or tableau file")->required();
  sub->add_option("--problem", f.problem, "problem id (p1..p4, quad1-<d>, quad2-<d>)")->required();
  sub->add_option("--samples", f.samples, "dense samples per step")->check(CLI::PositiveNumber);
  sub->add_option("--out", f.out_path, "output file (default stdout)");
  sub->add_flag("--no-reuse", f.no_reuse, "evaluate the first stage in every step");
  sub->add_option("--breakpoints", f.breakpoints, "comma-separated restart times");
}

int run_check(const std::string& method, std::optional<int> order, std::ostream& out, std::ostream& err) {
  std::string label;
  const Tableau t = resolve_method(method, label);
  const auto bad = validate_structure(t);
  if (!bad.empty()) {
    err << label << ": invalid tableau\n";
    for (const auto& v : bad) err << "  " << v.to_string() << '\n';
    return 1;
  }
  const int claimed = order ? *order : std::visit([](const auto& x) { return x.claimed_order; }, t);
  if (claimed <= 0) throw Usage(label + " has no claimed order; pass --order");
  const OrderReport rep = verify_order(t);
  out << label << '\n' << rep.to_string();
  if (const auto* n = std::get_if<FcrknTableau>(&t)) {
    for (const auto& v : derivative_consistency(*n)) out << "diagnostic: " << v.to_string() << '\n';
  }
  const bool ok = rep.certifies(claimed);
  out << "claimed order " << claimed << ": " << (ok ? "certified" : "NOT certified") << '\n';
  return ok ? 0 : 1;
}

RunOptions options_of(const RunFlags& f, std::optional<double> t_end) {
  RunOptions o;
  o.samples_per_step = f.samples;
  o.reuse = !f.no_reuse;
  o.breakpoints = parse_breakpoints(f.breakpoints);
  o.t_end = t_end;
  return o;
}

int run_solve(const RunFlags& f, double h, std::optional<double> t_end, std::ostream& out, std::ostream& err) {
  std::string label;
  const Tableau t = resolve_method(f.method, label);
  const Problem p = resolve_problem(f.problem);
  const RunOptions o = options_of(f, t_end);
  IntegrationConfig cfg;
  cfg.h = h;
  cfg.t_end = t_end ? *t_end : std::visit([](const auto& q) { return q.t_final; }, p);
  cfg.breakpoints = o.breakpoints;
  cfg.reuse_enabled = o.reuse;
  try {
    const IntegrationResult res = integrate(p, t, cfg);
    write_text(f.out_path, emit_samples_csv(res.trace, f.samples), out);
    if (!f.out_path.empty())
      out << label << " on " << problem_id(p) << ": steps " << res.stats.steps << ", nf " << res.stats.nf << '\n';
  } catch (const IntegrationError& e) {
    err << "integration failed: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

int run_converge(const RunFlags& f, double h_start, int levels, std::optional<double> t_end, std::ostream& out,
                 std::ostream& err) {
  std::string label;
  const Tableau t = resolve_method(f.method, label);
  const Problem p = resolve_problem(f.problem);
  const RunOptions o = options_of(f, t_end);
  std::vector<double> hs;
  for (int k = 0; k < levels; ++k) hs.push_back(std::ldexp(h_start, -k));
  const auto rows = run_convergence(p, t, label, hs, o);
  write_text(f.out_path, emit_csv(rows), out);
  int code = 0;
  for (const auto& r : rows) {
    if (r.failure) {
      err << "h = " << fmt(r.h, "%.17g") << ": " << *r.failure << '\n';
      code = 1;
    }
  }
  try {
    const SlopeEstimate s = estimate_order(rows);
    out << "slope " << fmt(s.slope) << " (" << s.points_used << " points)\n";
    if (std::holds_alternative<FcrknTableau>(t)) {
      const SlopeEstimate sp = estimate_order(rows, true);
      out << "slope' " << fmt(sp.slope) << " (" << sp.points_used << " points)\n";
    }
  } catch (const std::invalid_argument& e) {
    err << "no slope: " << e.what() << '\n';
    code = 1;
  }
  return code;
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Explicit FCRK / FCRKN methods for retarded functional differential equations", "fcrk"};
  app.set_help_flag("--help", "print this help and exit");
  app.require_subcommand(1);

  std::string check_method;
  std::optional<int> check_order;
  auto* check = app.add_subcommand("check", "verify the order conditions of a tableau");
  check->add_option("--method", check_method, "built-in method id or tableau file")->required();
  check->add_option("--order", check_order, "order to certify (default: the tableau's claimed order)");

  RunFlags solve_flags;
  double solve_h = 0.0;
  std::optional<double> solve_t_end;
  auto* solve = app.add_subcommand("solve", "integrate once and write dense samples as CSV");
  add_run_flags(solve, solve_flags);
  solve->add_option("--h", solve_h, "step size")->required()->check(CLI::PositiveNumber);
  solve->add_option("--t-end", solve_t_end, "end time (default: the problem's span)");

  RunFlags conv_flags;
  double h_start = 0.0;
  int levels = 0;
  std::optional<double> conv_t_end;
  auto* conv = app.add_subcommand("converge", "constant-step convergence sweep h = H*2^-k");
  add_run_flags(conv, conv_flags);
  conv->add_option("--h-start", h_start, "largest step size H")->required()->check(CLI::PositiveNumber);
  conv->add_option("--levels", levels, "number of step sizes")->required()->check(CLI::PositiveNumber);
  conv->add_option("--t-end", conv_t_end, "end time (default: the problem's span)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n' << app.help();
    return 2;
  }

  try {
    if (*check) return run_check(check_method, check_order, out, err);
    if (*solve) return run_solve(solve_flags, solve_h, solve_t_end, out, err);
    return run_converge(conv_flags, h_start, levels, conv_t_end, out, err);
  } catch (const Usage& e) {
    err << "error: " << e.what() << '\n' << app.help();
    return 2;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace fcrk
