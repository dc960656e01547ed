#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <fdeflow/fdeflow.hpp>

#include "checks.hpp"

namespace fdeflow::cli {

namespace {

using nlohmann::json;

struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct RunConfig {
  std::string subcommand;
  std::string problem;
  std::string history;
  std::optional<double> horizon;
  double grid_step = 1e-3;
  double t0 = 0.0;
  std::optional<double> t;
  std::string direction = "const:1";
  bool oracle = false;
  std::string suite = "all";
  std::uint64_t seed = SolverConfig{}.seed;
  std::string out_path;
  std::string summary_path;
  double atol = Tolerance{}.atol;
  double rtol = Tolerance{}.rtol;
  int max_iters = Tolerance{}.max_iters;
  std::string quadrature = "trapezoid";
  double s_min = SolverConfig{}.s_min;
  int max_halvings = SolverConfig{}.max_halvings;
  double fd_step = 1e-4;
  std::string kernel_poly;
  std::string h_poly;
  double x0 = 1.0;
  double history_depth = -1.0;

  SolverConfig solver() const {
    SolverConfig c;
    c.grid_step = grid_step;
    c.tol = Tolerance{atol, rtol, max_iters};
    c.quadrature = quadrature == "simpson" ? QuadratureKind::Simpson : QuadratureKind::Trapezoid;
    c.s_min = s_min;
    c.max_halvings = max_halvings;
    c.seed = seed;
    c.validate();
    return c;
  }
};

std::vector<double> parse_list(const std::string& s, char sep) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    std::size_t end = s.find(sep, pos);
    if (end == std::string::npos) end = s.size();
    std::string_view cell(s.data() + pos, end - pos);
    while (!cell.empty() && cell.front() == ' ') cell.remove_prefix(1);
    while (!cell.empty() && cell.back() == ' ') cell.remove_suffix(1);
    double v = 0.0;
    const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (cell.empty() || res.ec != std::errc() || res.ptr != cell.data() + cell.size()) {
      throw UsageError("cannot parse number '" + std::string(cell) + "' in '" + s + "'");
    }
    out.push_back(v);
    pos = end + 1;
  }
  return out;
}

/// "c00,c01;c10,c11" -> rows by power of t, columns by power of s.
std::vector<std::vector<double>> parse_table(const std::string& s) {
  std::vector<std::vector<double>> rows;
  std::stringstream ss(s);
  std::string row;
  while (std::getline(ss, row, ';')) rows.push_back(parse_list(row, ','));
  if (rows.empty()) throw UsageError("empty kernel table");
  return rows;
}

json report_json(const PicardReport& r) {
  return {{"iterations", r.iterations}, {"residual", r.residual}, {"ratios", r.ratios}};
}

json run_json(const SemiflowRun& run) {
  json steps = json::array();
  for (const StepRecord& s : run.steps) {
    steps.push_back({{"start", s.start},
                     {"length", s.spec.length},
                     {"panels", s.spec.panels},
                     {"halvings", s.plan.halvings},
                     {"lipschitz_est", s.plan.lipschitz_est},
                     {"picard", report_json(s.report)}});
  }
  json j{{"termination", to_string(run.termination)},
         {"reached_time", run.reached_time},
         {"steps", run.steps.size()},
         {"total_picard_iterations", run.total_picard_iterations()},
         {"step_log", std::move(steps)}};
  if (!run.message.empty()) j["message"] = run.message;
  return j;
}

double exact_error(const Problem& p, const Trajectory& x, double t0) {
  double e = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    e = std::max(e, (x.value(i) - p.exact(t0 + x.nodes()[i])).norm());
  }
  return e;
}

class Outputs {
 public:
  Outputs(const RunConfig& rc, std::ostream& out, std::ostream& err) : out_(&out), err_(&err) {
    if (!rc.out_path.empty()) {
      out_file_.open(rc.out_path);
      if (!out_file_) throw UsageError("cannot write '" + rc.out_path + "'");
      out_ = &out_file_;
    }
    if (!rc.summary_path.empty()) {
      summary_file_.open(rc.summary_path);
      if (!summary_file_) throw UsageError("cannot write '" + rc.summary_path + "'");
      err_ = &summary_file_;
    }
  }
  std::ostream& data() { return *out_; }
  void summary(const json& j) { *err_ << j.dump(2) << '\n'; }

 private:
  std::ostream* out_;
  std::ostream* err_;
  std::ofstream out_file_;
  std::ofstream summary_file_;
};

Problem load_problem(const RunConfig& rc, const std::string& fallback) {
  const std::string name = rc.problem.empty() ? fallback : rc.problem;
  if (name.empty()) throw UsageError("--problem is required");
  try {
    return make_problem(name, rc.grid_step);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

double horizon_of(const RunConfig& rc, const Problem& p) {
  const double h = rc.horizon.value_or(p.default_horizon);
  if (!(h >= 0.0) || !std::isfinite(h)) throw UsageError("--horizon must be >= 0");
  return h;
}

CsvOptions csv_options(const RunConfig& rc, double delay_horizon) {
  CsvOptions o;
  o.history_depth = rc.history_depth >= 0.0 ? rc.history_depth
                                            : (std::isfinite(delay_horizon) ? delay_horizon : 0.0);
  return o;
}

int solve_dde(const RunConfig& rc, Outputs& io) {
  const Problem p = load_problem(rc, "");
  if (p.kind != ProblemKind::Autonomous) {
    throw UsageError("solve-dde needs an autonomous problem; use solve-process for '" + p.name +
                     "'");
  }
  const double T = horizon_of(rc, p);
  const SolverConfig cfg = rc.solver();
  const HistoryPtr phi = parse_history(rc.history.empty() ? p.default_history : rc.history,
                                       p.dim());
  const SemiflowRun run = semiflow(p.f, phi, T, cfg);
  write_csv(io.data(), *run.trajectory, csv_options(rc, p.f.delay_horizon));
  json j = run_json(run);
  j["problem"] = p.name;
  if (p.exact && rc.history.empty()) j["exact_error"] = exact_error(p, *run.trajectory, 0.0);
  io.summary(j);
  return run.ok() ? kOk : kSolverFailure;
}

int solve_process(const RunConfig& rc, Outputs& io) {
  const Problem p = load_problem(rc, "");
  if (p.kind == ProblemKind::Autonomous) {
    throw UsageError("solve-process needs a nonautonomous problem; '" + p.name +
                     "' is autonomous");
  }
  const double t = rc.t.value_or(rc.t0 + horizon_of(rc, p));
  if (!(t >= rc.t0)) throw UsageError("--t must be >= --t0");
  const SolverConfig cfg = rc.solver();
  const HistoryPtr phi = parse_history(rc.history.empty() ? p.default_history : rc.history,
                                       p.dim());
  const ProcessRun pr = process(p.g, t, rc.t0, phi, cfg);
  const Trajectory x = pr.path();
  CsvOptions o = csv_options(rc, p.g.delay_horizon);
  o.time_offset = rc.t0;
  write_csv(io.data(), x, o);
  json j = run_json(pr.run);
  j["problem"] = p.name;
  j["t0"] = rc.t0;
  j["clock_time"] = pr.clock_time();
  j["clock_defect"] = clock_defect(pr);
  if (p.exact && rc.history.empty() && rc.t0 == 0.0) j["exact_error"] = exact_error(p, x, 0.0);
  io.summary(j);
  return pr.ok() ? kOk : kSolverFailure;
}

int solve_vide_cmd(const RunConfig& rc, Outputs& io) {
  Problem p;
  if (!rc.kernel_poly.empty() || !rc.h_poly.empty()) {
    if (!rc.problem.empty()) throw UsageError("give either --problem or --kernel-poly/--h-poly");
    try {
      p = make_poly_vide(parse_table(rc.kernel_poly.empty() ? "1" : rc.kernel_poly),
                         parse_list(rc.h_poly.empty() ? "0,1" : rc.h_poly, ','), rc.x0,
                         rc.grid_step);
    } catch (const InvariantError& e) {
      throw UsageError(e.what());
    }
  } else {
    p = load_problem(rc, "");
  }
  if (p.kind != ProblemKind::Vide) throw UsageError("'" + p.name + "' is not a VIDE problem");
  const double T = horizon_of(rc, p);
  const SolverConfig cfg = rc.solver();
  const ProcessRun pr = solve_vide(p.vide, T, cfg);
  const Trajectory x = pr.path();
  write_csv(io.data(), x, csv_options(rc, 0.0));
  json j = run_json(pr.run);
  j["problem"] = p.name;
  j["clock_defect"] = clock_defect(pr);
  if (p.exact) j["exact_error"] = exact_error(p, x, 0.0);
  if (rc.oracle && T > 0.0) {
    const ForwardPath direct = volterra_direct(p.vide, T, rc.grid_step);
    double d = 0.0;
    for (std::size_t i = 0; i < direct.size(); ++i) {
      const double u = direct.nodes()[i];
      if (u > x.horizon()) break;
      d = std::max(d, (x.evaluate(u) - direct.value(i)).norm());
    }
    j["oracle_distance"] = d;
    if (p.exact) {
      double e = 0.0;
      for (std::size_t i = 0; i < direct.size(); ++i) {
        e = std::max(e, (direct.value(i) - p.exact(direct.nodes()[i])).norm());
      }
      j["oracle_exact_error"] = e;
    }
  }
  io.summary(j);
  return pr.ok() ? kOk : kSolverFailure;
}

int variational_cmd(const RunConfig& rc, Outputs& io) {
  const Problem p = load_problem(rc, "");
  if (p.kind != ProblemKind::Autonomous) {
    throw UsageError("variational needs an autonomous problem; '" + p.name + "' is not");
  }
  const double T = horizon_of(rc, p);
  const SolverConfig cfg = rc.solver();
  const HistoryPtr phi = parse_history(rc.history.empty() ? p.default_history : rc.history,
                                       p.dim());
  const HistoryPtr dir = parse_history(rc.direction, p.dim());
  const SemiflowRun base = semiflow(p.f, phi, T, cfg);
  json j{{"problem", p.name}, {"base", run_json(base)}};
  if (!base.ok()) {
    io.summary(j);
    return kSolverFailure;
  }
  const VariationalRun v = solve_variational(p.f, base, dir, T, cfg);
  write_csv(io.data(), *v.v, csv_options(rc, p.f.delay_horizon));
  json reports = json::array();
  for (const PicardReport& r : v.reports) reports.push_back(report_json(r));
  j["reports"] = std::move(reports);
  j["termination"] = to_string(base.termination);
  j["reached_time"] = base.reached_time;
  j["steps"] = v.reports.size();
  int total = 0;
  for (const PicardReport& r : v.reports) total += r.iterations;
  j["total_picard_iterations"] = total;
  if (T > 0.0) {
    const ForwardPath fd = fd_solution_derivative(p.f, base, dir, T, rc.fd_step, cfg);
    j["fd_step"] = rc.fd_step;
    j["fd_distance"] = max_node_distance(*v.v, fd);
  }
  io.summary(j);
  return kOk;
}

int check_cmd(const RunConfig& rc, Outputs& io) {
  std::vector<std::string> suites;
  if (rc.suite == "all") {
    suites = checks::suite_names();
  } else {
    const auto& known = checks::suite_names();
    if (std::find(known.begin(), known.end(), rc.suite) == known.end()) {
      throw UsageError("unknown suite '" + rc.suite + "'");
    }
    suites.push_back(rc.suite);
  }
  const SolverConfig cfg = rc.solver();

  std::vector<Problem> problems;
  for (const auto& s : suites) problems.push_back(load_problem(rc, checks::default_problem_for(s)));
  // Kind mismatches are usage errors; detect them before any solver work.
  for (std::size_t i = 0; i < suites.size(); ++i) {
    const bool autonomous = problems[i].kind == ProblemKind::Autonomous;
    const std::string& s = suites[i];
    const bool ok = (s == "semigroup" || s == "uniqueness" || s == "variational")
                        ? autonomous
                    : (s == "cocycle" || s == "clock")   ? !autonomous
                    : (s == "vide_routes") ? problems[i].kind == ProblemKind::Vide
                                           : true;
    if (!ok) {
      throw UsageError("suite '" + s + "' does not apply to " + to_string(problems[i].kind) +
                       " problem '" + problems[i].name + "'");
    }
  }

  std::vector<std::future<checks::CheckResult>> jobs;
  for (std::size_t i = 0; i < suites.size(); ++i) {
    jobs.push_back(std::async(std::launch::async, [&, i] {
      try {
        return checks::run_suite(suites[i], problems[i], cfg);
      } catch (const Error& e) {
        checks::CheckResult r;
        r.suite = suites[i];
        r.problem = problems[i].name;
        r.measured = INFINITY;
        r.note = e.what();
        return r;
      }
    }));
  }

  bool all = true;
  json results = json::array();
  std::ostream& os = io.data();
  os << "suite,problem,measured,threshold,result,note\n";
  for (auto& job : jobs) {
    const checks::CheckResult r = job.get();
    all = all && r.pass;
    os << r.suite << ',' << r.problem << ',' << format_double(r.measured) << ','
       << format_double(r.threshold) << ',' << (r.pass ? "PASS" : "FAIL") << ",\"" << r.note
       << "\"\n";
    results.push_back({{"suite", r.suite},
                       {"problem", r.problem},
                       {"measured", std::isfinite(r.measured) ? json(r.measured) : json(nullptr)},
                       {"threshold", r.threshold},
                       {"pass", r.pass},
                       {"note", r.note}});
  }
  io.summary({{"all_passed", all}, {"results", std::move(results)}});
  return all ? kOk : kSolverFailure;
}

void add_options(CLI::App& app, RunConfig& rc) {
  app.add_option("--problem", rc.problem, "Registry problem, e.g. linear_const_delay(-1,1)");
  app.add_option("--history", rc.history, "const:c[,..] | linear:a,b | samples:file.csv");
  app.add_option("--horizon", rc.horizon, "Integration length");
  app.add_option("--grid-step", rc.grid_step, "Node spacing")->check(CLI::PositiveNumber);
  app.add_option("--t0", rc.t0, "Initial time (solve-process)");
  app.add_option("--t", rc.t, "Final time (solve-process)");
  app.add_option("--direction", rc.direction, "Perturbation history (variational)");
  app.add_flag("--oracle", rc.oracle, "Also run the direct Volterra scheme (solve-vide)");
  app.add_option("--suite", rc.suite, "Check suite name or 'all'");
  app.add_option("--seed", rc.seed, "Seed for randomized probes");
  app.add_option("--out", rc.out_path, "CSV / table output file (default stdout)");
  app.add_option("--summary", rc.summary_path, "JSON summary file (default stderr)");
  app.add_option("--atol", rc.atol)->check(CLI::NonNegativeNumber);
  app.add_option("--rtol", rc.rtol)->check(CLI::NonNegativeNumber);
  app.add_option("--max-iters", rc.max_iters)->check(CLI::PositiveNumber);
  app.add_option("--quadrature", rc.quadrature)
      ->check(CLI::IsMember({"trapezoid", "simpson"}));
  app.add_option("--s-min", rc.s_min, "Smallest admissible step")->check(CLI::PositiveNumber);
  app.add_option("--max-halvings", rc.max_halvings)->check(CLI::NonNegativeNumber);
  app.add_option("--fd-step", rc.fd_step, "Finite-difference step (variational)")
      ->check(CLI::PositiveNumber);
  app.add_option("--kernel-poly", rc.kernel_poly, "k(t,s) coefficients 'c00,c01;c10,c11'");
  app.add_option("--h-poly", rc.h_poly, "h(x) coefficients 'a0,a1,...'");
  app.add_option("--x0", rc.x0, "Initial value for --kernel-poly problems");
  app.add_option("--history-depth", rc.history_depth,
                 "History rows to print before t0 (default: the delay window)");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig rc;
  CLI::App app{"Delay equation solver on the space of continuous histories", "fdeflow"};
  app.set_config("--config", "", "key=value configuration file");
  app.require_subcommand(1);
  add_options(app, rc);
  const std::pair<const char*, const char*> commands[] = {
      {"solve-dde", "Integrate an autonomous delay equation"},
      {"solve-process", "Integrate a time-dependent equation from t0 to t"},
      {"solve-vide", "Solve a Volterra integro-differential equation"},
      {"variational", "Solution derivative along a history direction"},
      {"check", "Run numerical property checks"},
  };
  for (const auto& [name, help] : commands) app.add_subcommand(name, help)->fallthrough();

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }
  rc.subcommand = app.get_subcommands().front()->get_name();

  std::optional<Outputs> io;
  try {
    io.emplace(rc, out, err);
    if (rc.subcommand == "solve-dde") return solve_dde(rc, *io);
    if (rc.subcommand == "solve-process") return solve_process(rc, *io);
    if (rc.subcommand == "solve-vide") return solve_vide_cmd(rc, *io);
    if (rc.subcommand == "variational") return variational_cmd(rc, *io);
    return check_cmd(rc, *io);
  } catch (const UsageError& e) {
    err << "fdeflow: " << e.what() << '\n';
    return kUsage;
  } catch (const std::invalid_argument& e) {
    err << "fdeflow: " << e.what() << '\n';
    return kUsage;
  } catch (const InvariantError& e) {
    err << "fdeflow: " << e.what() << '\n';
    return kUsage;
  } catch (const Error& e) {
    err << "fdeflow: " << e.what() << '\n';
    if (io) io->summary({{"termination", "error"}, {"message", e.what()}});
    return kSolverFailure;
  }
}

}  // namespace fdeflow::cli
