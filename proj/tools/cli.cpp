#include "cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iterator>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "config.hpp"
#include "regext/assumptions.hpp"
#include "regext/control.hpp"
#include "regext/error.hpp"
#include "regext/mcsim.hpp"
#include "regext/model.hpp"
#include "regext/roots.hpp"
#include "regext/stopping.hpp"
#include "svg.hpp"

#ifndef REGEXT_VERSION
#define REGEXT_VERSION "0.0.0"
#endif

namespace regext::cli {

namespace {

using Json = nlohmann::ordered_json;

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string utc_now() {
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::ofstream open_out(const std::string& path) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw IoError("cannot open '" + path + "' for writing");
  return os;
}

void close_out(std::ofstream& os, const std::string& path) {
  os.flush();
  if (!os) throw IoError("write to '" + path + "' failed");
}

// foo.csv -> foo_y.csv; foo -> foo_y
std::string with_suffix(const std::string& path, const std::string& suffix) {
  const auto slash = path.find_last_of('/');
  const auto dot = path.find_last_of('.');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) return path + suffix;
  return path.substr(0, dot) + suffix + path.substr(dot);
}

int exit_for(ErrorKind k) {
  switch (k) {
    case ErrorKind::NonPositiveParameter:
    case ErrorKind::CostNotConvex:
    case ErrorKind::OutOfRange:
    case ErrorKind::InvalidConfig:
      return input_error;
    default:
      return math_failure;
  }
}

// What every subcommand shares: the config, the invocation, and the manifest.
struct Context {
  std::vector<std::string> argv;
  std::string subcommand;
  std::string config_path;
  std::string config_text;
  std::string manifest_path;
  Json resolved = Json::object();
  std::vector<std::string> outputs;
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  std::string started_at = utc_now();

  ModelParams params() {
    config_text = read_file(config_path);
    return validate(parse_config(config_text));
  }

  void write_manifest() const {
    std::string path = manifest_path;
    if (path.empty() && !outputs.empty()) path = outputs.front() + ".manifest.json";
    if (path.empty()) return;
    Json m;
    m["tool"] = "regime-extract";
    m["version"] = REGEXT_VERSION;
    m["subcommand"] = subcommand;
    m["argv"] = argv;
    if (!config_path.empty()) {
      m["config_path"] = config_path;
      m["config_hash"] = "fnv1a64:" + hex64(fnv1a(config_text));
    }
    m["resolved"] = resolved;
    m["outputs"] = outputs;
    m["started_at"] = started_at;
    m["wall_clock_seconds"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    auto os = open_out(path);
    os << m.dump(2) << '\n';
    close_out(os, path);
  }
};

Json to_json(const AssumptionReport& r) {
  Json j;
  j["a5_le_1"] = r.a5_le_1;
  j["cond2"] = r.cond2;
  j["cond3"] = r.cond3;
  j["cond4"] = r.cond4;
  j["assm2"] = r.assm2;
  j["lemma_signs"] = r.lemma_signs;
  j["all_ok"] = r.all_ok;
  j["case_b"] = r.case_b;
  Json v;
  v["alpha5"] = r.values.alpha5;
  v["cond2_lhs"] = r.values.cond2_lhs;
  v["cond3_lhs"] = r.values.cond3_lhs;
  v["cond4_lhs"] = r.values.cond4_lhs;
  v["assm2_rhs"] = r.values.assm2_rhs;
  v["a"] = {r.values.a1, r.values.a2, r.values.a3, r.values.a4};
  j["values"] = v;
  return j;
}

Json to_json(const ValueReport& r) {
  Json j;
  j["U"] = r.U;
  j["Uy"] = r.Uy;
  j["Ux"] = r.Ux;
  j["Uxx"] = r.Uxx;
  j["generator_branch"] = r.generator_branch;
  j["gradient_branch"] = r.gradient_branch;
  j["hjb_residual"] = r.hjb_residual;
  return j;
}

Json to_json(const FbpReport& r, double y) {
  Json j;
  j["y"] = y;
  j["passed"] = r.passed;
  j["max_ode_residual"] = r.max_ode_residual;
  j["max_operator"] = r.max_operator;
  j["min_payoff_gap"] = r.min_payoff_gap;
  j["max_value_jump"] = r.max_value_jump;
  j["max_slope_jump"] = r.max_slope_jump;
  if (r.worst) {
    j["worst"] = {{"check", r.worst->check},
                  {"x", r.worst->x},
                  {"regime", r.worst->regime},
                  {"residual", r.worst->residual}};
  }
  return j;
}

Json to_json(const HjbReport& r) {
  Json j;
  j["passed"] = r.passed;
  j["states"] = r.states;
  j["max_abs_residual"] = r.max_abs_residual;
  j["max_generator"] = r.max_generator;
  j["max_gradient"] = r.max_gradient;
  j["max_region_error"] = r.max_region_error;
  if (r.worst) {
    j["worst"] = {{"check", r.worst->check},
                  {"x", r.worst->x},
                  {"y", r.worst->y},
                  {"regime", r.worst->regime},
                  {"residual", r.worst->residual}};
  }
  return j;
}

// ------------------------------------------------------------------ check

int cmd_check(Context& ctx, std::ostream& out) {
  const ModelParams p = ctx.params();
  const RootSet r = solve_characteristic(p);
  const AssumptionReport rep = check_assumptions(p, r);
  Json j;
  j["case"] = rep.case_b ? "B" : (rep.stopping_conditions_ok() ? "A" : "unresolved");
  j["all_ok"] = rep.all_ok;
  j["report"] = to_json(rep);
  if (!rep.case_b) {
    const ModelParams sw = p.swapped_regimes();
    const AssumptionReport srep = check_assumptions(sw, solve_characteristic(sw));
    if (!rep.stopping_conditions_ok() && srep.stopping_conditions_ok()) j["case"] = "C";
    j["swapped"] = to_json(srep);
  }
  out << j.dump(2) << '\n';
  ctx.write_manifest();
  return rep.all_ok || rep.case_b ? ok : math_failure;
}

// ------------------------------------------------------------------ solve

int cmd_solve(Context& ctx, std::ostream& out) {
  const ModelParams p = ctx.params();
  const StoppingSolution s = solve_z(p);
  const RootSet& r = s.roots();
  Json j;
  j["case"] = to_string(s.stopping_case());
  j["relabeled"] = s.relabeled();
  j["z1"] = s.z1();
  j["z2"] = s.z2();
  j["zhat2"] = s.zhat2();  // null in the single-boundary case
  j["alpha"] = {r.alpha1, r.alpha2, r.alpha3, r.alpha4, r.alpha5};
  j["beta"] = {r.beta1, r.beta2};
  j["a"] = {r.a1, r.a2, r.a3, r.a4};
  j["residuals"] = {{"G1", s.g1_residual()}, {"G2", s.g2_residual()}};
  if (s.stopping_case() != StoppingCase::B) {
    // The unshifted reduction, for comparison; it is not solved here.
    const SmoothFitSystem unshifted(s.solved_params(), r, SmoothFitForm::unshifted);
    j["unshifted_form_G1"] = unshifted.g1(s.z1(), s.z2());
  }
  j["x_star"] = {{"regime1", {{"y0", s.x_star(Regime::first, 0.0)}, {"y1", s.x_star(Regime::first, 1.0)}}},
                 {"regime2", {{"y0", s.x_star(Regime::second, 0.0)}, {"y1", s.x_star(Regime::second, 1.0)}}}};
  out << j.dump(2) << '\n';
  ctx.write_manifest();
  return ok;
}

// ------------------------------------------------------------------ boundary

struct BoundaryOpts {
  int grid = 1001;
  std::string out;
  std::string svg;
};

int cmd_boundary(Context& ctx, const BoundaryOpts& o, std::ostream& out) {
  if (o.grid < 2) throw Error(ErrorKind::InvalidConfig, "--grid must be at least 2");
  const ModelParams p = ctx.params();
  const ControlSolution cs(solve_z(p));
  const double s1 = p.sigma(Regime::first), s2 = p.sigma(Regime::second);
  const double lo = cs.x_star_at_one(Regime::second) - 1.0;
  const double hi = cs.x_star_at_zero(Regime::first) + 1.0;
  ctx.resolved["grid"] = o.grid;
  ctx.resolved["x_range"] = {lo, hi};

  std::vector<double> xs(o.grid);
  std::vector<Series> series{{"b*1", {}, "#1f77b4", false},
                             {"b*2", {}, "#d62728", false},
                             {"b# sigma1", {}, "#1f77b4", true},
                             {"b# sigma2", {}, "#d62728", true}};
  auto os = open_out(o.out);
  os << "x,b1_star,b2_star,bhash_sigma1,bhash_sigma2\n";
  for (int k = 0; k < o.grid; ++k) {
    const double x = lo + (hi - lo) * k / (o.grid - 1);
    const double b1 = cs.b_star(Regime::first, x), b2 = cs.b_star(Regime::second, x);
    const double h1 = single_regime_b(p, s1, x), h2 = single_regime_b(p, s2, x);
    os << num(x) << ',' << num(b1) << ',' << num(b2) << ',' << num(h1) << ',' << num(h2) << '\n';
    xs[k] = x;
    series[0].y.push_back(b1);
    series[1].y.push_back(b2);
    series[2].y.push_back(h1);
    series[3].y.push_back(h2);
  }
  close_out(os, o.out);
  ctx.outputs.push_back(o.out);

  const std::string ypath = with_suffix(o.out, "_y");
  auto ys = open_out(ypath);
  ys << "y,x1_star,x2_star,xhash_sigma1,xhash_sigma2\n";
  for (int k = 0; k < o.grid; ++k) {
    const double y = static_cast<double>(k) / (o.grid - 1);
    ys << num(y) << ',' << num(cs.x_star(Regime::first, y)) << ',' << num(cs.x_star(Regime::second, y))
       << ',' << num(single_regime_boundary(p, s1, y)) << ',' << num(single_regime_boundary(p, s2, y))
       << '\n';
  }
  close_out(ys, ypath);
  ctx.outputs.push_back(ypath);

  if (!o.svg.empty()) {
    auto sv = open_out(o.svg);
    write_line_svg(sv, "optimal extraction boundaries", "x", xs, series);
    close_out(sv, o.svg);
    ctx.outputs.push_back(o.svg);
  }
  Json j;
  j["outputs"] = ctx.outputs;
  j["rows"] = o.grid;
  out << j.dump(2) << '\n';
  ctx.write_manifest();
  return ok;
}

// ------------------------------------------------------------------ value

struct StateOpts {
  double x = 0.0;
  double y = 0.5;
  int regime = 1;
};

int cmd_value(Context& ctx, const StateOpts& s, std::ostream& out) {
  const ModelParams p = ctx.params();
  const Regime i = regime_from_int(s.regime);
  if (!(s.y >= 0.0 && s.y <= 1.0)) throw Error(ErrorKind::OutOfRange, "--y must lie in [0, 1]");
  const ControlSolution cs(solve_z(p));
  Json j;
  j["state"] = {{"x", s.x}, {"y", s.y}, {"regime", s.regime}};
  j["value"] = to_json(cs.U_report(s.x, s.y, i));
  j["b_star"] = cs.b_star(i, s.x);
  out << j.dump(2) << '\n';
  ctx.write_manifest();
  return ok;
}

// ------------------------------------------------------------------ verify

struct VerifyOpts {
  int x_points = 400;
  int y_points = 50;
  int fbp_points = 10000;
  double inject_z2 = 0.0;
  unsigned threads = 0;
};

int cmd_verify(Context& ctx, const VerifyOpts& o, std::ostream& out) {
  if (o.x_points < 2 || o.y_points < 1 || o.fbp_points < 2) {
    throw Error(ErrorKind::InvalidConfig, "grid sizes must be positive");
  }
  const ModelParams p = ctx.params();
  StoppingSolution s = solve_z(p);
  if (o.inject_z2 != 0.0) s = s.perturbed(0.0, o.inject_z2);
  const ControlSolution cs(s);
  ctx.resolved["x_points"] = o.x_points;
  ctx.resolved["y_points"] = o.y_points;
  ctx.resolved["fbp_points"] = o.fbp_points;
  ctx.resolved["inject_z2_error"] = o.inject_z2;

  bool passed = true;
  Json fbp = Json::array();
  FbpGrid fg;
  fg.points = o.fbp_points;
  for (int k = 1; k <= 9; ++k) {
    const double y = k / 10.0;
    const FbpReport r = check_fbp(s, y, fg);
    passed = passed && r.passed;
    fbp.push_back(to_json(r, y));
  }
  HjbGrid hg;
  hg.x_points = o.x_points;
  hg.y_points = o.y_points;
  hg.threads = o.threads;
  const HjbReport h = check_hjb(cs, hg);
  passed = passed && h.passed;

  Json j;
  j["passed"] = passed;
  j["case"] = to_string(s.stopping_case());
  j["fbp"] = fbp;
  j["hjb"] = to_json(h);
  out << j.dump(2) << '\n';
  ctx.write_manifest();
  return passed ? ok : math_failure;
}

// ------------------------------------------------------------------ simulate

struct SimOpts {
  StateOpts state;
  std::int64_t paths = 100000;
  double dt = 1e-3;
  double horizon = 0.0;
  std::uint64_t seed = SimConfig{}.base_seed;
  std::string policy = "reflect_optimal";
  bool no_antithetic = false;
  bool bias = false;
  unsigned threads = 0;
  std::string trace;
};

int cmd_simulate(Context& ctx, const SimOpts& o, std::ostream& out) {
  const ModelParams p = ctx.params();
  const Regime i = regime_from_int(o.state.regime);
  if (!(o.state.y >= 0.0 && o.state.y <= 1.0)) {
    throw Error(ErrorKind::OutOfRange, "--y must lie in [0, 1]");
  }
  SimConfig cfg;
  cfg.dt = o.dt;
  cfg.horizon = o.horizon;
  cfg.n_paths = o.paths;
  cfg.base_seed = o.seed;
  cfg.antithetic = !o.no_antithetic;
  cfg.threads = o.threads;
  validate(cfg, p);
  const Policy policy = policy_from_string(o.policy);
  const ControlSolution cs(solve_z(p));

  ctx.resolved["dt"] = cfg.dt;
  ctx.resolved["horizon"] = cfg.resolved_horizon(p);
  ctx.resolved["paths"] = cfg.n_paths;
  ctx.resolved["seed"] = cfg.base_seed;
  ctx.resolved["antithetic"] = cfg.antithetic;
  ctx.resolved["policy"] = policy.label;

  const SimOutcome r = estimate_value(cs, o.state.x, o.state.y, i, policy, cfg);
  const double U = cs.U(o.state.x, o.state.y, i);
  Json j;
  j["policy"] = r.policy_id;
  j["state"] = {{"x", o.state.x}, {"y", o.state.y}, {"regime", o.state.regime}};
  j["config"] = {{"dt", cfg.dt},
                 {"horizon", cfg.resolved_horizon(p)},
                 {"n_paths", cfg.n_paths},
                 {"seed", cfg.base_seed},
                 {"antithetic", cfg.antithetic}};
  j["mean"] = r.mean;
  j["std_error"] = r.std_error;
  j["n_paths"] = r.n_paths;
  j["n_units"] = r.n_units;
  j["tail_bound"] = r.tail_bound;
  j["U"] = U;
  if (policy.kind == Policy::Kind::reflect_optimal) {
    j["abs_error"] = std::abs(r.mean - U);
    j["three_se"] = 3.0 * r.std_error;
    if (o.bias) {
      const BiasEstimate b = estimate_bias(cs, o.state.x, o.state.y, i, policy, cfg);
      j["bias"] = {{"mean_dt", b.mean_dt},   {"mean_half", b.mean_half}, {"diff", b.diff},
                   {"diff_se", b.diff_se},   {"c_d", b.c_d},             {"budget", b.budget}};
      j["within_budget"] = std::abs(r.mean - U) <= 3.0 * r.std_error + b.budget;
    }
  } else {
    j["dominated"] = r.mean <= U + 3.0 * r.std_error;
  }

  if (!o.trace.empty()) {
    std::vector<TraceRow> rows;
    simulate_path(cs, o.state.x, o.state.y, i, policy, cfg, 0, &rows);
    auto ts = open_out(o.trace);
    write_trace_csv(ts, rows);
    close_out(ts, o.trace);
    ctx.outputs.push_back(o.trace);
    j["trace"] = {{"path", o.trace}, {"rows", rows.size()}, {"skorokhod_violation", skorokhod_violation(cs, rows)}};
  }
  out << j.dump(2) << '\n';
  ctx.write_manifest();
  return ok;
}

// ------------------------------------------------------------------ scan-region

struct ScanOpts {
  double rho = 0.0, lambda1 = 0.0, lambda2 = 0.0;
  std::string s1_range, s2_range;
  int steps = 200;
  std::string out;
  std::string svg;
};

std::pair<double, double> parse_range(const std::string& text, const char* name) {
  const auto sep = text.find_first_of(",:");
  if (sep == std::string::npos) {
    throw Error(ErrorKind::InvalidConfig, std::string(name) + " must look like lo,hi");
  }
  double lo = 0.0, hi = 0.0;
  try {
    std::size_t used = 0;
    lo = std::stod(text.substr(0, sep), &used);
    if (used != sep) throw std::invalid_argument(text);
    const std::string rest = text.substr(sep + 1);
    hi = std::stod(rest, &used);
    if (used != rest.size()) throw std::invalid_argument(text);
  } catch (const std::logic_error&) {
    throw Error(ErrorKind::InvalidConfig, std::string(name) + ": cannot parse '" + text + "'");
  }
  if (!(lo > 0.0 && hi > lo)) {
    throw Error(ErrorKind::InvalidConfig, std::string(name) + " must satisfy 0 < lo < hi");
  }
  return {lo, hi};
}

int cmd_scan(Context& ctx, const ScanOpts& o, std::ostream& out) {
  if (o.steps < 1) throw Error(ErrorKind::InvalidConfig, "--steps must be at least 1");
  const auto [a0, a1] = parse_range(o.s1_range, "--sigma1-range");
  const auto [b0, b1] = parse_range(o.s2_range, "--sigma2-range");
  ctx.resolved["steps"] = o.steps;
  ctx.resolved["sigma1_range"] = {a0, a1};
  ctx.resolved["sigma2_range"] = {b0, b1};
  ctx.resolved["cell"] = "center";

  // The conditions do not involve c or the cost; any valid choice works.
  const int n = o.steps;
  std::vector<char> cells(static_cast<std::size_t>(n) * n, 'I');
  std::ostringstream csv;
  csv << "sigma1,sigma2,feasible\n";
  for (int k = 0; k < n; ++k) {
    const double s1 = a0 + (a1 - a0) * (k + 0.5) / n;
    for (int m = 0; m < n; ++m) {
      const double s2 = b0 + (b1 - b0) * (m + 0.5) / n;
      const ModelParams p =
          validate(ParamBundle{o.rho, s1, s2, o.lambda1, o.lambda2, 0.0, CostFunction::exponential(1.0)});
      const AssumptionReport rep = check_assumptions(p, solve_characteristic(p));
      const char flag = rep.case_b ? 'B' : (rep.stopping_conditions_ok() ? 'F' : 'I');
      cells[static_cast<std::size_t>(m) * n + k] = flag;
      csv << num(s1) << ',' << num(s2) << ',' << (flag == 'B' ? "B" : flag == 'F' ? "1" : "0") << '\n';
    }
  }
  if (o.out.empty()) {
    out << csv.str();
  } else {
    auto os = open_out(o.out);
    os << csv.str();
    close_out(os, o.out);
    ctx.outputs.push_back(o.out);
  }
  if (!o.svg.empty()) {
    auto sv = open_out(o.svg);
    write_raster_svg(sv, "solvability region", "sigma1", "sigma2", n, n, a0, a1, b0, b1, cells);
    close_out(sv, o.svg);
    ctx.outputs.push_back(o.svg);
  }
  ctx.write_manifest();
  return ok;
}

}  // namespace

int run(int argc, const char* const argv[], std::ostream& out, std::ostream& err) {
  Context ctx;
  ctx.argv.assign(argv, argv + argc);

  CLI::App app{"Two-regime optimal extraction: boundaries, values, verification and simulation",
               "regime-extract"};
  app.set_version_flag("--version", REGEXT_VERSION);
  app.require_subcommand(1);

  auto add_config = [&](CLI::App* sub) {
    sub->add_option("-c,--config", ctx.config_path, "JSON parameter file")->required();
    sub->add_option("--manifest", ctx.manifest_path, "write a run manifest to this path");
  };
  auto add_state = [](CLI::App* sub, StateOpts& s) {
    sub->add_option("--x", s.x, "price")->required();
    sub->add_option("--y", s.y, "reserve level in [0, 1]")->required();
    sub->add_option("--regime", s.regime, "regime, 1 or 2")->required();
  };

  auto* check = app.add_subcommand("check", "evaluate the parameter conditions");
  add_config(check);

  auto* solve = app.add_subcommand("solve", "solve for the free boundaries");
  add_config(solve);

  BoundaryOpts bopts;
  auto* boundary = app.add_subcommand("boundary", "tabulate b*_i(x), b#(x) and x*_i(y), x#(y)");
  add_config(boundary);
  boundary->add_option("--grid", bopts.grid, "number of grid points")->capture_default_str();
  boundary->add_option("--out", bopts.out, "CSV path; the y table goes to <stem>_y<ext>")->required();
  boundary->add_option("--svg", bopts.svg, "optional SVG plot");

  StateOpts vopts;
  auto* value = app.add_subcommand("value", "value function and HJB residual at one state");
  add_config(value);
  add_state(value, vopts);

  VerifyOpts veropts;
  auto* verify = app.add_subcommand("verify", "free-boundary and HJB grid verification");
  add_config(verify);
  verify->add_option("--x-points", veropts.x_points)->capture_default_str();
  verify->add_option("--y-points", veropts.y_points)->capture_default_str();
  verify->add_option("--fbp-points", veropts.fbp_points)->capture_default_str();
  verify->add_option("--inject-z2-error", veropts.inject_z2, "shift z2 after solving (test hook)");
  verify->add_option("--threads", veropts.threads, "0: REGIME_EXTRACT_THREADS or all cores");

  SimOpts sopts;
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo value of an extraction policy");
  add_config(simulate);
  add_state(simulate, sopts.state);
  simulate->add_option("--paths", sopts.paths)->capture_default_str();
  simulate->add_option("--dt", sopts.dt)->capture_default_str();
  simulate->add_option("--horizon", sopts.horizon, "0 selects 10/rho")->capture_default_str();
  simulate->add_option("--seed", sopts.seed)->capture_default_str();
  simulate->add_option("--policy", sopts.policy, "reflect_optimal | never_extract | extract_all_at_start")
      ->capture_default_str();
  simulate->add_flag("--no-antithetic", sopts.no_antithetic);
  simulate->add_flag("--bias", sopts.bias, "estimate the discretization bias by dt halving");
  simulate->add_option("--threads", sopts.threads, "0: REGIME_EXTRACT_THREADS or all cores");
  simulate->add_option("--trace", sopts.trace, "CSV trace of path 0");

  ScanOpts scopts;
  auto* scan = app.add_subcommand("scan-region", "feasibility raster over (sigma1, sigma2)");
  scan->add_option("--rho", scopts.rho)->required();
  scan->add_option("--lambda1", scopts.lambda1)->required();
  scan->add_option("--lambda2", scopts.lambda2)->required();
  scan->add_option("--sigma1-range", scopts.s1_range, "lo,hi")->required();
  scan->add_option("--sigma2-range", scopts.s2_range, "lo,hi")->required();
  scan->add_option("--steps", scopts.steps, "cells per axis")->capture_default_str();
  scan->add_option("--out", scopts.out, "CSV path (stdout if omitted)");
  scan->add_option("--svg", scopts.svg, "optional SVG raster");
  scan->add_option("--manifest", ctx.manifest_path, "write a run manifest to this path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? ok : input_error;
  }

  try {
    if (*check) return ctx.subcommand = "check", cmd_check(ctx, out);
    if (*solve) return ctx.subcommand = "solve", cmd_solve(ctx, out);
    if (*boundary) return ctx.subcommand = "boundary", cmd_boundary(ctx, bopts, out);
    if (*value) return ctx.subcommand = "value", cmd_value(ctx, vopts, out);
    if (*verify) return ctx.subcommand = "verify", cmd_verify(ctx, veropts, out);
    if (*simulate) return ctx.subcommand = "simulate", cmd_simulate(ctx, sopts, out);
    if (*scan) return ctx.subcommand = "scan-region", cmd_scan(ctx, scopts, out);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return input_error;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return io_error;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_for(e.kind());
  }
  return input_error;
}

}  // namespace regext::cli
