// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "draws.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"
#include "regext/assumptions.hpp"
#include "regext/control.hpp"
#include "regext/mcsim.hpp"
#include "regext/roots.hpp"
#include "regext/stopping.hpp"

using namespace regext;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

const ControlSolution& base() {
  static const ControlSolution cs(solve_z(fixtures::reference()));
  return cs;
}

Outcome sign_lemma() {
  std::mt19937_64 g(1);
  int bad = 0;
  for (int n = 0; n < 1000; ++n) {
    if (!check_sign_lemma(solve_characteristic(draws::market(g)))) ++bad;
  }
  return {bad == 0, fmt("%d of 1000 draws violate a1<0<a2, a3<0<a4", bad)};
}

Outcome feasibility() {
  bool ok = true;
  std::string d;
  for (int k = 1; k <= 3; ++k) {
    const auto p = fixtures::sample_box(k);
    const bool row = check_assumptions(p, solve_characteristic(p)).stopping_conditions_ok();
    ok = ok && row;
    d += fmt("row %d %s; ", k, row ? "ok" : "fails");
  }
  const auto p = fixtures::reference();
  const auto rep = check_assumptions(p, solve_characteristic(p));
  ok = ok && rep.all_ok;
  d += fmt("reference market conditions %s, alpha5 = %.6f", rep.all_ok ? "ok" : "fail", rep.values.alpha5);
  return {ok, d};
}

Outcome raster() {
  const int n = 200;
  const double s1lo = 0.01, s1hi = 0.06, s2lo = 0.5, s2hi = 1.2;
  std::vector<char> feasible(static_cast<std::size_t>(n) * n, 0);
  int count = 0;
  for (int k = 0; k < n; ++k) {
    for (int m = 0; m < n; ++m) {
      const double s1 = s1lo + (s1hi - s1lo) * (k + 0.5) / n;
      const double s2 = s2lo + (s2hi - s2lo) * (m + 0.5) / n;
      const auto p = validate({0.03, s1, s2, 0.017, 0.016, 0.0, CostFunction::exponential(1.0)});
      const bool f = check_assumptions(p, solve_characteristic(p)).stopping_conditions_ok();
      feasible[static_cast<std::size_t>(k) * n + m] = f;
      count += f;
    }
  }
  const int kt = static_cast<int>((0.0245 - s1lo) / (s1hi - s1lo) * n);
  const int mt = static_cast<int>((0.78 - s2lo) / (s2hi - s2lo) * n);
  const bool target = feasible[static_cast<std::size_t>(kt) * n + mt];

  // 4-neighbour components of the feasible cells
  std::vector<int> label(feasible.size(), -1);
  int components = 0;
  for (std::size_t s = 0; s < feasible.size(); ++s) {
    if (!feasible[s] || label[s] >= 0) continue;
    std::vector<std::size_t> stack{s};
    label[s] = components;
    while (!stack.empty()) {
      const std::size_t c = stack.back();
      stack.pop_back();
      const int k = static_cast<int>(c / n), m = static_cast<int>(c % n);
      const int nb[4][2] = {{k - 1, m}, {k + 1, m}, {k, m - 1}, {k, m + 1}};
      for (const auto& q : nb) {
        if (q[0] < 0 || q[0] >= n || q[1] < 0 || q[1] >= n) continue;
        const std::size_t t = static_cast<std::size_t>(q[0]) * n + q[1];
        if (feasible[t] && label[t] < 0) {
          label[t] = components;
          stack.push_back(t);
        }
      }
    }
    ++components;
  }
  return {count > 0 && target && components == 1,
          fmt("%d of %d cells feasible, %d component(s), (0.0245, 0.78) %s", count, n * n, components,
              target ? "feasible" : "infeasible")};
}

Outcome smooth_fit() {
  const auto& s = base().stopping();
  const SmoothFitSystem sys(s.solved_params(), s.roots());
  const double g1 = s.g1_residual(), g2 = s.g2_residual();
  const double lo = sys.z1_lower_bound(), hi = sys.z1_upper_bound();
  const auto& p = s.solved_params();
  const oracle::Market m{p.rho(), p.sigma(Regime::first), p.sigma(Regime::second), p.lambda(Regime::first),
                         p.lambda(Regime::second)};
  const auto r = oracle::positive_quartic_roots(m);
  const auto hit = oracle::grid_search(m, r[0], r[1], lo, hi, 0.0, s.zhat2(), 1000);
  const bool in_cell = std::abs(hit.u - s.z1()) <= hit.du && std::abs(hit.v - s.z2()) <= hit.dv;
  const bool ok = std::abs(g1) <= 1e-10 && std::abs(g2) <= 1e-10 && s.z2() > 0.0 && s.z2() < s.zhat2() &&
                  lo < s.z1() && s.z1() < hi && in_cell;
  return {ok, fmt("z1 = %.12f in (%.6f, %.6f), z2 = %.12f in (0, %.6f), |G1| = %.1e, |G2| = %.1e; "
                  "grid cell (%.6f, %.6f), cell size %.1e x %.1e",
                  s.z1(), lo, hi, s.z2(), s.zhat2(), std::abs(g1), std::abs(g2), hit.u, hit.v, hit.du, hit.dv)};
}

Outcome fbp() {
  double ode = 0.0, op = -1e300, jump = 0.0, slope = 0.0;
  bool ok = true;
  for (int k = 1; k <= 9; ++k) {
    const auto rep = check_fbp(base().stopping(), k / 10.0);
    ok = ok && rep.passed;
    ode = std::max(ode, rep.max_ode_residual);
    op = std::max(op, rep.max_operator);
    jump = std::max(jump, rep.max_value_jump);
    slope = std::max(slope, rep.max_slope_jump);
  }
  return {ok, fmt("max |ODE| = %.1e, max operator = %.1e, value jump = %.1e, slope jump = %.1e", ode, op, jump,
                  slope)};
}

Outcome case_b() {
  const auto p = fixtures::equal_vol();
  const auto s = solve_z(p);
  const double sigma = p.sigma(Regime::first);
  double worst = 0.0, worst_hash = 0.0;
  for (int k = 0; k <= 100; ++k) {
    const double y = k / 100.0;
    const double expect = sigma / std::sqrt(2.0 * p.rho()) + chat(p, y);
    for (Regime i : {Regime::first, Regime::second}) {
      worst = std::max(worst, std::abs(s.x_star(i, y) - expect));
      worst_hash = std::max(worst_hash, std::abs(s.x_star(i, y) - single_regime_boundary(p, sigma, y)));
    }
  }
  const auto off = single_boundary_offsets(p, s.roots());
  const double cross = std::abs(off.from_value_match - off.from_smooth_fit);
  const bool ok = s.stopping_case() == StoppingCase::B && worst <= 1e-10 && worst_hash <= 1e-10 && cross <= 1e-10;
  return {ok, fmt("max |x* - formula| = %.1e, max |x* - x#| = %.1e, offset cross-check %.1e", worst, worst_hash,
                  cross)};
}

Outcome hjb() {
  const auto rep = check_hjb(base());
  return {rep.passed && rep.max_abs_residual <= 1e-5,
          fmt("%zu states, max |branch max| = %.1e, generator <= %.1e, gradient <= %.1e", rep.states,
              rep.max_abs_residual, rep.max_generator, rep.max_gradient)};
}

Outcome ordering() {
  const auto rep = compare_boundaries(base());
  double gap = 0.0;
  for (const auto& r : rep.rows) gap = std::max(gap, r.b_high - r.b_low);
  return {rep.passed && rep.rows.size() == 1000,
          fmt("%zu points, largest b*2 - b*1 = %.4f%s%s", rep.rows.size(), gap, rep.detail.empty() ? "" : ", ",
              rep.detail.c_str())};
}

Outcome monte_carlo() {
  const auto& cs = base();
  struct State {
    double x, y;
    int i;
  };
  // inaction, transient (both regimes) and action region
  const State states[] = {{0.0, 0.5, 1}, {0.0, 0.5, 2}, {0.65, 0.5, 1}, {0.65, 0.5, 2}, {1.2, 0.5, 2}};
  SimConfig cfg;
  cfg.dt = 1e-3;
  cfg.n_paths = 100000;
  SimConfig bias_cfg = cfg;
  bias_cfg.n_paths = 20000;
  bool ok = true;
  std::string d;
  for (const auto& st : states) {
    const Regime r = regime_from_int(st.i);
    const double U = cs.U(st.x, st.y, r);
    const auto opt = estimate_value(cs, st.x, st.y, r, Policy::reflect_optimal(), cfg);
    const auto bias = estimate_bias(cs, st.x, st.y, r, Policy::reflect_optimal(), bias_cfg);
    const double err = std::abs(opt.mean - U);
    const bool near = err <= 3.0 * opt.std_error + bias.budget;
    bool dominated = true;
    for (const auto& pol : {Policy::never_extract(), Policy::extract_all_at_start()}) {
      const auto base = estimate_value(cs, st.x, st.y, r, pol, cfg);
      dominated = dominated && base.mean <= U + 3.0 * base.std_error;
    }
    ok = ok && near && dominated;
    d += fmt("\n    (%.2f, %.1f, %d): U = %.5f, MC = %.5f, |err| = %.1e, 3SE = %.1e, budget = %.1e%s%s", st.x, st.y,
             st.i, U, opt.mean, err, 3.0 * opt.std_error, bias.budget, near ? "" : " [too far]",
             dominated ? "" : " [baseline beats U]");
  }
  return {ok, d};
}

Outcome switch_jumps() {
  const auto& cs = base();
  SimConfig cfg;
  cfg.dt = 1e-3;
  const double y0 = 0.8;
  const double x0 = cs.x_star(Regime::second, y0);  // on b*_2 in regime 2
  int switches = 0, on_boundary = 0, bad = 0;
  double worst = 0.0;
  std::vector<TraceRow> tr;
  for (std::int64_t path = 0; path < 1000; ++path) {
    tr.clear();
    simulate_path(cs, x0, y0, Regime::second, Policy::reflect_optimal(), cfg, path, &tr);
    for (std::size_t k = 1; k < tr.size(); ++k) {
      const TraceRow& prev = tr[k - 1];
      const TraceRow& row = tr[k];
      if (!(prev.regime == Regime::second && row.regime == Regime::first)) continue;
      const double b1 = cs.b_star(Regime::first, row.X);
      if (!(prev.Y > b1)) continue;
      ++switches;
      // the reserve drops to the regime-1 boundary at the switch itself
      if (std::abs(row.Y - b1) > 1e-12 || std::abs(row.dnu - (prev.Y - b1)) > 1e-12) ++bad;
      // on the regime-2 barrier just before the switch the lump is the full gap
      const double b2prev = cs.b_star(Regime::second, prev.X);
      if (prev.Y >= b2prev - 1e-12) {
        ++on_boundary;
        const double b2 = cs.b_star(Regime::second, row.X);
        const double slack = std::abs(b2 - b2prev);
        const double shortfall = (b2 - b1) - slack - row.dnu;
        worst = std::max(worst, shortfall);
        if (shortfall > 1e-12) ++bad;
      }
    }
  }
  return {bad == 0 && on_boundary > 0,
          fmt("%d switches above b*1 (%d from the b*2 barrier), %d violations, worst shortfall %.1e", switches,
              on_boundary, bad, worst)};
}

Outcome concavity() {
  const auto& cs = base();
  const double top = std::max(cs.x_star_at_zero(Regime::first), cs.x_star_at_zero(Regime::second));
  const double x0 = top - 5.0 * cs.stopping().z1() - 5.0, x1 = top + 5.0;
  const double c = cs.params().c();
  double worst_d2 = -1e300, worst_grad = 1e300;
  for (int k = 0; k < 400; ++k) {
    const double x = x0 + (x1 - x0) * k / 399.0;
    for (Regime i : {Regime::first, Regime::second}) {
      double u[51];
      for (int m = 0; m <= 50; ++m) {
        const auto r = cs.U_report(x, m / 50.0, i);
        u[m] = r.U;
        if (m > 0) worst_grad = std::min(worst_grad, r.Uy - (x - c));
      }
      for (int m = 1; m < 50; ++m) worst_d2 = std::max(worst_d2, u[m + 1] - 2.0 * u[m] + u[m - 1]);
    }
  }
  return {worst_d2 <= 1e-8 && worst_grad >= -1e-9,
          fmt("max second difference %.1e, min Uy - (x - c) = %.1e", worst_d2, worst_grad)};
}

}  // namespace

// Optional arguments select criteria by number; all run by default.
int main(int argc, char** argv) {
  std::vector<int> only;
  for (int k = 1; k < argc; ++k) only.push_back(std::atoi(argv[k]));
  struct Criterion {
    const char* name;
    double budget_s;
    std::function<Outcome()> run;
  };
  const Criterion criteria[] = {
      {"sign lemma on 1000 random draws", 1, sign_lemma},
      {"parameter feasibility (three sample boxes, reference market)", 1, feasibility},
      {"feasibility raster 200x200", 10, raster},
      {"smooth-fit solve vs 10^6-cell grid search", 5, smooth_fit},
      {"free-boundary verification y = 0.1..0.9", 5, fbp},
      {"equal-volatility consistency", 1, case_b},
      {"HJB verification 400x50x2", 60, hjb},
      {"boundary ordering on 1000 points", 2, ordering},
      {"Monte Carlo optimality at 5 states", 600, monte_carlo},
      {"lump-sum extraction at regime switches", 30, switch_jumps},
      {"concavity and gradient constraint", 10, concavity},
  };
  int failed = 0, n = 0, ran = 0;
  for (const auto& c : criteria) {
    ++n;
    if (!only.empty() && std::find(only.begin(), only.end(), n) == only.end()) continue;
    ++ran;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs <= c.budget_s;
    const bool pass = o.pass && in_time;
    failed += !pass;
    std::printf("%s %2d %s (%.2f s of %.0f s%s): %s\n", pass ? "PASS" : "FAIL", n, c.name, secs, c.budget_s,
                in_time ? "" : ", over budget", o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %d criteria passed\n", ran - failed, ran);
  return failed == 0 ? 0 : 1;
}
