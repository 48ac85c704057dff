#include "regext/control.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "regext/error.hpp"
#include "regext/parallel.hpp"
#include "regext/quadrature.hpp"

namespace regext {

double invert_boundary(const ModelParams& p, double shift, double x) {
  const double b = p.cost().slope_inverse(p.rho() * (p.c() + shift - x));
  return std::clamp(b, 0.0, 1.0);
}

double single_regime_boundary(const ModelParams& p, double sigma, double y) {
  return sigma / std::sqrt(2.0 * p.rho()) + chat(p, y);
}

double single_regime_b(const ModelParams& p, double sigma, double x) {
  return invert_boundary(p, sigma / std::sqrt(2.0 * p.rho()), x);
}

ControlSolution::ControlSolution(StoppingSolution stopping, double quad_tol)
    : s_(std::move(stopping)), tol_(quad_tol) {
  for (Regime i : {Regime::first, Regime::second}) {
    x0_[index_of(i)] = s_.x_star(i, 0.0);
    x1_[index_of(i)] = s_.x_star(i, 1.0);
  }
}

double ControlSolution::b_star(Regime i, double x) const {
  return invert_boundary(params(), s_.boundary_shift(i), x);
}

namespace {

// (G - rho) U - f(y) with G h(x, i) = sigma_i^2 h_xx / 2 + lambda_i (h(x, 3 - i) - h(x, i)),
// and the gradient constraint (x - c) - U_y.
void fill_hjb_branches(const ModelParams& p, double x, double y, std::array<ValueReport, 2>& v) {
  const double f = p.cost().value(y);
  for (Regime i : {Regime::first, Regime::second}) {
    ValueReport& ri = v[index_of(i)];
    const ValueReport& rj = v[index_of(other(i))];
    const double s = p.sigma(i);
    ri.generator_branch = 0.5 * s * s * ri.Uxx + p.lambda(i) * (rj.U - ri.U) - p.rho() * ri.U - f;
    ri.gradient_branch = (x - p.c()) - ri.Uy;
    ri.hjb_residual = std::max(ri.generator_branch, ri.gradient_branch);
  }
}

}  // namespace

double ControlSolution::U(double x, double y, Regime i) const { return U_report(x, y, i).U; }

ValueReport ControlSolution::U_report(double x, double y, Regime i) const {
  return U_report_both(x, y)[index_of(i)];
}

// The z-integral of v splits at b*_1(x) ^ y and b*_2(x) ^ y (solved labeling):
//   [0, b1]   both regimes continue; v is a combination of e^{alpha_j (x - x1*(z))}
//   [b1, b2]  regime 1 has stopped (v = x - c), regime 2 sits between the boundaries
//   [b2, y]   both have stopped
// On each panel v is a fixed linear combination of a few z-integrands, so the
// panel integrals of u, u_x and u_xx share one vector quadrature.
std::array<ValueReport, 2> ControlSolution::U_report_both(double x, double y) const {
  const ModelParams& p = params();
  if (!(y >= 0.0 && y <= 1.0)) {
    throw Error(ErrorKind::OutOfRange, "reserve level must lie in [0, 1], got " + std::to_string(y));
  }
  const RootSet& r = s_.roots();
  const ModelParams& sp = s_.solved_params();
  const double rho = p.rho();
  const double c = p.c();
  const double z1 = s_.z1();
  const double Z = s_.z1() + s_.z2();
  const double a3 = r.alpha3;
  const double a4 = r.alpha4;
  const double a5 = r.alpha5;
  const double l2 = sp.lambda(Regime::second);
  const double q = rho / (rho + l2);

  const double b1raw = invert_boundary(p, z1, x);
  const double b2raw = invert_boundary(p, Z, x);
  const double b1 = std::min(b1raw, y);
  const double b2 = std::min(b2raw, y);
  const CostFunction& cost = p.cost();
  auto F = [&](double z) { return cost.value(z) / rho; };

  const Regime s1 = s_.relabeled() ? Regime::second : Regime::first;
  const Regime s2 = other(s1);
  const auto [a3n, a4n] = s_.continuation_coefficients(s1);
  const auto [m3a3n, m4a4n] = s_.continuation_coefficients(s2);

  const double cp = q * (1.0 + a5 * Z) / (2.0 * a5);
  const double cm = q * (a5 * Z - 1.0) / (2.0 * a5);

  const double scale = 1.0 + std::max({std::abs(a3n), std::abs(m3a3n)}) * std::max(1.0, a3 * a3) +
                       std::max({std::abs(a4n), std::abs(m4a4n)}) * a4 * a4 +
                       (std::abs(cp) + std::abs(cm)) * std::max(1.0, a5 * a5);
  const double raw_tol = tol_ / scale;

  Vec<2> I{0.0, 0.0};
  if (b1 > 0.0) {
    const bool need4 = a4n != 0.0 || m4a4n != 0.0;
    I = integrate<2>(
        [&](double z) {
          const double t = x - z1 - (c - cost.slope(z) / rho);
          return Vec<2>{std::exp(a3 * t), need4 ? std::exp(a4 * t) : 0.0};
        },
        0.0, b1, raw_tol);
  }
  Vec<2> J{0.0, 0.0};
  if (b2 > b1) {
    J = integrate<2>(
        [&](double z) {
          const double d = x - Z - (c - cost.slope(z) / rho);
          return Vec<2>{std::exp(a5 * d), std::exp(-a5 * d)};
        },
        b1, b2, raw_tol);
  }

  std::array<ValueReport, 2> out;
  const double L1 = b2 - b1;
  const double L2 = y - b2;
  const double Fb1 = F(b1);
  const double Fb2 = F(b2);

  ValueReport& r1 = out[index_of(s1)];
  r1.U = a3n * I[0] + a4n * I[1] - Fb1 + (x - c) * (L1 + L2);
  r1.Ux = a3n * a3 * I[0] + a4n * a4 * I[1] + (L1 + L2);
  r1.Uxx = a3n * a3 * a3 * I[0] + a4n * a4 * a4 * I[1];

  ValueReport& r2 = out[index_of(s2)];
  r2.U = m3a3n * I[0] + m4a4n * I[1] - Fb1 + cp * J[0] + cm * J[1] + (1.0 - q) * (x - c) * L1 -
         q * (Fb2 - Fb1) + (x - c) * L2;
  r2.Ux = m3a3n * a3 * I[0] + m4a4n * a4 * I[1] + a5 * (cp * J[0] - cm * J[1]) + (1.0 - q) * L1 + L2;
  r2.Uxx = m3a3n * a3 * a3 * I[0] + m4a4n * a4 * a4 * I[1] + a5 * a5 * (cp * J[0] + cm * J[1]);

  // U_y is v at the top of the last nonempty panel, on that panel's branch.
  const double ch = chat(p, y);
  const double fy = cost.slope(y) / rho;
  for (Regime i : {Regime::first, Regime::second}) {
    WBranch b = WBranch::stopped;
    if (y < b1raw) {
      b = WBranch::continuation;
    } else if (y < b2raw) {
      b = WBranch::transient;
    }
    out[index_of(i)].Uy = s_.branch_value_at(b, x, i, ch, 0) - fy;
  }

  fill_hjb_branches(p, x, y, out);
  return out;
}

// ---------------------------------------------------------------- HJB verifier

std::string HjbReport::summary() const {
  std::ostringstream os;
  os.precision(6);
  os << (passed ? "pass" : "FAIL") << " over " << states << " states: max |residual| "
     << max_abs_residual << ", max generator branch " << max_generator
     << ", max gradient branch " << max_gradient << ", max regional error " << max_region_error;
  if (worst) {
    os << "; worst " << worst->check << " at (x, y, i) = (" << worst->x << ", " << worst->y << ", "
       << worst->regime << "), residual " << worst->residual;
  }
  return os.str();
}

HjbReport check_hjb(const ControlSolution& cs, const HjbGrid& grid, const ValueFn& candidate) {
  const StoppingSolution& s = cs.stopping();
  const ModelParams& p = cs.params();
  const double top = std::max(s.x_star(Regime::first, 0.0), s.x_star(Regime::second, 0.0));
  const double lo = grid.x_min.value_or(top - 5.0 * s.z1() - 5.0);
  const double hi = grid.x_max.value_or(top + 5.0);
  const int nx = std::max(grid.x_points, 1);
  const int ny = std::max(grid.y_points, 1);

  struct Cell {
    double x, y;
    std::array<ValueReport, 2> v;
  };
  std::vector<Cell> cells(static_cast<std::size_t>(nx) * ny);
  parallel_for(cells.size(), resolve_threads(grid.threads), [&](std::size_t k) {
    const int ix = static_cast<int>(k / ny);
    const int iy = static_cast<int>(k % ny);
    const double x = nx == 1 ? lo : lo + (hi - lo) * ix / (nx - 1);
    const double y = static_cast<double>(iy + 1) / ny;
    Cell& cell = cells[k];
    cell.x = x;
    cell.y = y;
    if (!candidate) {
      cell.v = cs.U_report_both(x, y);
      return;
    }
    for (Regime i : {Regime::first, Regime::second}) cell.v[index_of(i)] = candidate(x, y, i);
    fill_hjb_branches(p, x, y, cell.v);
  });

  HjbReport rep;
  double worst_ratio = -1.0;
  auto record = [&](const char* check, const Cell& cell, Regime i, double residual) {
    const double ratio = residual / grid.tol;
    if (ratio > 1.0) rep.passed = false;
    if (ratio > worst_ratio) {
      worst_ratio = ratio;
      rep.worst = HjbReport::Offender{check, cell.x, cell.y, number_of(i), residual};
    }
  };
  for (const Cell& cell : cells) {
    for (Regime i : {Regime::first, Regime::second}) {
      const ValueReport& v = cell.v[index_of(i)];
      ++rep.states;
      rep.max_abs_residual = std::max(rep.max_abs_residual, std::abs(v.hjb_residual));
      rep.max_generator = std::max(rep.max_generator, v.generator_branch);
      rep.max_gradient = std::max(rep.max_gradient, v.gradient_branch);
      record("max of branches", cell, i, std::abs(v.hjb_residual));
      record("generator branch", cell, i, v.generator_branch);
      record("gradient branch", cell, i, v.gradient_branch);
      const double b = cs.b_star(i, cell.x);
      if (cell.y <= b) {
        rep.max_region_error = std::max(rep.max_region_error, std::abs(v.generator_branch));
        record("generator branch off in waiting region", cell, i, std::abs(v.generator_branch));
      }
      if (cell.y >= b) {
        rep.max_region_error = std::max(rep.max_region_error, std::abs(v.gradient_branch));
        record("gradient branch off in extraction region", cell, i, std::abs(v.gradient_branch));
      }
    }
  }
  return rep;
}

HjbReport verify_hjb(const ControlSolution& cs, const HjbGrid& grid, const ValueFn& candidate) {
  HjbReport rep = check_hjb(cs, grid, candidate);
  if (!rep.passed) throw Error(ErrorKind::VerificationFailed, "HJB check: " + rep.summary());
  return rep;
}

// ---------------------------------------------------------------- ordering

OrderingReport compare_boundaries(const ControlSolution& cs, const OrderingGrid& grid) {
  const ModelParams& p = cs.params();
  const double s1 = p.sigma(Regime::first);
  const double s2 = p.sigma(Regime::second);
  OrderingReport rep;
  rep.low = s2 < s1 ? Regime::second : Regime::first;
  const Regime high = other(rep.low);
  const double sl = p.sigma(rep.low);
  const double sh = p.sigma(high);
  const bool equal = equal_volatilities(p);

  const double lo = grid.x_min.value_or(
      std::min(single_regime_boundary(p, sl, 1.0), cs.x_star_at_one(rep.low)) - 1.0);
  const double hi = grid.x_max.value_or(
      std::max(single_regime_boundary(p, sh, 0.0), cs.x_star_at_zero(high)) + 1.0);
  const int n = std::max(grid.points, 2);
  rep.rows.reserve(n);

  auto fail = [&](double x, const std::string& what) {
    if (rep.passed) {
      rep.passed = false;
      rep.offending_x = x;
      rep.detail = what;
    }
  };
  for (int k = 0; k < n; ++k) {
    const double x = lo + (hi - lo) * k / (n - 1);
    OrderingRow row{x, single_regime_b(p, sl, x), cs.b_star(rep.low, x), cs.b_star(high, x),
                    single_regime_b(p, sh, x)};
    rep.rows.push_back(row);
    const std::array<double, 4> chain{row.bhash_low, row.b_low, row.b_high, row.bhash_high};
    static const char* names[4] = {"b#(low)", "b*(low)", "b*(high)", "b#(high)"};
    for (int j = 0; j < 3; ++j) {
      const double a = chain[j];
      const double b = chain[j + 1];
      std::ostringstream os;
      os.precision(17);
      if (equal) {
        if (std::abs(a - b) > 1e-12) {
          os << names[j] << " = " << a << " differs from " << names[j + 1] << " = " << b;
          fail(x, os.str());
        }
        continue;
      }
      const bool plateau = a == b && (a == 0.0 || a == 1.0);
      if (!(a < b) && !plateau) {
        os << names[j] << " = " << a << " is not below " << names[j + 1] << " = " << b;
        fail(x, os.str());
      }
    }
  }
  return rep;
}

OrderingReport verify_boundary_ordering(const ControlSolution& cs, const OrderingGrid& grid) {
  OrderingReport rep = compare_boundaries(cs, grid);
  if (!rep.passed) {
    std::ostringstream os;
    os.precision(17);
    os << "at x = " << *rep.offending_x << ": " << rep.detail;
    throw Error(ErrorKind::OrderingViolated, os.str());
  }
  return rep;
}

}  // namespace regext
