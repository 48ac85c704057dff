#include "regext/stopping.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>

#include "regext/error.hpp"

namespace regext {

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

// Bisection on a sign change of a monotone function, run until the bracket
// cannot be halved any further in double precision.
template <class F>
double bisect(F&& f, double lo, double hi, double tol) {
  double flo = f(lo);
  for (int it = 0; it < 400 && hi - lo > 0.0; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
    if (hi - lo <= tol * 1e-4) break;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

// ---------------------------------------------------------------- smooth fit

SmoothFitSystem::SmoothFitSystem(const ModelParams& p, const RootSet& roots, SmoothFitForm form)
    : r_(roots), form_(form) {
  const double rho = p.rho();
  const double l2 = p.lambda(Regime::second);
  alpha5_ = roots.alpha5;
  q_ = rho / (rho + l2);
  k_ = q_ / alpha5_;
  if (form == SmoothFitForm::pasting) {
    h0_ = roots.a1 + (l2 - rho) / (rho + l2);
    hcosh_ = q_;
  } else {
    h0_ = roots.a1;
    hcosh_ = k_;
  }
  if (h(0.0) < 0.0) {
    double hi = 1.0 / alpha5_;
    while (h(hi) <= 0.0) hi *= 2.0;
    zhat2_ = bisect([this](double v) { return h(v); }, 0.0, hi, 1e-12);
    has_zhat2_ = true;
  }
}

double SmoothFitSystem::h(double v) const { return h0_ + hcosh_ * std::cosh(alpha5_ * v); }

double SmoothFitSystem::g1(double u, double v) const {
  const double av = alpha5_ * v;
  return h(v) * u + hcosh_ * v * std::cosh(av) - k_ * std::sinh(av) + r_.a2;
}

double SmoothFitSystem::g2(double u, double v) const {
  const double av = alpha5_ * v;
  return (r_.a3 - q_ * alpha5_ * std::sinh(av)) * u - q_ * (av * std::sinh(av) - std::cosh(av)) +
         r_.a4;
}

double SmoothFitSystem::zhat2() const {
  if (!has_zhat2_) {
    throw Error(ErrorKind::PreconditionViolated,
                "h(0) = " + fmt(h(0.0)) + " is not negative");
  }
  return zhat2_;
}

double SmoothFitSystem::zhat2_closed_form() const {
  zhat2();
  return std::acosh(-h0_ / hcosh_) / alpha5_;
}

double SmoothFitSystem::m1_unchecked(double v) const {
  const double av = alpha5_ * v;
  return (k_ * std::sinh(av) - hcosh_ * v * std::cosh(av) - r_.a2) / h(v);
}

double SmoothFitSystem::m2_unchecked(double v) const {
  const double av = alpha5_ * v;
  return (q_ * (av * std::sinh(av) - std::cosh(av)) - r_.a4) / (r_.a3 - q_ * alpha5_ * std::sinh(av));
}

double SmoothFitSystem::m1(double v) const {
  const double zh = zhat2();
  if (!(v >= 0.0 && v < zh)) {
    throw Error(ErrorKind::DomainError, "M1 needs 0 <= v < " + fmt(zh) + ", got " + fmt(v));
  }
  return m1_unchecked(v);
}

double SmoothFitSystem::m2(double v) const {
  const double zh = zhat2();
  if (!(v >= 0.0 && v <= zh)) {
    throw Error(ErrorKind::DomainError, "M2 needs 0 <= v <= " + fmt(zh) + ", got " + fmt(v));
  }
  return m2_unchecked(v);
}

double SmoothFitSystem::z1_lower_bound() const { return m1(0.0); }
double SmoothFitSystem::z1_upper_bound() const { return m2(0.0); }

// ---------------------------------------------------------------- solution

std::string to_string(StoppingCase c) {
  switch (c) {
    case StoppingCase::A: return "A";
    case StoppingCase::B: return "B";
    case StoppingCase::C_relabeled: return "C";
  }
  return "?";
}

namespace {

void set_anchored(double z1, const RootSet& r, double& a3n, double& a4n) {
  a3n = (r.alpha4 * z1 - 1.0) / (r.alpha4 - r.alpha3);
  a4n = (1.0 - r.alpha3 * z1) / (r.alpha4 - r.alpha3);
}

}  // namespace

StoppingSolution solve_z(const ModelParams& p) {
  const RootSet r = solve_characteristic(p);
  const AssumptionReport rep = check_assumptions(p, r);

  auto fill_ratios = [](StoppingSolution& s) {
    const ModelParams& q = s.solved_;
    const double l1 = q.lambda(Regime::first);
    s.ratio3_ = phi(q, Regime::first, s.roots_.alpha3) / l1;
    s.ratio4_ = phi(q, Regime::first, s.roots_.alpha4) / l1;
  };

  if (rep.case_b) {
    StoppingSolution s(p, p, r, rep);
    s.case_ = StoppingCase::B;
    s.z1_ = p.sigma(Regime::first) / std::sqrt(2.0 * p.rho());
    s.z2_ = 0.0;
    s.zhat2_ = std::numeric_limits<double>::quiet_NaN();
    s.a3n_ = s.z1_;
    s.a4n_ = 0.0;
    // Phi_1(alpha3)/lambda1 and Phi_1(alpha4)/lambda1 in exact form when the volatilities agree.
    s.ratio3_ = 1.0;
    s.ratio4_ = -p.lambda(Regime::second) / p.lambda(Regime::first);
    return s;
  }

  // z2 on one labeling; nullopt when M1 - M2 does not change sign.
  struct Bracketed {
    double z2 = 0.0;
    double zhat2 = 0.0;
  };
  auto try_solve = [](const ModelParams& q, const RootSet& qr, std::string& why) -> std::optional<Bracketed> {
    const SmoothFitSystem sys(q, qr);
    const double zh = sys.zhat2();
    auto diff = [&](double v) { return sys.m1(v) - sys.m2(v); };
    const double d0 = diff(0.0);
    if (!(d0 < 0.0)) {
      why = "M1(0) - M2(0) = " + fmt(d0) + " is not negative";
      return std::nullopt;
    }
    double eps = 1e-10;
    double hi = zh * (1.0 - eps);
    while (!(diff(hi) > 0.0)) {
      eps *= 0.1;
      hi = zh * (1.0 - eps);
      if (eps < 1e-16 || hi >= zh) {
        why = "M1 - M2 does not change sign on (0, " + fmt(zh) + ")";
        return std::nullopt;
      }
    }
    return Bracketed{bisect(diff, 0.0, hi, 1e-12), zh};
  };

  auto finish = [&](const ModelParams& q, const RootSet& qr, const AssumptionReport& qrep,
                    StoppingCase kind, const Bracketed& b) {
    StoppingSolution s(p, q, qr, qrep);
    s.case_ = kind;
    s.z2_ = b.z2;
    s.z1_ = SmoothFitSystem(q, qr).m1(b.z2);
    s.zhat2_ = b.zhat2;
    set_anchored(s.z1_, qr, s.a3n_, s.a4n_);
    fill_ratios(s);
    return s;
  };

  const ModelParams sw = p.swapped_regimes();
  const RootSet swr = solve_characteristic(sw);
  const AssumptionReport swrep = check_assumptions(sw, swr);

  std::string why;
  if (rep.stopping_conditions_ok()) {
    if (auto b = try_solve(p, r, why)) return finish(p, r, rep, StoppingCase::A, *b);
    // The conditions can hold for the more volatile regime in first place, where the
    // pasting system only brackets a root once the labels are exchanged.
    std::string why_swapped;
    if (auto b = try_solve(sw, swr, why_swapped)) {
      return finish(sw, swr, swrep, StoppingCase::C_relabeled, *b);
    }
    throw Error(ErrorKind::NoBracket, why + "; with the regimes exchanged: " + why_swapped);
  }
  if (!swrep.stopping_conditions_ok()) {
    throw AssumptionViolation("the solvability conditions fail for both labelings of the regimes",
                              rep, swrep);
  }
  if (auto b = try_solve(sw, swr, why)) return finish(sw, swr, swrep, StoppingCase::C_relabeled, *b);
  throw Error(ErrorKind::NoBracket, why);
}

double StoppingSolution::g1_residual() const {
  if (case_ == StoppingCase::B) return 0.0;
  return SmoothFitSystem(solved_, roots_).g1(z1_, z2_);
}

double StoppingSolution::g2_residual() const {
  if (case_ == StoppingCase::B) return 0.0;
  return SmoothFitSystem(solved_, roots_).g2(z1_, z2_);
}

double StoppingSolution::boundary_shift(Regime i) const {
  return solved_regime(i) == Regime::first ? z1_ : z1_ + z2_;
}

double StoppingSolution::x_star(Regime i, double y) const {
  return boundary_shift(i) + chat(given_, y);
}

WCoefficients StoppingSolution::w_coefficients(double y) const {
  WCoefficients c;
  c.stopping_case = case_;
  c.chat = chat(given_, y);
  c.x1star = z1_ + c.chat;
  c.x2star = c.x1star + z2_;
  const RootSet& r = roots_;
  const double A3 = a3n_ * std::exp(-r.alpha3 * c.x1star);
  const double A4 = a4n_ * std::exp(-r.alpha4 * c.x1star);
  if (case_ == StoppingCase::B) {
    c.At3 = A3;
    c.At4 = A4;
    c.Bt3 = c.At3;
    c.Bt4 = -(solved_.lambda(Regime::second) / solved_.lambda(Regime::first)) * c.At4;
    return c;
  }
  const double rho = solved_.rho();
  const double l2 = solved_.lambda(Regime::second);
  const double q = rho / (rho + l2);
  const double a5 = r.alpha5;
  const double Z = z1_ + z2_;
  c.A3 = A3;
  c.A4 = A4;
  c.B3 = ratio3_ * A3;
  c.B4 = ratio4_ * A4;
  c.B5 = q * (1.0 + a5 * Z) / (2.0 * a5) * std::exp(-a5 * c.x2star);
  c.B6 = q * (a5 * Z - 1.0) / (2.0 * a5) * std::exp(a5 * c.x2star);
  return c;
}

std::array<double, 2> StoppingSolution::continuation_coefficients(Regime i) const {
  if (solved_regime(i) == Regime::first) return {a3n_, a4n_};
  return {ratio3_ * a3n_, ratio4_ * a4n_};
}

WBranch StoppingSolution::branch(double x, Regime i, double y, Side side) const {
  const double ch = chat(given_, y);
  const double x1 = z1_ + ch;
  const double x2 = x1 + z2_;
  const bool left = side == Side::left;
  if (x < x1 || (x == x1 && left)) return WBranch::continuation;
  if (solved_regime(i) == Regime::first) return WBranch::stopped;
  if (x < x2 || (x == x2 && left && x2 > x1)) return WBranch::transient;
  return WBranch::stopped;
}

double StoppingSolution::branch_value_at(WBranch b, double x, Regime i, double ch, int order) const {
  const Regime s = solved_regime(i);
  if (b == WBranch::transient && s == Regime::first) b = WBranch::stopped;
  switch (b) {
    case WBranch::stopped:
      return order == 0 ? x - ch : (order == 1 ? 1.0 : 0.0);
    case WBranch::continuation: {
      const double t = x - (z1_ + ch);
      const double m3 = s == Regime::first ? 1.0 : ratio3_;
      const double m4 = s == Regime::first ? 1.0 : ratio4_;
      const double a3 = roots_.alpha3;
      const double a4 = roots_.alpha4;
      const double t3 = m3 * a3n_ * std::exp(a3 * t);
      const double t4 = m4 * a4n_ * (a4n_ == 0.0 ? 0.0 : std::exp(a4 * t));
      if (order == 0) return t3 + t4;
      if (order == 1) return a3 * t3 + a4 * t4;
      return a3 * a3 * t3 + a4 * a4 * t4;
    }
    case WBranch::transient: {
      const double rho = solved_.rho();
      const double l2 = solved_.lambda(Regime::second);
      const double q = rho / (rho + l2);
      const double a5 = roots_.alpha5;
      const double Z = z1_ + z2_;
      const double d = x - (Z + ch);
      const double cp = q * (1.0 + a5 * Z) / (2.0 * a5) * std::exp(a5 * d);
      const double cm = q * (a5 * Z - 1.0) / (2.0 * a5) * std::exp(-a5 * d);
      if (order == 0) return cp + cm + (1.0 - q) * (x - ch);
      if (order == 1) return a5 * (cp - cm) + (1.0 - q);
      return a5 * a5 * (cp + cm);
    }
  }
  return 0.0;
}

double StoppingSolution::branch_value(WBranch b, double x, Regime i, double y, int order) const {
  return branch_value_at(b, x, i, chat(given_, y), order);
}

double StoppingSolution::w(double x, Regime i, double y, Side side) const {
  return branch_value(branch(x, i, y, side), x, i, y, 0);
}

double StoppingSolution::w_x(double x, Regime i, double y, Side side) const {
  return branch_value(branch(x, i, y, side), x, i, y, 1);
}

double StoppingSolution::w_xx(double x, Regime i, double y, Side side) const {
  return branch_value(branch(x, i, y, side), x, i, y, 2);
}

double StoppingSolution::v(double x, Regime i, double y, Side side) const {
  return w(x, i, y, side) - given_.cost().slope(y) / given_.rho();
}

StoppingSolution StoppingSolution::perturbed(double dz1, double dz2) const {
  StoppingSolution s = *this;
  s.z1_ += dz1;
  s.z2_ += dz2;
  set_anchored(s.z1_, roots_, s.a3n_, s.a4n_);
  return s;
}

SingleBoundaryOffsets single_boundary_offsets(const ModelParams& p, const RootSet& r) {
  const double h = 0.5 * p.sigma(Regime::first) * p.sigma(Regime::first);
  const double a3 = r.alpha3;
  const double a4 = r.alpha4;
  SingleBoundaryOffsets o;
  o.from_value_match = h * (a3 + a4) / (p.rho() + h * a3 * a4);
  o.from_smooth_fit = (h * (a3 * a3 + a4 * a4 + a3 * a4) - p.rho()) / (h * a3 * a4 * (a3 + a4));
  return o;
}

// ---------------------------------------------------------------- verification

std::string FbpReport::summary() const {
  std::ostringstream os;
  os.precision(6);
  os << (passed ? "pass" : "FAIL") << ": max |ODE residual| " << max_ode_residual
     << ", max operator " << max_operator << ", min payoff gap " << min_payoff_gap
     << ", max value jump " << max_value_jump << ", max slope jump " << max_slope_jump;
  if (worst) {
    os << "; worst " << worst->check << " at x = " << worst->x << ", regime " << worst->regime
       << ", residual " << worst->residual;
  }
  return os.str();
}

FbpReport check_fbp(const StoppingSolution& sol, double y, const FbpGrid& grid) {
  const ModelParams& p = sol.params();
  const double ch = chat(p, y);
  const double x1 = sol.z1() + ch;
  const double x2 = x1 + sol.z2();
  const double lo = grid.x_min.value_or(ch - 10.0 * sol.z1());
  const double hi = grid.x_max.value_or(x2 + 10.0 * sol.z1());

  FbpReport rep;
  double worst_ratio = -1.0;
  auto record = [&](const char* check, double x, Regime i, double residual, double tol) {
    const double ratio = residual / tol;
    if (ratio > 1.0) rep.passed = false;
    if (ratio > worst_ratio) {
      worst_ratio = ratio;
      rep.worst = FbpReport::Offender{check, x, number_of(i), residual};
    }
  };

  auto eval_point = [&](double x, Side side) {
    for (Regime i : {Regime::first, Regime::second}) {
      const Regime j = other(i);
      const WBranch b = sol.branch(x, i, y, side);
      const double wi = sol.branch_value_at(b, x, i, ch, 0);
      const double wj = sol.branch_value_at(sol.branch(x, j, y, side), x, j, ch, 0);
      const double wxx = sol.branch_value_at(b, x, i, ch, 2);
      const double s = p.sigma(i);
      const double L = 0.5 * s * s * wxx + p.lambda(i) * (wj - wi) - p.rho() * wi;
      rep.max_operator = std::max(rep.max_operator, L);
      record("operator inequality", x, i, L, grid.inequality_tol);
      if (b != WBranch::stopped && !(b == WBranch::transient && sol.solved_regime(i) == Regime::first)) {
        rep.max_ode_residual = std::max(rep.max_ode_residual, std::abs(L));
        record("ODE residual", x, i, std::abs(L), grid.equality_tol);
      }
      const double gap = wi - (x - ch);
      rep.min_payoff_gap = std::min(rep.min_payoff_gap, gap);
      record("payoff domination", x, i, -gap, grid.payoff_tol);
    }
  };

  const int n = std::max(grid.points, 2);
  for (int k = 0; k < n; ++k) {
    const double x = lo + (hi - lo) * k / (n - 1);
    eval_point(x, Side::left);
    if (x == x1 || x == x2) eval_point(x, Side::right);
  }
  for (double b : {x1, x2}) {
    eval_point(b, Side::left);
    eval_point(b, Side::right);
  }

  // C1 fit: one-sided second-order difference quotients on either side of each boundary.
  const double hstep = grid.fd_step;
  for (double b : {x1, x2}) {
    for (Regime i : {Regime::first, Regime::second}) {
      const double wl = sol.w(b, i, y, Side::left);
      const double wr = sol.w(b, i, y, Side::right);
      const double jump = std::abs(wl - wr);
      rep.max_value_jump = std::max(rep.max_value_jump, jump);
      record("value jump", b, i, jump, grid.equality_tol);

      const double dl = (3.0 * wl - 4.0 * sol.w(b - hstep, i, y) + sol.w(b - 2.0 * hstep, i, y)) /
                        (2.0 * hstep);
      const double dr = (-3.0 * wr + 4.0 * sol.w(b + hstep, i, y, Side::right) -
                         sol.w(b + 2.0 * hstep, i, y, Side::right)) /
                        (2.0 * hstep);
      const double sj = std::abs(dl - dr);
      rep.max_slope_jump = std::max(rep.max_slope_jump, sj);
      record("slope jump", b, i, sj, grid.c1_tol);
    }
  }
  return rep;
}

FbpReport verify_fbp(const StoppingSolution& sol, double y, const FbpGrid& grid) {
  FbpReport rep = check_fbp(sol, y, grid);
  if (!rep.passed) {
    throw Error(ErrorKind::VerificationFailed, "free-boundary check at y = " + fmt(y) + ": " +
                                                   rep.summary());
  }
  return rep;
}

}  // namespace regext
