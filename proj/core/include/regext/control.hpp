#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "regext/model.hpp"
#include "regext/stopping.hpp"

namespace regext {

// Value of the extraction problem and its derivatives at one state.
struct ValueReport {
  double U = 0.0;
  double Uy = 0.0;
  double Ux = 0.0;
  double Uxx = 0.0;
  double generator_branch = 0.0;  // (G - rho) U - f(y)
  double gradient_branch = 0.0;   // (x - c) - U_y
  double hjb_residual = 0.0;      // max of the two branches
};

/// The control problem built on a stopping solution: reflecting boundaries
/// b*_i(x) and the value U(x, y, i) = integral over [0, y] of v(x, i; z) dz.
class ControlSolution {
 public:
  explicit ControlSolution(StoppingSolution stopping, double quad_tol = 1e-9);

  const StoppingSolution& stopping() const noexcept { return s_; }
  const ModelParams& params() const noexcept { return s_.params(); }
  double quad_tol() const noexcept { return tol_; }

  double x_star(Regime i, double y) const { return s_.x_star(i, y); }
  // Endpoints x*_i(0) and x*_i(1).
  double x_star_at_zero(Regime i) const { return x0_[index_of(i)]; }
  double x_star_at_one(Regime i) const { return x1_[index_of(i)]; }

  // Clamped inverse of y -> x*_i(y): 1 left of x*_i(1), 0 right of x*_i(0).
  double b_star(Regime i, double x) const;

  double U(double x, double y, Regime i) const;
  ValueReport U_report(double x, double y, Regime i) const;
  // Both regimes at once; the generator couples them anyway.
  std::array<ValueReport, 2> U_report_both(double x, double y) const;

 private:
  StoppingSolution s_;
  double tol_;
  std::array<double, 2> x0_{};
  std::array<double, 2> x1_{};
};

// Reads U, Uy, Ux, Uxx at a state; used to put an alternative candidate
// through the HJB verifier.
using ValueFn = std::function<ValueReport(double x, double y, Regime i)>;

struct HjbGrid {
  std::optional<double> x_min;  // default x*_top(0) - 5 z1 - 5
  std::optional<double> x_max;  // default x*_top(0) + 5
  int x_points = 400;
  int y_points = 50;  // y = k / y_points, k = 1..y_points
  double tol = 1e-5;
  unsigned threads = 0;
};

struct HjbReport {
  bool passed = true;
  std::size_t states = 0;
  double max_abs_residual = 0.0;   // |max of branches|
  double max_generator = -1e300;   // largest generator branch
  double max_gradient = -1e300;    // largest gradient branch
  double max_region_error = 0.0;   // |active branch| where the region says it must vanish
  struct Offender {
    std::string check;
    double x = 0.0;
    double y = 0.0;
    int regime = 0;
    double residual = 0.0;
  };
  std::optional<Offender> worst;
  std::string summary() const;
};

HjbReport check_hjb(const ControlSolution& cs, const HjbGrid& grid = {},
                    const ValueFn& candidate = nullptr);
// Throws VerificationFailed with the worst state.
HjbReport verify_hjb(const ControlSolution& cs, const HjbGrid& grid = {},
                     const ValueFn& candidate = nullptr);

// Boundary of the problem with a single regime of volatility sigma:
// x#(y) = sigma / sqrt(2 rho) + chat(y), and its clamped inverse.
double single_regime_boundary(const ModelParams& p, double sigma, double y);
double single_regime_b(const ModelParams& p, double sigma, double x);

// b = clamp((f')^{-1}(rho (c + shift - x)), 0, 1), the inverse of x = shift + chat(b).
double invert_boundary(const ModelParams& p, double shift, double x);

struct OrderingGrid {
  std::optional<double> x_min;  // default min(x#(1; low sigma), x*_low(1)) - 1
  std::optional<double> x_max;  // default max(x#(0; high sigma), x*_high(0)) + 1
  int points = 1000;
};

struct OrderingRow {
  double x = 0.0;
  double bhash_low = 0.0;
  double b_low = 0.0;
  double b_high = 0.0;
  double bhash_high = 0.0;
};

/// b#(.; sigma_low) <= b*_low <= b*_high <= b#(.; sigma_high), where "low" is the
/// regime with the smaller volatility. Off the clamp plateaus the inequalities
/// must be strict; with equal volatilities the four curves must coincide.
struct OrderingReport {
  bool passed = true;
  Regime low = Regime::first;
  std::vector<OrderingRow> rows;
  std::optional<double> offending_x;
  std::string detail;
};

OrderingReport compare_boundaries(const ControlSolution& cs, const OrderingGrid& grid = {});
// Throws OrderingViolated with the offending x.
OrderingReport verify_boundary_ordering(const ControlSolution& cs, const OrderingGrid& grid = {});

}  // namespace regext
