#pragma once

#include <array>
#include <optional>
#include <string>

#include "regext/assumptions.hpp"
#include "regext/model.hpp"
#include "regext/roots.hpp"

namespace regext {

enum class SmoothFitForm {
  pasting,    // reduced directly from the six pasting conditions (used by solve_z)
  unshifted,  // h built on a1 and k = q / alpha5; leaves a value jump, kept for comparison
};

/// The smooth-fit equations for the two-boundary stopping problem, written in the
/// y-free variables u = x1*(y) - chat(y) and v = x2*(y) - x1*(y).
///
/// With q = rho / (rho + lambda2) and k = q / alpha5:
///   h(v)    = a1' + q cosh(alpha5 v),  a1' = a1 + (lambda2 - rho) / (rho + lambda2)
///   G1(u,v) = h(v) u + q v cosh(alpha5 v) - k sinh(alpha5 v) + a2
///   G2(u,v) = (a3 - q alpha5 sinh(alpha5 v)) u - q [alpha5 v sinh(alpha5 v) - cosh(alpha5 v)] + a4
/// and M1, M2 solve G1 = 0 and G2 = 0 for u respectively. The unshifted form has
/// h(v) = a1 + k cosh(alpha5 v) and G1 = h(v) u - k [sinh(alpha5 v) - v cosh(alpha5 v)] + a2;
/// its root does not give a continuous w(., 2) at x1*.
class SmoothFitSystem {
 public:
  SmoothFitSystem(const ModelParams& p, const RootSet& roots,
                  SmoothFitForm form = SmoothFitForm::pasting);

  SmoothFitForm form() const noexcept { return form_; }

  double h(double v) const;
  double g1(double u, double v) const;
  double g2(double u, double v) const;

  // Unique v > 0 with h(v) = 0, by bisection to 1e-12. PreconditionViolated if h(0) >= 0.
  double zhat2() const;
  // (1/alpha5) arccosh(-a1' / q), or arccosh(-a1 / k) for the unshifted form.
  double zhat2_closed_form() const;

  // DomainError outside [0, zhat2) and [0, zhat2] respectively.
  double m1(double v) const;
  double m2(double v) const;

  // Open interval that must contain z1*: (M1(0), M2(0)).
  double z1_lower_bound() const;
  double z1_upper_bound() const;

 private:
  double m1_unchecked(double v) const;
  double m2_unchecked(double v) const;

  RootSet r_;
  SmoothFitForm form_;
  double alpha5_;
  double k_;
  double q_;
  double h0_;      // constant term of h
  double hcosh_;   // cosh coefficient of h, also multiplies v cosh in G1
  double zhat2_ = 0.0;
  bool has_zhat2_ = false;
};

enum class StoppingCase { A, B, C_relabeled };

std::string to_string(StoppingCase c);

enum class Side { left, right };

/// Coefficients of w(., i; y) at one reserve level. They refer to the solved
/// labeling: when the regimes were relabeled, "regime 1" here is input regime 2.
struct WCoefficients {
  StoppingCase stopping_case = StoppingCase::A;
  // two-boundary form
  double A3 = 0.0, A4 = 0.0, B3 = 0.0, B4 = 0.0, B5 = 0.0, B6 = 0.0;
  // single-boundary form (sigma1 == sigma2)
  double At3 = 0.0, At4 = 0.0, Bt3 = 0.0, Bt4 = 0.0;
  double x1star = 0.0;
  double x2star = 0.0;
  double chat = 0.0;
};

// Which analytic piece of w is in force.
enum class WBranch { continuation, transient, stopped };

struct FbpGrid {
  std::optional<double> x_min;  // default chat(y) - 10 z1
  std::optional<double> x_max;  // default x2*(y) + 10 z1
  int points = 10000;
  double equality_tol = 1e-7;
  double inequality_tol = 1e-7;
  double payoff_tol = 1e-9;
  double c1_tol = 1e-6;
  double fd_step = 1e-6;
};

struct FbpReport {
  bool passed = true;
  double max_ode_residual = 0.0;  // |L w| where equality must hold
  double max_operator = -1e300;   // max of L w everywhere
  double min_payoff_gap = 1e300;  // min of w - (x - chat)
  double max_value_jump = 0.0;    // at the boundaries
  double max_slope_jump = 0.0;    // one-sided finite-difference slopes at the boundaries
  struct Offender {
    std::string check;
    double x = 0.0;
    int regime = 0;
    double residual = 0.0;
  };
  std::optional<Offender> worst;
  std::string summary() const;
};

/// Solution of the family of optimal selling problems indexed by the reserve level.
///
/// Regime arguments always use the caller's labeling; relabeling (when the
/// conditions only hold with the regimes exchanged) is resolved internally.
class StoppingSolution {
 public:
  StoppingCase stopping_case() const noexcept { return case_; }
  bool relabeled() const noexcept { return case_ == StoppingCase::C_relabeled; }
  double z1() const noexcept { return z1_; }
  double z2() const noexcept { return z2_; }
  // NaN in the single-boundary case, where no bracket is needed.
  double zhat2() const noexcept { return zhat2_; }

  const ModelParams& params() const noexcept { return given_; }
  // Parameters and roots in the solved labeling.
  const ModelParams& solved_params() const noexcept { return solved_; }
  const RootSet& roots() const noexcept { return roots_; }
  const AssumptionReport& assumptions() const noexcept { return report_; }

  double g1_residual() const;
  double g2_residual() const;

  // Regime of the solved labeling that corresponds to caller regime i.
  Regime solved_regime(Regime i) const noexcept { return relabeled() ? other(i) : i; }

  // x1*(y) = z1 + chat(y), x2*(y) = x1*(y) + z2 in the solved labeling.
  double x_star(Regime i, double y) const;
  // x_star(i, y) - chat(y); independent of y.
  double boundary_shift(Regime i) const;

  WCoefficients w_coefficients(double y) const;

  // Left of x1*(y): w(x, i; y) = c3 e^{alpha3 (x - x1*(y))} + c4 e^{alpha4 (x - x1*(y))}.
  std::array<double, 2> continuation_coefficients(Regime i) const;

  // Piecewise closed form. At a boundary the side picks the one-sided branch;
  // w and w_x agree on both sides, w_xx jumps.
  double w(double x, Regime i, double y, Side side = Side::left) const;
  double w_x(double x, Regime i, double y, Side side = Side::left) const;
  double w_xx(double x, Regime i, double y, Side side = Side::left) const;

  // v = w - f'(y)/rho.
  double v(double x, Regime i, double y, Side side = Side::left) const;

  WBranch branch(double x, Regime i, double y, Side side = Side::left) const;
  // Evaluates one analytic piece regardless of where x lies. order = 0, 1, 2.
  double branch_value(WBranch b, double x, Regime i, double y, int order) const;
  // Same with chat(y) already known (hot path of the reserve-level quadrature).
  double branch_value_at(WBranch b, double x, Regime i, double chat_y, int order) const;

  // Copy with the boundary offsets shifted; the result no longer solves the
  // smooth-fit system and exists for exercising the verifiers.
  StoppingSolution perturbed(double dz1, double dz2) const;

 private:
  friend StoppingSolution solve_z(const ModelParams& p);

  StoppingSolution(ModelParams given, ModelParams solved, RootSet roots, AssumptionReport report)
      : given_(std::move(given)), solved_(std::move(solved)), roots_(roots), report_(report) {}

  ModelParams given_;
  ModelParams solved_;
  RootSet roots_;
  AssumptionReport report_;
  StoppingCase case_ = StoppingCase::A;
  double z1_ = 0.0;
  double z2_ = 0.0;
  double zhat2_ = 0.0;
  // w in the continuation region, anchored at x1*: a3n e^{alpha3 (x - x1)} + a4n e^{alpha4 (x - x1)}
  double a3n_ = 0.0;
  double a4n_ = 0.0;
  // regime-2 multipliers of the continuation coefficients
  double ratio3_ = 0.0;
  double ratio4_ = 0.0;
};

/// Case detection and solve: sigma1 == sigma2 gives the single boundary
/// z1 = sigma / sqrt(2 rho); otherwise the conditions are checked as given and,
/// failing that, with the regimes exchanged. Throws AssumptionViolation when
/// neither labeling qualifies, NoBracket if the bisection cannot bracket z2.
StoppingSolution solve_z(const ModelParams& p);

// Candidate boundary offsets of the single-boundary system from its third and
// fourth equations; they coincide iff sigma1 == sigma2.
struct SingleBoundaryOffsets {
  double from_value_match = 0.0;
  double from_smooth_fit = 0.0;
};
SingleBoundaryOffsets single_boundary_offsets(const ModelParams& p, const RootSet& roots);

FbpReport check_fbp(const StoppingSolution& sol, double y, const FbpGrid& grid = {});
// Throws VerificationFailed carrying the worst offender.
FbpReport verify_fbp(const StoppingSolution& sol, double y, const FbpGrid& grid = {});

}  // namespace regext
