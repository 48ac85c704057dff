#pragma once

#include <array>

#include "regext/model.hpp"

namespace regext {

// Roots of Phi_1(a) Phi_2(a) - lambda_1 lambda_2 = 0 and the constants built from them.
struct RootSet {
  double alpha1 = 0.0;  // -alpha4
  double alpha2 = 0.0;  // -alpha3
  double alpha3 = 0.0;
  double alpha4 = 0.0;
  double alpha5 = 0.0;  // sqrt(2 (rho + lambda2) / sigma2^2)
  double beta1 = 0.0;   // alpha4^2
  double beta2 = 0.0;   // alpha3^2
  double a1 = 0.0;
  double a2 = 0.0;
  double a3 = 0.0;
  double a4 = 0.0;
};

struct RootTolerances {
  // |Phi_1 Phi_2 - lambda_1 lambda_2| <= quartic_residual * (rho+lambda1)(rho+lambda2),
  // plus a rounding allowance of 64 eps |alpha d/dalpha (Phi_1 Phi_2)|
  double quartic_residual = 1e-10;
  // relative agreement of the two routes to a1
  double a1_cross_check = 1e-9;
};

/// Reduces the even quartic to a_o b^2 + b_o b + c_o = 0 in b = alpha^2 and
/// takes the square roots of both (positive) solutions, then fills in alpha5 and
/// a1..a4. Throws DegenerateDiscriminant if the quadratic has no two distinct
/// roots, CrossCheckFailed if a residual or the a1 cross-check is out of tolerance.
RootSet solve_characteristic(const ModelParams& p, const RootTolerances& tol = {});

// a1..a4 from alpha3, alpha4. a1 is computed from its defining expression and
// compared against the simplified form -(sigma1^2 alpha3 alpha4 / 2 + rho + lambda1)/lambda1
// + rho/(rho + lambda2); CrossCheckFailed beyond `rel_tol`.
std::array<double, 4> coefficients_a(const ModelParams& p, double alpha3, double alpha4,
                                     double rel_tol = 1e-9);

// Phi_1(alpha) Phi_2(alpha) - lambda_1 lambda_2.
double quartic_residual(const ModelParams& p, double alpha);

// a1 < 0 < a2, a3 < 0 < a4, all strict.
bool check_sign_lemma(const RootSet& roots);

}  // namespace regext
