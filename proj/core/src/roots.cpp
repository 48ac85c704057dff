#include "regext/roots.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "regext/error.hpp"

namespace regext {

double quartic_residual(const ModelParams& p, double alpha) {
  return phi(p, Regime::first, alpha) * phi(p, Regime::second, alpha) -
         p.lambda(Regime::first) * p.lambda(Regime::second);
}

std::array<double, 4> coefficients_a(const ModelParams& p, double alpha3, double alpha4,
                                     double rel_tol) {
  const double rho = p.rho();
  const double l1 = p.lambda(Regime::first);
  const double l2 = p.lambda(Regime::second);
  const double s1 = p.sigma(Regime::first);
  const double phi3 = phi(p, Regime::first, alpha3);
  const double phi4 = phi(p, Regime::first, alpha4);
  const double den = l1 * (alpha4 - alpha3);

  const double a1 = -(alpha4 * phi3 - alpha3 * phi4) / den + rho / (rho + l2);
  const double a2 = (phi3 - phi4) / den;
  const double a3 = alpha3 * alpha4 / den * (phi4 - phi3);
  const double a4 = (alpha3 * phi3 - alpha4 * phi4) / den + l2 / (rho + l2);

  const double a1_simple =
      -(0.5 * s1 * s1 * alpha3 * alpha4 + rho + l1) / l1 + rho / (rho + l2);
  if (std::abs(a1 - a1_simple) > rel_tol * std::max(std::abs(a1), std::abs(a1_simple))) {
    std::ostringstream os;
    os.precision(17);
    os << "a1 = " << a1 << " disagrees with simplified form " << a1_simple;
    throw Error(ErrorKind::CrossCheckFailed, os.str());
  }
  return {a1, a2, a3, a4};
}

RootSet solve_characteristic(const ModelParams& p, const RootTolerances& tol) {
  const double rho = p.rho();
  const double l1 = p.lambda(Regime::first);
  const double l2 = p.lambda(Regime::second);
  const double s1sq = p.sigma(Regime::first) * p.sigma(Regime::first);
  const double s2sq = p.sigma(Regime::second) * p.sigma(Regime::second);

  const double ao = 0.25 * s1sq * s2sq;
  const double bo = -0.5 * s1sq * (rho + l2) - 0.5 * s2sq * (rho + l1);
  const double co = (rho + l1) * (rho + l2) - l1 * l2;

  const double disc = bo * bo - 4.0 * ao * co;
  if (!(disc > 0.0)) {
    std::ostringstream os;
    os << "b_o^2 - 4 a_o c_o = " << disc;
    throw Error(ErrorKind::DegenerateDiscriminant, os.str());
  }
  // bo < 0, so -bo + sqrt(disc) has no cancellation; the small root follows from Vieta.
  RootSet r;
  r.beta1 = (-bo + std::sqrt(disc)) / (2.0 * ao);
  r.beta2 = co / (ao * r.beta1);
  r.alpha4 = std::sqrt(r.beta1);
  r.alpha3 = std::sqrt(r.beta2);
  r.alpha1 = -r.alpha4;
  r.alpha2 = -r.alpha3;
  r.alpha5 = std::sqrt(2.0 * (rho + l2) / s2sq);

  if (!(r.alpha1 < r.alpha2 && r.alpha2 < 0.0 && 0.0 < r.alpha3 && r.alpha3 < r.alpha4)) {
    throw Error(ErrorKind::DegenerateDiscriminant, "characteristic roots are not strictly ordered");
  }
  const double scale = (rho + l1) * (rho + l2);
  for (double a : {r.alpha1, r.alpha2, r.alpha3, r.alpha4}) {
    const double res = quartic_residual(p, a);
    // A correctly rounded root still leaves |alpha R'(alpha)| eps behind; allow a few ulps
    // of that on top of the fixed tolerance so badly scaled inputs are not rejected.
    const double cond = a * a *
                        (s1sq * std::abs(phi(p, Regime::second, a)) +
                         s2sq * std::abs(phi(p, Regime::first, a)));
    const double allowance = 64.0 * std::numeric_limits<double>::epsilon() * cond;
    if (std::abs(res) > tol.quartic_residual * scale + allowance) {
      std::ostringstream os;
      os.precision(17);
      os << "quartic residual " << res << " at alpha = " << a;
      throw Error(ErrorKind::CrossCheckFailed, os.str());
    }
  }

  const auto a = coefficients_a(p, r.alpha3, r.alpha4, tol.a1_cross_check);
  r.a1 = a[0];
  r.a2 = a[1];
  r.a3 = a[2];
  r.a4 = a[3];
  return r;
}

bool check_sign_lemma(const RootSet& r) {
  return r.a1 < 0.0 && r.a2 > 0.0 && r.a3 < 0.0 && r.a4 > 0.0;
}

}  // namespace regext
