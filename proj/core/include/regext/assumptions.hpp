#pragma once

#include <string>

#include "regext/error.hpp"
#include "regext/model.hpp"
#include "regext/roots.hpp"

namespace regext {

// Parameter restrictions under which the two-boundary stopping problem is solved
// explicitly, evaluated with their exact inequality directions.
struct AssumptionReport {
  bool a5_le_1 = false;      // alpha5 <= 1
  bool cond2 = false;        // a1 + rho/(alpha5 (rho + lambda2)) < 0
  bool cond3 = false;        // a1 + cosh(1) rho/(alpha5 (rho + lambda2)) >= 0
  bool cond4 = false;        // (rho/(rho+lambda2) + a4)/a3 - a2/(a1 + rho/(alpha5 (rho+lambda2))) < 0
  bool assm2 = false;        // alpha5 <= min(lambda2, rho)/lambda2
  bool lemma_signs = false;  // a1 < 0 < a2, a3 < 0 < a4
  bool all_ok = false;       // conjunction of the five condition flags
  bool case_b = false;       // sigma1 == sigma2: conditions not required, flags bypassed

  struct Values {
    double alpha5 = 0.0;
    double cond2_lhs = 0.0;
    double cond3_lhs = 0.0;
    double cond4_lhs = 0.0;
    double assm2_rhs = 0.0;
    double a1 = 0.0, a2 = 0.0, a3 = 0.0, a4 = 0.0;
  } values;

  // Items 1-4 only (what the smooth-fit solve needs).
  bool stopping_conditions_ok() const noexcept { return a5_le_1 && cond2 && cond3 && cond4; }
};

/// `strict_margin` is added to the strict inequalities (cond2, cond4 and the sign
/// lemma) so borderline inputs can be rejected deterministically; default 0.
AssumptionReport check_assumptions(const ModelParams& p, const RootSet& roots,
                                   double strict_margin = 0.0);

// Raised when neither labeling of the regimes satisfies the solvability conditions.
class AssumptionViolation : public Error {
 public:
  AssumptionViolation(const std::string& message, AssumptionReport as_given, AssumptionReport swapped)
      : Error(ErrorKind::AssumptionViolated, message), as_given_(as_given), swapped_(swapped) {}

  const AssumptionReport& as_given() const noexcept { return as_given_; }
  const AssumptionReport& swapped() const noexcept { return swapped_; }

 private:
  AssumptionReport as_given_;
  AssumptionReport swapped_;
};

}  // namespace regext
