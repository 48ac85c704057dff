#include "regext/assumptions.hpp"

#include <algorithm>
#include <cmath>

namespace regext {

AssumptionReport check_assumptions(const ModelParams& p, const RootSet& r, double strict_margin) {
  const double rho = p.rho();
  const double l2 = p.lambda(Regime::second);
  const double k = rho / (r.alpha5 * (rho + l2));

  AssumptionReport rep;
  auto& v = rep.values;
  v.alpha5 = r.alpha5;
  v.cond2_lhs = r.a1 + k;
  v.cond3_lhs = r.a1 + k * std::cosh(1.0);
  v.cond4_lhs = (rho / (rho + l2) + r.a4) / r.a3 - r.a2 / v.cond2_lhs;
  v.assm2_rhs = std::min(l2, rho) / l2;
  v.a1 = r.a1;
  v.a2 = r.a2;
  v.a3 = r.a3;
  v.a4 = r.a4;

  const double eps = strict_margin;
  rep.lemma_signs = r.a1 < -eps && r.a2 > eps && r.a3 < -eps && r.a4 > eps;

  if (equal_volatilities(p)) {
    rep.case_b = true;
    rep.a5_le_1 = rep.cond2 = rep.cond3 = rep.cond4 = rep.assm2 = true;
    rep.all_ok = true;
    return rep;
  }

  rep.a5_le_1 = r.alpha5 <= 1.0;
  rep.cond2 = v.cond2_lhs < -eps;
  rep.cond3 = v.cond3_lhs >= 0.0;
  rep.cond4 = v.cond4_lhs < -eps;
  rep.assm2 = r.alpha5 <= v.assm2_rhs;
  rep.all_ok = rep.a5_le_1 && rep.cond2 && rep.cond3 && rep.cond4 && rep.assm2;
  return rep;
}

}  // namespace regext
