#pragma once

#include <cmath>
#include <random>

#include "regext/model.hpp"

namespace draws {

// Log-uniform market parameters in [lo, hi] each; cost and c are fixed.
inline regext::ModelParams market(std::mt19937_64& g, double lo = 0.01, double hi = 3.0) {
  std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
  double v[5];
  for (double& x : v) x = std::exp(u(g));
  return regext::validate({v[0], v[1], v[2], v[3], v[4], 0.5, regext::CostFunction::exponential(0.3)});
}

}  // namespace draws
