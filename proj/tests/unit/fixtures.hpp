#pragma once

#include "regext/model.hpp"

namespace fixtures {

inline regext::ModelParams reference() {
  return regext::validate({1.0 / 3.0, 0.38, 1.9, 1.7, 0.44, 0.5, regext::CostFunction::exponential(1.0 / 3.0)});
}

inline regext::ModelParams reference_swapped() {
  return regext::validate({1.0 / 3.0, 1.9, 0.38, 0.44, 1.7, 0.5, regext::CostFunction::exponential(1.0 / 3.0)});
}

// sigma = 1, rho = 0.5, c = 1, f(y) = y^2 + y: chat(y) = -1 - 4y and x*(y) = -4y.
inline regext::ModelParams equal_vol() {
  return regext::validate({0.5, 1.0, 1.0, 0.3, 0.6, 1.0, regext::CostFunction::quadratic(1.0, 1.0)});
}

// Midpoints of three parameter boxes known to satisfy the stopping conditions.
inline regext::ModelParams sample_box(int k) {
  using regext::CostFunction;
  switch (k) {
    case 1: return regext::validate({0.0315, 0.0245, 0.78, 0.016, 0.015, 0.5, CostFunction::exponential(0.01)});
    case 2: return regext::validate({0.026, 0.039, 0.645, 0.435, 0.043, 0.5, CostFunction::exponential(0.01)});
    default: return regext::validate({0.335, 0.28, 1.75, 1.6, 0.43, 0.5, CostFunction::exponential(1.0 / 3.0)});
  }
}

}  // namespace fixtures
