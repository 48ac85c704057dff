#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <string>

#include "regext/error.hpp"

namespace regext {

template <std::size_t N>
using Vec = std::array<double, N>;

namespace detail {

template <std::size_t N, class F>
Vec<N> simpson_step(F& f, double a, double b, const Vec<N>& fa, const Vec<N>& fm,
                    const Vec<N>& fb, const Vec<N>& whole, double tol, int depth, int max_depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const Vec<N> flm = f(lm);
  const Vec<N> frm = f(rm);
  const double hl = (m - a) / 6.0;
  const double hr = (b - m) / 6.0;
  Vec<N> left{}, right{};
  bool ok = true;
  for (std::size_t k = 0; k < N; ++k) {
    left[k] = hl * (fa[k] + 4.0 * flm[k] + fm[k]);
    right[k] = hr * (fm[k] + 4.0 * frm[k] + fb[k]);
    if (!(std::abs(left[k] + right[k] - whole[k]) <= 15.0 * tol)) ok = false;
  }
  Vec<N> out{};
  if (ok && depth >= 2) {
    for (std::size_t k = 0; k < N; ++k) {
      const double s2 = left[k] + right[k];
      out[k] = s2 + (s2 - whole[k]) / 15.0;
    }
    return out;
  }
  if (depth >= max_depth) {
    throw Error(ErrorKind::QuadratureNotConverged,
                "adaptive Simpson exceeded depth " + std::to_string(max_depth) + " on [" +
                    std::to_string(a) + ", " + std::to_string(b) + "]");
  }
  const Vec<N> l = simpson_step<N>(f, a, m, fa, flm, fm, left, 0.5 * tol, depth + 1, max_depth);
  const Vec<N> r = simpson_step<N>(f, m, b, fm, frm, fb, right, 0.5 * tol, depth + 1, max_depth);
  for (std::size_t k = 0; k < N; ++k) out[k] = l[k] + r[k];
  return out;
}

}  // namespace detail

// Adaptive Simpson rule for a vector of integrands sharing one refinement.
// A panel is accepted once every component satisfies |S2 - S1| <= 15 tol; the
// tolerance is halved on each split. Throws QuadratureNotConverged beyond max_depth.
template <std::size_t N, class F>
Vec<N> integrate(F&& f, double a, double b, double tol, int max_depth = 40) {
  Vec<N> zero{};
  if (!(b > a)) return zero;
  const Vec<N> fa = f(a);
  const Vec<N> fb = f(b);
  const double m = 0.5 * (a + b);
  const Vec<N> fm = f(m);
  Vec<N> whole{};
  for (std::size_t k = 0; k < N; ++k) whole[k] = (b - a) / 6.0 * (fa[k] + 4.0 * fm[k] + fb[k]);
  return detail::simpson_step<N>(f, a, b, fa, fm, fb, whole, tol, 0, max_depth);
}

}  // namespace regext
