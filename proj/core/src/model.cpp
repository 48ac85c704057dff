#include "regext/model.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "regext/error.hpp"

namespace regext {

namespace {

constexpr int kShapeSamples = 1001;
constexpr double kSecondDifferenceTol = 1e-9;

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    std::ostringstream os;
    os << name << " must be a finite positive number, got " << v;
    throw Error(ErrorKind::NonPositiveParameter, os.str());
  }
}

void check_cost_shape(const CostFunction& cost) {
  if (cost.value(0.0) != 0.0) {
    throw Error(ErrorKind::CostNotConvex, "cost must satisfy f(0) = 0 (" + cost.describe() + ")");
  }
  const double h = 1.0 / (kShapeSamples - 1);
  for (int k = 0; k < kShapeSamples; ++k) {
    const double y = k * h;
    const double s = cost.slope(y);
    if (!(s > 0.0) || !std::isfinite(s)) {
      std::ostringstream os;
      os << "f'(" << y << ") = " << s << " is not positive (" << cost.describe() << ")";
      throw Error(ErrorKind::CostNotConvex, os.str());
    }
    double curv = 0.0;
    double tol = 0.0;
    if (cost.has_closed_curvature()) {
      curv = cost.curvature(y);
    } else {
      // Interior second differences only; endpoints are covered by neighbours.
      if (k == 0 || k == kShapeSamples - 1) continue;
      curv = cost.value(y + h) - 2.0 * cost.value(y) + cost.value(y - h);
      tol = -kSecondDifferenceTol;
    }
    if (!(curv > tol) || !std::isfinite(curv)) {
      std::ostringstream os;
      os << "cost is not strictly convex near y = " << y << " (" << cost.describe() << ")";
      throw Error(ErrorKind::CostNotConvex, os.str());
    }
  }
}

}  // namespace

Regime regime_from_int(int i) {
  if (i == 1) return Regime::first;
  if (i == 2) return Regime::second;
  throw Error(ErrorKind::OutOfRange, "regime must be 1 or 2, got " + std::to_string(i));
}

CostFunction CostFunction::exponential(double gamma) { return {Kind::exponential, gamma, 0.0}; }

CostFunction CostFunction::quadratic(double alpha, double beta) {
  return {Kind::quadratic, alpha, beta};
}

CostFunction CostFunction::custom(Fn f, Fn slope, std::optional<Fn> curvature) {
  CostFunction cf(Kind::custom, 0.0, 0.0);
  cf.f_ = std::move(f);
  cf.slope_ = std::move(slope);
  cf.curvature_ = std::move(curvature);
  return cf;
}

bool CostFunction::has_closed_curvature() const noexcept {
  return kind_ != Kind::custom || curvature_.has_value();
}

double CostFunction::value(double y) const {
  switch (kind_) {
    case Kind::exponential: return p0_ * std::expm1(y);
    case Kind::quadratic: return (p0_ * y + p1_) * y;
    case Kind::custom: return f_(y);
  }
  return 0.0;
}

double CostFunction::slope(double y) const {
  switch (kind_) {
    case Kind::exponential: return p0_ * std::exp(y);
    case Kind::quadratic: return 2.0 * p0_ * y + p1_;
    case Kind::custom: return slope_(y);
  }
  return 0.0;
}

double CostFunction::curvature(double y) const {
  switch (kind_) {
    case Kind::exponential: return p0_ * std::exp(y);
    case Kind::quadratic: return 2.0 * p0_;
    case Kind::custom:
      if (curvature_) return (*curvature_)(y);
      {
        const double h = 1e-4;
        return (value(y + h) - 2.0 * value(y) + value(y - h)) / (h * h);
      }
  }
  return 0.0;
}

double CostFunction::slope_inverse(double s) const {
  constexpr double inf = std::numeric_limits<double>::infinity();
  const double s0 = slope(0.0);
  const double s1 = slope(1.0);
  if (s <= s0) return s == s0 ? 0.0 : -inf;
  if (s >= s1) return s == s1 ? 1.0 : inf;
  switch (kind_) {
    case Kind::exponential: return std::log(s / p0_);
    case Kind::quadratic: return (s - p1_) / (2.0 * p0_);
    case Kind::custom: {
      double lo = 0.0;
      double hi = 1.0;
      for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
        const double mid = 0.5 * (lo + hi);
        (slope(mid) < s ? lo : hi) = mid;
      }
      return 0.5 * (lo + hi);
    }
  }
  return 0.0;
}

std::string CostFunction::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case Kind::exponential: os << "exp(gamma=" << p0_ << ")"; break;
    case Kind::quadratic: os << "quad(alpha=" << p0_ << ", beta=" << p1_ << ")"; break;
    case Kind::custom: os << "custom"; break;
  }
  return os.str();
}

ModelParams ModelParams::swapped_regimes() const {
  ParamBundle b = b_;
  std::swap(b.sigma1, b.sigma2);
  std::swap(b.lambda1, b.lambda2);
  return ModelParams(std::move(b));
}

ModelParams validate(const ParamBundle& raw) {
  require_positive(raw.rho, "rho");
  require_positive(raw.sigma1, "sigma1");
  require_positive(raw.sigma2, "sigma2");
  require_positive(raw.lambda1, "lambda1");
  require_positive(raw.lambda2, "lambda2");
  if (!std::isfinite(raw.c)) {
    throw Error(ErrorKind::NonPositiveParameter, "c must be finite");
  }
  check_cost_shape(raw.cost);
  return ModelParams(raw);
}

double phi(const ModelParams& p, Regime i, double alpha) {
  const double s = p.sigma(i);
  return -0.5 * s * s * alpha * alpha + p.rho() + p.lambda(i);
}

double chat(const ModelParams& p, double y) {
  if (!(y >= 0.0 && y <= 1.0)) {
    throw Error(ErrorKind::OutOfRange, "reserve level must lie in [0, 1], got " + std::to_string(y));
  }
  return p.c() - p.cost().slope(y) / p.rho();
}

double chat_bound(const ModelParams& p) {
  return std::abs(p.c()) + p.cost().slope(1.0) / p.rho();
}

bool equal_volatilities(const ModelParams& p) {
  const double s1 = p.sigma(Regime::first);
  const double s2 = p.sigma(Regime::second);
  return std::abs(s1 - s2) <= 1e-14 * std::max(s1, s2);
}

}  // namespace regext
