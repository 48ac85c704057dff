#pragma once

#include <functional>
#include <optional>
#include <string>

namespace regext {

// State of the two-state Markov chain modulating price volatility.
enum class Regime : int { first = 1, second = 2 };

constexpr Regime other(Regime r) noexcept {
  return r == Regime::first ? Regime::second : Regime::first;
}
constexpr int index_of(Regime r) noexcept { return static_cast<int>(r) - 1; }
constexpr int number_of(Regime r) noexcept { return static_cast<int>(r); }

// Throws OutOfRange for anything other than 1 or 2.
Regime regime_from_int(int i);

/// Maintenance cost f of the reserve level, with f(0) = 0, f' > 0 and f'' > 0.
///
/// Two closed-form families are built in:
///   exponential  f(y) = gamma (e^y - 1)
///   quadratic    f(y) = alpha y^2 + beta y
/// Any other (f, f') pair can be supplied with custom(); f'' is then optional
/// and is approximated by second differences when absent.
class CostFunction {
 public:
  enum class Kind { exponential, quadratic, custom };

  using Fn = std::function<double(double)>;

  static CostFunction exponential(double gamma);
  static CostFunction quadratic(double alpha, double beta);
  static CostFunction custom(Fn f, Fn slope, std::optional<Fn> curvature = std::nullopt);

  Kind kind() const noexcept { return kind_; }
  double gamma() const noexcept { return p0_; }
  double alpha() const noexcept { return p0_; }
  double beta() const noexcept { return p1_; }
  bool has_closed_curvature() const noexcept;

  double value(double y) const;      // f(y)
  double slope(double y) const;      // f'(y)
  double curvature(double y) const;  // f''(y), second differences for custom without f''

  // Solves f'(y) = s for y in [0, 1]; returns -inf / +inf when s lies below f'(0) /
  // above f'(1) so that callers can clamp. Closed form for the built-in families,
  // bisection on the monotone slope otherwise.
  double slope_inverse(double s) const;

  std::string describe() const;

 private:
  CostFunction(Kind kind, double p0, double p1) : kind_(kind), p0_(p0), p1_(p1) {}

  Kind kind_;
  double p0_ = 0.0;
  double p1_ = 0.0;
  Fn f_;
  Fn slope_;
  std::optional<Fn> curvature_;
};

// Unvalidated parameter bundle as read from a config file or built by hand.
struct ParamBundle {
  double rho = 0.0;
  double sigma1 = 0.0;
  double sigma2 = 0.0;
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double c = 0.0;
  CostFunction cost = CostFunction::exponential(1.0);
};

// Validated market and cost parameters. Only validate() produces one.
class ModelParams {
 public:
  double rho() const noexcept { return b_.rho; }
  double sigma(Regime r) const noexcept { return r == Regime::first ? b_.sigma1 : b_.sigma2; }
  double lambda(Regime r) const noexcept { return r == Regime::first ? b_.lambda1 : b_.lambda2; }
  double c() const noexcept { return b_.c; }
  const CostFunction& cost() const noexcept { return b_.cost; }
  const ParamBundle& bundle() const noexcept { return b_; }

  // Same market with the regime labels exchanged.
  ModelParams swapped_regimes() const;

 private:
  friend ModelParams validate(const ParamBundle& raw);
  explicit ModelParams(ParamBundle b) : b_(std::move(b)) {}

  ParamBundle b_;
};

/// Checks positivity of rho, sigma_i, lambda_i, finiteness of c, and the shape of
/// the cost (f(0) = 0, f' > 0, f'' > 0 on 1001 points of [0, 1]).
/// Throws NonPositiveParameter naming the field, or CostNotConvex. Never clamps.
ModelParams validate(const ParamBundle& raw);

// Phi_i(alpha) = -sigma_i^2 alpha^2 / 2 + rho + lambda_i.
double phi(const ModelParams& p, Regime i, double alpha);

// Effective selling cost c - f'(y)/rho. Throws OutOfRange unless 0 <= y <= 1.
double chat(const ModelParams& p, double y);

// Largest |chat(y)| can be on [0, 1]: c + f'(1)/rho (taken in absolute value).
double chat_bound(const ModelParams& p);

// True when sigma1 and sigma2 agree to 1e-14 relative (the single-boundary case).
bool equal_volatilities(const ModelParams& p);

}  // namespace regext
