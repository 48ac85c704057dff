#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <random>
#include <string>
#include <vector>

#include "regext/control.hpp"
#include "regext/model.hpp"

namespace regext {

struct SimConfig {
  double dt = 1e-3;
  double horizon = 0.0;  // 0 selects 10 / rho
  std::int64_t n_paths = 100000;
  std::uint64_t base_seed = 20240601;
  bool antithetic = true;
  unsigned threads = 0;  // 0: REGIME_EXTRACT_THREADS or hardware concurrency

  double resolved_horizon(const ModelParams& p) const { return horizon > 0.0 ? horizon : 10.0 / p.rho(); }
};

// Throws InvalidConfig for a non-positive step or horizon, dt > horizon, no paths,
// or an odd path count with antithetic pairing.
void validate(const SimConfig& cfg, const ModelParams& p);

/// An extraction rule acting as a reflecting barrier on the reserve level, plus the
/// two trivial baselines.
struct Policy {
  enum class Kind { reflect_optimal, never_extract, extract_all_at_start, reflect_at_custom_boundary };
  using Boundary = std::function<double(Regime, double x)>;

  Kind kind = Kind::reflect_optimal;
  Boundary boundary;  // only for reflect_at_custom_boundary
  std::string label;

  static Policy reflect_optimal();
  static Policy never_extract();
  static Policy extract_all_at_start();
  static Policy reflect_at(Boundary b, std::string label);
};

// Parses "reflect_optimal", "never_extract", "extract_all_at_start"; InvalidConfig otherwise.
Policy policy_from_string(const std::string& name);

struct ChainJump {
  double time = 0.0;
  Regime state = Regime::first;  // state entered at `time`
};

// Exact event-time simulation of the two-state chain on (0, T].
std::vector<ChainJump> simulate_chain(const ModelParams& p, Regime i0, double T, std::mt19937_64& rng);

// Deterministic per-(seed, unit, stream) generator seed via splitmix64.
std::uint64_t derive_seed(std::uint64_t base_seed, std::uint64_t unit, std::uint64_t stream);

struct TraceRow {
  double t = 0.0;
  Regime regime = Regime::first;
  double X = 0.0;
  double Y = 0.0;  // after the policy has acted
  double dnu = 0.0;
  double discounted_increment = 0.0;  // e^{-rho t}(X - c) dnu minus running cost since the last row
};

void write_trace_csv(std::ostream& os, const std::vector<TraceRow>& rows);

/// One path of the discounted net cash flow. Path p belongs to antithetic pair p/2
/// (sign flips with the parity of p) when antithetic is on, to its own unit
/// otherwise. The chain and the Gaussian increments come from separate streams.
double simulate_path(const ControlSolution& cs, double x0, double y0, Regime i0, const Policy& policy,
                     const SimConfig& cfg, std::int64_t path_index,
                     std::vector<TraceRow>* trace = nullptr);

struct SimOutcome {
  double mean = 0.0;
  double std_error = 0.0;
  std::int64_t n_paths = 0;
  std::int64_t n_units = 0;  // independent samples behind std_error (pairs when antithetic)
  double tail_bound = 0.0;
  std::string policy_id;
};

// Bound on the value lost by stopping the simulation at T.
double tail_bound(const ModelParams& p, const SimConfig& cfg, double x0);

SimOutcome estimate_value(const ControlSolution& cs, double x0, double y0, Regime i0,
                          const Policy& policy, const SimConfig& cfg);

/// Discretization bias of the monitored reflection, estimated by running each path
/// on a grid of step dt/2 while a second copy of the policy observes only every
/// other grid point (plus the regime jump instants). Both copies see one and the
/// same exact price path, so the difference has small variance.
struct BiasEstimate {
  double mean_dt = 0.0;
  double mean_half = 0.0;
  double diff = 0.0;  // mean_dt - mean_half
  double diff_se = 0.0;
  double c_d = 0.0;  // |diff| / (sqrt(dt) - sqrt(dt / 2))
  double tail_bound = 0.0;
  double budget = 0.0;  // tail_bound + c_d sqrt(dt)
  std::int64_t n_paths = 0;
};

BiasEstimate estimate_bias(const ControlSolution& cs, double x0, double y0, Regime i0,
                           const Policy& policy, const SimConfig& cfg);

// Reflection properties on a recorded trace: Y <= b after every step, extraction only
// when the pre-step level exceeded b, and then exactly down to b. Returns the index of
// the first offending row, or -1.
std::int64_t skorokhod_violation(const ControlSolution& cs, const std::vector<TraceRow>& trace,
                                 double tol = 1e-12);
// Throws SRPViolated naming the step.
void skorokhod_check(const ControlSolution& cs, const std::vector<TraceRow>& trace,
                     double tol = 1e-12);

struct TerminalSample {
  double x_T = 0.0;
  double integrated_variance = 0.0;  // integral of sigma^2 along the simulated chain
};

// Uncontrolled price at T for the martingale sanity check.
TerminalSample simulate_terminal(const ModelParams& p, double x0, Regime i0, double T,
                                 const SimConfig& cfg, std::int64_t path_index);

}  // namespace regext
