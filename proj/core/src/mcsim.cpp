#include "regext/mcsim.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

#include "regext/error.hpp"
#include "regext/parallel.hpp"

namespace regext {

namespace {

constexpr std::uint64_t kChainStream = 1;
constexpr std::uint64_t kNormalStream = 2;

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double pairwise_sum(const double* v, std::size_t n) {
  if (n <= 8) {
    double s = 0.0;
    for (std::size_t k = 0; k < n; ++k) s += v[k];
    return s;
  }
  const std::size_t h = n / 2;
  return pairwise_sum(v, h) + pairwise_sum(v + h, n - h);
}

struct UnitStats {
  double mean = 0.0;
  double se = 0.0;
};

UnitStats unit_stats(const std::vector<double>& units) {
  UnitStats s;
  const std::size_t n = units.size();
  if (n == 0) return s;
  s.mean = pairwise_sum(units.data(), n) / static_cast<double>(n);
  if (n < 2) return s;
  std::vector<double> sq(n);
  for (std::size_t k = 0; k < n; ++k) sq[k] = (units[k] - s.mean) * (units[k] - s.mean);
  const double var = pairwise_sum(sq.data(), n) / static_cast<double>(n - 1);
  s.se = std::sqrt(var / static_cast<double>(n));
  return s;
}

std::vector<double> to_units(const std::vector<double>& paths, bool antithetic) {
  if (!antithetic) return paths;
  std::vector<double> units(paths.size() / 2);
  for (std::size_t k = 0; k < units.size(); ++k) units[k] = 0.5 * (paths[2 * k] + paths[2 * k + 1]);
  return units;
}

// Streams and sign of one path.
struct PathStreams {
  std::mt19937_64 chain;
  std::mt19937_64 normal;
  double sign = 1.0;
};

PathStreams streams_for(const SimConfig& cfg, std::int64_t path_index) {
  const std::uint64_t unit =
      static_cast<std::uint64_t>(cfg.antithetic ? path_index / 2 : path_index);
  PathStreams s{std::mt19937_64(derive_seed(cfg.base_seed, unit, kChainStream)),
                std::mt19937_64(derive_seed(cfg.base_seed, unit, kNormalStream)), 1.0};
  if (cfg.antithetic && (path_index % 2) != 0) s.sign = -1.0;
  return s;
}

/// Walks the exact price path over the grid {k h} merged with the chain's jump
/// instants. on_event(t, regime, X, grid_index, is_jump) returns false to stop early;
/// grid_index is -1 at jump instants. The final grid point is T itself.
template <class OnEvent>
void walk_path(const ModelParams& p, double x0, Regime i0, double T, double h, PathStreams& st,
               OnEvent&& on_event) {
  const std::vector<ChainJump> jumps = simulate_chain(p, i0, T, st.chain);
  std::normal_distribution<double> normal(0.0, 1.0);
  const std::int64_t n = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(T / h - 1e-9)));
  const double full_scale[2] = {p.sigma(Regime::first) * std::sqrt(h),
                                p.sigma(Regime::second) * std::sqrt(h)};

  Regime regime = i0;
  double X = x0;
  double t_prev = 0.0;
  std::size_t j = 0;
  std::int64_t k = 1;
  bool on_grid = true;  // previous event was a grid point, so a plain step is exactly h long
  while (k <= n) {
    const double tk = k == n ? T : static_cast<double>(k) * h;
    const bool jump_first = j < jumps.size() && jumps[j].time < tk;
    const double t = jump_first ? jumps[j].time : tk;
    const double tau = t - t_prev;
    if (tau > 0.0) {
      const double z = normal(st.normal);
      const double scale = (!jump_first && on_grid && k < n) ? full_scale[index_of(regime)]
                                                             : p.sigma(regime) * std::sqrt(tau);
      X += st.sign * scale * z;
    }
    t_prev = t;
    on_grid = !jump_first;
    if (jump_first) {
      regime = jumps[j].state;
      ++j;
      if (!on_event(t, regime, X, std::int64_t{-1}, true)) return;
    } else {
      if (!on_event(t, regime, X, k, false)) return;
      ++k;
    }
  }
}

/// Reserve bookkeeping of one policy observing the path. `stride` selects which
/// grid points it sees (jump instants and T are always seen). Running cost is
/// accrued lazily: the reserve is constant between extractions, so the discounted
/// integral telescopes.
class Monitor {
 public:
  Monitor(const ControlSolution& cs, const Policy& policy, double y0, int stride,
          std::vector<TraceRow>* trace)
      : cs_(cs), p_(cs.params()), policy_(policy), stride_(stride), trace_(trace), Y_(y0) {
    refresh_thresholds();
  }

  bool done() const noexcept { return Y_ <= 0.0; }
  double payoff() const noexcept { return payoff_; }

  void observe(double t, Regime regime, double X, std::int64_t grid_index, bool is_jump, bool last) {
    if (!is_jump && !last && grid_index % stride_ != 0) return;
    double dnu = 0.0;
    if (Y_ > 0.0) dnu = extraction(t, regime, X);
    const bool flush = dnu > 0.0 || last || trace_ != nullptr;
    double increment = 0.0;
    if (flush) {
      increment -= running_cost(t);
      if (dnu > 0.0) {
        increment += std::exp(-p_.rho() * t) * (X - p_.c()) * dnu;
        Y_ = std::max(0.0, Y_ - dnu);
        if (Y_ < 1e-15) Y_ = 0.0;
        refresh_thresholds();
      }
      payoff_ += increment;
    }
    if (trace_) trace_->push_back(TraceRow{t, regime, X, Y_, dnu, increment});
  }

 private:
  double running_cost(double t) {
    const double rho = p_.rho();
    const double fy = p_.cost().value(Y_);
    double cost = 0.0;
    if (fy != 0.0 && t > cost_from_) {
      cost = fy * (std::exp(-rho * cost_from_) - std::exp(-rho * t)) / rho;
    }
    cost_from_ = t;
    return cost;
  }

  double extraction(double t, Regime regime, double X) {
    switch (policy_.kind) {
      case Policy::Kind::never_extract:
        return 0.0;
      case Policy::Kind::extract_all_at_start:
        return t == 0.0 ? Y_ : 0.0;
      case Policy::Kind::reflect_optimal: {
        // Y > b*(X) exactly when X lies beyond x*(Y).
        if (!(X > threshold_[index_of(regime)])) return 0.0;
        return std::max(0.0, Y_ - cs_.b_star(regime, X));
      }
      case Policy::Kind::reflect_at_custom_boundary: {
        const double b = std::clamp(policy_.boundary(regime, X), 0.0, 1.0);
        return std::max(0.0, Y_ - b);
      }
    }
    return 0.0;
  }

  void refresh_thresholds() {
    if (policy_.kind != Policy::Kind::reflect_optimal || Y_ <= 0.0) return;
    for (Regime i : {Regime::first, Regime::second}) threshold_[index_of(i)] = cs_.x_star(i, Y_);
  }

  const ControlSolution& cs_;
  const ModelParams& p_;
  const Policy& policy_;
  int stride_;
  std::vector<TraceRow>* trace_;
  double Y_;
  double payoff_ = 0.0;
  double cost_from_ = 0.0;
  double threshold_[2] = {0.0, 0.0};
};

void check_state(double y0) {
  if (!(y0 >= 0.0 && y0 <= 1.0)) {
    throw Error(ErrorKind::OutOfRange, "initial reserve must lie in [0, 1], got " + std::to_string(y0));
  }
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t base_seed, std::uint64_t unit, std::uint64_t stream) {
  std::uint64_t s = base_seed;
  std::uint64_t a = splitmix64(s);
  s = a ^ (unit * 0xD1B54A32D192ED03ULL);
  std::uint64_t b = splitmix64(s);
  s = b ^ (stream * 0x8CB92BA72F3D8DD7ULL);
  return splitmix64(s);
}

void validate(const SimConfig& cfg, const ModelParams& p) {
  const double T = cfg.resolved_horizon(p);
  if (!(cfg.dt > 0.0) || !std::isfinite(cfg.dt)) {
    throw Error(ErrorKind::InvalidConfig, "dt must be positive");
  }
  if (cfg.horizon < 0.0 || !(T > 0.0) || !std::isfinite(T)) throw Error(ErrorKind::InvalidConfig, "horizon must be positive");
  if (cfg.dt > T) throw Error(ErrorKind::InvalidConfig, "dt must not exceed the horizon");
  if (cfg.n_paths < 1) throw Error(ErrorKind::InvalidConfig, "need at least one path");
  if (cfg.antithetic && cfg.n_paths % 2 != 0) {
    throw Error(ErrorKind::InvalidConfig, "antithetic pairing needs an even number of paths");
  }
}

Policy Policy::reflect_optimal() { return Policy{Kind::reflect_optimal, nullptr, "reflect_optimal"}; }
Policy Policy::never_extract() { return Policy{Kind::never_extract, nullptr, "never_extract"}; }
Policy Policy::extract_all_at_start() {
  return Policy{Kind::extract_all_at_start, nullptr, "extract_all_at_start"};
}
Policy Policy::reflect_at(Boundary b, std::string label) {
  return Policy{Kind::reflect_at_custom_boundary, std::move(b), std::move(label)};
}

Policy policy_from_string(const std::string& name) {
  if (name == "reflect_optimal") return Policy::reflect_optimal();
  if (name == "never_extract") return Policy::never_extract();
  if (name == "extract_all_at_start") return Policy::extract_all_at_start();
  throw Error(ErrorKind::InvalidConfig, "unknown policy '" + name + "'");
}

std::vector<ChainJump> simulate_chain(const ModelParams& p, Regime i0, double T, std::mt19937_64& rng) {
  std::vector<ChainJump> jumps;
  Regime state = i0;
  double t = 0.0;
  for (;;) {
    std::exponential_distribution<double> hold(p.lambda(state));
    t += hold(rng);
    if (!(t < T)) break;
    state = other(state);
    jumps.push_back(ChainJump{t, state});
  }
  return jumps;
}

void write_trace_csv(std::ostream& os, const std::vector<TraceRow>& rows) {
  os << "t,regime,X,Y,dnu,discounted_increment\n";
  std::ostringstream line;
  line.precision(17);
  for (const TraceRow& r : rows) {
    line.str("");
    line << r.t << ',' << number_of(r.regime) << ',' << r.X << ',' << r.Y << ',' << r.dnu << ','
         << r.discounted_increment << '\n';
    os << line.str();
  }
}

double simulate_path(const ControlSolution& cs, double x0, double y0, Regime i0, const Policy& policy,
                     const SimConfig& cfg, std::int64_t path_index, std::vector<TraceRow>* trace) {
  const ModelParams& p = cs.params();
  check_state(y0);
  const double T = cfg.resolved_horizon(p);
  if (!trace) {
    if (y0 == 0.0) return 0.0;
    if (policy.kind == Policy::Kind::never_extract) {
      return -p.cost().value(y0) * (-std::expm1(-p.rho() * T)) / p.rho();
    }
    if (policy.kind == Policy::Kind::extract_all_at_start) return (x0 - p.c()) * y0;
  }

  PathStreams st = streams_for(cfg, path_index);
  Monitor m(cs, policy, y0, 1, trace);
  m.observe(0.0, i0, x0, 0, false, false);
  if (m.done() && !trace) return m.payoff();
  const std::int64_t n = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(T / cfg.dt - 1e-9)));
  walk_path(p, x0, i0, T, cfg.dt, st,
            [&](double t, Regime r, double X, std::int64_t k, bool jump) {
              m.observe(t, r, X, k, jump, k == n);
              return !m.done();
            });
  return m.payoff();
}

double tail_bound(const ModelParams& p, const SimConfig& cfg, double x0) {
  const double T = cfg.resolved_horizon(p);
  const double smax = std::max(p.sigma(Regime::first), p.sigma(Regime::second));
  return std::exp(-p.rho() * T) *
         (p.cost().value(1.0) / p.rho() + std::abs(x0 - p.c()) + smax * std::sqrt(T));
}

SimOutcome estimate_value(const ControlSolution& cs, double x0, double y0, Regime i0,
                          const Policy& policy, const SimConfig& cfg) {
  validate(cfg, cs.params());
  check_state(y0);
  std::vector<double> paths(static_cast<std::size_t>(cfg.n_paths));
  parallel_for(paths.size(), resolve_threads(cfg.threads), [&](std::size_t k) {
    paths[k] = simulate_path(cs, x0, y0, i0, policy, cfg, static_cast<std::int64_t>(k));
  });
  const std::vector<double> units = to_units(paths, cfg.antithetic);
  const UnitStats st = unit_stats(units);
  SimOutcome out;
  out.mean = st.mean;
  out.std_error = st.se;
  out.n_paths = cfg.n_paths;
  out.n_units = static_cast<std::int64_t>(units.size());
  out.tail_bound = tail_bound(cs.params(), cfg, x0);
  out.policy_id = policy.label;
  return out;
}

BiasEstimate estimate_bias(const ControlSolution& cs, double x0, double y0, Regime i0,
                           const Policy& policy, const SimConfig& cfg) {
  const ModelParams& p = cs.params();
  validate(cfg, p);
  check_state(y0);
  const double T = cfg.resolved_horizon(p);
  const double h = 0.5 * cfg.dt;
  const std::int64_t n = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(T / h - 1e-9)));

  std::vector<double> coarse(static_cast<std::size_t>(cfg.n_paths));
  std::vector<double> fine(coarse.size());
  parallel_for(coarse.size(), resolve_threads(cfg.threads), [&](std::size_t k) {
    PathStreams st = streams_for(cfg, static_cast<std::int64_t>(k));
    Monitor mc(cs, policy, y0, 2, nullptr);
    Monitor mf(cs, policy, y0, 1, nullptr);
    mc.observe(0.0, i0, x0, 0, false, false);
    mf.observe(0.0, i0, x0, 0, false, false);
    if (!(mc.done() && mf.done())) {
      walk_path(p, x0, i0, T, h, st, [&](double t, Regime r, double X, std::int64_t g, bool jump) {
        mc.observe(t, r, X, g, jump, g == n);
        mf.observe(t, r, X, g, jump, g == n);
        return !(mc.done() && mf.done());
      });
    }
    coarse[k] = mc.payoff();
    fine[k] = mf.payoff();
  });

  std::vector<double> diff(coarse.size());
  for (std::size_t k = 0; k < diff.size(); ++k) diff[k] = coarse[k] - fine[k];
  const UnitStats sc = unit_stats(to_units(coarse, cfg.antithetic));
  const UnitStats sf = unit_stats(to_units(fine, cfg.antithetic));
  const UnitStats sd = unit_stats(to_units(diff, cfg.antithetic));

  BiasEstimate b;
  b.mean_dt = sc.mean;
  b.mean_half = sf.mean;
  b.diff = sd.mean;
  b.diff_se = sd.se;
  b.c_d = std::abs(sd.mean) / (std::sqrt(cfg.dt) - std::sqrt(h));
  b.tail_bound = tail_bound(p, cfg, x0);
  b.budget = b.tail_bound + b.c_d * std::sqrt(cfg.dt);
  b.n_paths = cfg.n_paths;
  return b;
}

std::int64_t skorokhod_violation(const ControlSolution& cs, const std::vector<TraceRow>& trace,
                                 double tol) {
  for (std::size_t k = 0; k < trace.size(); ++k) {
    const TraceRow& r = trace[k];
    const double b = cs.b_star(r.regime, r.X);
    const double pre = r.Y + r.dnu;
    const bool admissible = r.Y >= 0.0 && r.Y <= 1.0 && r.dnu >= 0.0;
    const bool below = r.Y <= b + tol;
    const bool minimal = r.dnu == 0.0 || (pre > b && std::abs(r.Y - b) <= tol);
    if (!(admissible && below && minimal)) return static_cast<std::int64_t>(k);
  }
  return -1;
}

void skorokhod_check(const ControlSolution& cs, const std::vector<TraceRow>& trace, double tol) {
  const std::int64_t k = skorokhod_violation(cs, trace, tol);
  if (k >= 0) {
    const TraceRow& r = trace[static_cast<std::size_t>(k)];
    std::ostringstream os;
    os.precision(12);
    os << "step " << k << " (t = " << r.t << ", regime " << number_of(r.regime) << ", X = " << r.X
       << "): Y = " << r.Y << ", dnu = " << r.dnu << ", boundary " << cs.b_star(r.regime, r.X);
    throw Error(ErrorKind::SRPViolated, os.str());
  }
}

TerminalSample simulate_terminal(const ModelParams& p, double x0, Regime i0, double T,
                                 const SimConfig& cfg, std::int64_t path_index) {
  PathStreams st = streams_for(cfg, path_index);
  TerminalSample out;
  double t_prev = 0.0;
  Regime prev = i0;
  walk_path(p, x0, i0, T, cfg.dt, st, [&](double t, Regime r, double X, std::int64_t, bool) {
    const double s = p.sigma(prev);
    out.integrated_variance += s * s * (t - t_prev);
    t_prev = t;
    prev = r;
    out.x_T = X;
    return true;
  });
  return out;
}

}  // namespace regext
