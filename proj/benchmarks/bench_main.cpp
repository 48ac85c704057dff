#include <benchmark/benchmark.h>

#include "regext/control.hpp"
#include "regext/mcsim.hpp"
#include "regext/roots.hpp"
#include "regext/stopping.hpp"

using namespace regext;

namespace {

ModelParams base() {
  return validate({1.0 / 3.0, 0.38, 1.9, 1.7, 0.44, 0.5, CostFunction::exponential(1.0 / 3.0)});
}

const ControlSolution& solution() {
  static const ControlSolution cs(solve_z(base()));
  return cs;
}

}  // namespace

static void BM_SolveCharacteristic(benchmark::State& state) {
  const auto p = base();
  for (auto _ : state) benchmark::DoNotOptimize(solve_characteristic(p));
}
BENCHMARK(BM_SolveCharacteristic);

static void BM_SolveZ(benchmark::State& state) {
  const auto p = base();
  for (auto _ : state) benchmark::DoNotOptimize(solve_z(p).z1());
}
BENCHMARK(BM_SolveZ);

// One value evaluation integrates v over the reserve level.
static void BM_UReport(benchmark::State& state) {
  const auto& cs = solution();
  double x = -1.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(cs.U_report(x, 0.7, Regime::second));
    x = x > 2.0 ? -1.0 : x + 0.01;
  }
}
BENCHMARK(BM_UReport);

static void BM_CheckHjb(benchmark::State& state) {
  const auto& cs = solution();
  HjbGrid grid;
  grid.x_points = static_cast<int>(state.range(0));
  grid.threads = 1;
  for (auto _ : state) benchmark::DoNotOptimize(check_hjb(cs, grid).max_abs_residual);
  state.SetItemsProcessed(state.iterations() * grid.x_points * grid.y_points * 2);
}
BENCHMARK(BM_CheckHjb)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond);

static void BM_SimulatePath(benchmark::State& state) {
  const auto& cs = solution();
  SimConfig cfg;
  cfg.dt = 1e-3;
  std::int64_t k = 0;
  for (auto _ : state) benchmark::DoNotOptimize(simulate_path(cs, 0.65, 0.5, Regime::second, Policy::reflect_optimal(), cfg, k++));
}
BENCHMARK(BM_SimulatePath)->Unit(benchmark::kMicrosecond);
BENCHMARK_MAIN();
