#include <cmath>

#include <benchmark/benchmark.h>

#include <varbvp/varbvp.hpp>

namespace {

using varbvp::Vec;

Vec scalar(double x) { return Vec::Constant(1, x); }

void BM_SolveHarmonic(benchmark::State& state) {
  const auto model = varbvp::make_builtin("harmonic");
  varbvp::SolverConfig cfg;
  cfg.N = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        varbvp::solve_bvp(model, scalar(0.0), scalar(1.0), M_PI / 2, cfg));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_SolveHarmonic)->RangeMultiplier(2)->Range(32, 256)->Unit(benchmark::kMillisecond)
    ->Complexity();

void BM_SolveHalfPlane(benchmark::State& state) {
  const auto model = varbvp::make_builtin("halfplane_metric");
  varbvp::SolverConfig cfg;
  cfg.N = static_cast<int>(state.range(0));
  Vec q1(2), q2(2);
  q1 << 0.0, 1.0;
  q2 << 0.0, std::exp(1.0);
  for (auto _ : state) benchmark::DoNotOptimize(varbvp::solve_bvp(model, q1, q2, 1.0, cfg));
}
BENCHMARK(BM_SolveHalfPlane)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_Jacobian(benchmark::State& state) {
  const auto model = varbvp::make_builtin("pendulum");
  const varbvp::Grid grid(static_cast<int>(state.range(0)));
  const varbvp::RegularizedProblem problem{scalar(0.2), scalar(0.8), 0.5};
  const auto V = varbvp::Curve::constant(grid, problem.z);
  for (auto _ : state) {
    benchmark::DoNotOptimize(varbvp::jacobian(model, problem, V, scalar(0.0)));
  }
}
BENCHMARK(BM_Jacobian)->RangeMultiplier(2)->Range(32, 256);

void BM_FlowStep(benchmark::State& state) {
  const auto model = varbvp::make_builtin("pendulum");
  const varbvp::SolverConfig cfg;
  const varbvp::PhasePoint start{scalar(1.0), scalar(0.0)};
  for (auto _ : state) benchmark::DoNotOptimize(varbvp::step(model, start, 0.1, cfg));
}
BENCHMARK(BM_FlowStep)->Unit(benchmark::kMillisecond);

void BM_ShootPendulum(benchmark::State& state) {
  const auto model = varbvp::make_builtin("pendulum");
  for (auto _ : state) {
    benchmark::DoNotOptimize(varbvp::shoot_bvp(model, scalar(0.0), scalar(0.5), 0.5));
  }
}
BENCHMARK(BM_ShootPendulum)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
