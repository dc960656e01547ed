#include <benchmark/benchmark.h>

#include <cmath>

#include "fdeflow/fdeflow.hpp"

namespace {

using namespace fdeflow;

SolverConfig config_for(double grid_step) {
  SolverConfig cfg;
  cfg.grid_step = grid_step;
  return cfg;
}

void BM_SemiflowLinearDelay(benchmark::State& state) {
  const double h = 1.0 / static_cast<double>(state.range(0));
  const Problem p = make_problem("linear_const_delay", h);
  const HistoryPtr phi = parse_history(p.default_history, 1);
  const SolverConfig cfg = config_for(h);
  for (auto _ : state) {
    SemiflowRun run = semiflow(p.f, phi, 4.0, cfg);
    benchmark::DoNotOptimize(run.reached_time);
  }
}
BENCHMARK(BM_SemiflowLinearDelay)->Arg(250)->Arg(500)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_SemiflowStateDependent(benchmark::State& state) {
  const Problem p = make_problem("state_dep_delay", 1e-3);
  const HistoryPtr phi = parse_history(p.default_history, 1);
  const SolverConfig cfg = config_for(1e-3);
  for (auto _ : state) {
    SemiflowRun run = semiflow(p.f, phi, p.default_horizon, cfg);
    benchmark::DoNotOptimize(run.reached_time);
  }
}
BENCHMARK(BM_SemiflowStateDependent)->Unit(benchmark::kMillisecond);

void BM_PlanStep(benchmark::State& state) {
  const Problem p = make_problem("quadratic", 1e-3);
  const HistoryPtr phi = make_constant_history(scalar_vec(2.0));
  const SolverConfig cfg = config_for(1e-3);
  for (auto _ : state) {
    StepPlan plan = plan_step(p.f, *phi, cfg, PlanContext{1.0, 0.0});
    benchmark::DoNotOptimize(plan.step);
  }
}
BENCHMARK(BM_PlanStep);

void BM_SolveVideCosh(benchmark::State& state) {
  const double h = 1.0 / static_cast<double>(state.range(0));
  const Problem p = make_problem("cosh", h);
  const SolverConfig cfg = config_for(h);
  for (auto _ : state) {
    ProcessRun pr = solve_vide(p.vide, 1.0, cfg);
    benchmark::DoNotOptimize(pr.clock_time());
  }
}
BENCHMARK(BM_SolveVideCosh)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_VolterraDirect(benchmark::State& state) {
  const Problem p = make_problem("sine", 1e-3);
  for (auto _ : state) {
    ForwardPath x = volterra_direct(p.vide, 1.0, 1e-3);
    benchmark::DoNotOptimize(x.sup_norm());
  }
}
BENCHMARK(BM_VolterraDirect)->Unit(benchmark::kMillisecond);

void BM_HistoryEvaluate(benchmark::State& state) {
  const HistoryFunction h = HistoryFunction::sample(
      [](double s) { return scalar_vec(std::sin(3 * s)); }, 4.0, 1e-3,
      [](double s) { return scalar_vec(3 * std::cos(3 * s)); });
  double s = -3.9;
  for (auto _ : state) {
    benchmark::DoNotOptimize(h.evaluate(s));
    s = s < -0.01 ? s + 0.0137 : -3.9;
  }
}
BENCHMARK(BM_HistoryEvaluate);

}  // namespace

BENCHMARK_MAIN();
