#include <benchmark/benchmark.h>

#include "stochsched/distributions.hpp"
#include "stochsched/evaluator.hpp"
#include "stochsched/frank_wolfe.hpp"
#include "stochsched/generator.hpp"
#include "stochsched/staffing_lp.hpp"

using namespace stochsched;

namespace {

const Instance& basic() {
  static const Instance inst = generate(preset("basic"));
  return inst;
}

void BM_TriShortfall(benchmark::State& state) {
  const TriangularDist d{2.0, 5.0, 11.0};
  double z = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(tri_shortfall(d, z));
    z = z > 12.0 ? 0.0 : z + 0.37;
  }
}
BENCHMARK(BM_TriShortfall);

void BM_FrankWolfe(benchmark::State& state) {
  const Schedule sched = earliest_schedule(basic());
  FwConfig cfg;
  cfg.iterations = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(fw_solve(basic(), sched, cfg).objective);
}
BENCHMARK(BM_FrankWolfe)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_StaffingLpMean(benchmark::State& state) {
  const Schedule sched = earliest_schedule(basic());
  const MeanDemand demand;
  for (auto _ : state) benchmark::DoNotOptimize(staffing_lp(basic(), sched, demand));
}
BENCHMARK(BM_StaffingLpMean)->Unit(benchmark::kMillisecond);

void BM_ExpectedCost(benchmark::State& state) {
  const Schedule sched = earliest_schedule(basic());
  const auto plan = fw_solve(basic(), sched, FwConfig{}).plan;
  for (auto _ : state) benchmark::DoNotOptimize(expected_external_cost(basic(), sched, plan));
}
BENCHMARK(BM_ExpectedCost)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
