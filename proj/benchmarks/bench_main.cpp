#include <random>

#include <benchmark/benchmark.h>

#include <mptp/fusion.hpp>
#include <mptp/gammafn.hpp>
#include <mptp/metrics.hpp>
#include <mptp/regions.hpp>
#include <mptp/scenario.hpp>
#include <mptp/simkit.hpp>

namespace {

using namespace mptp;

Scenario reference(int samples = 1000) {
  ScenarioParams p;
  p.samples = samples;
  return make_scenario(p);
}

void BM_RegLowerGamma(benchmark::State& state) {
  const double a = static_cast<double>(state.range(0));
  double x = 0.9 * a;
  for (auto _ : state) {
    benchmark::DoNotOptimize(gammafn::reg_lower_gamma(a, x));
    x = x < 1.1 * a ? x + 1e-3 * a : 0.9 * a;
  }
}
BENCHMARK(BM_RegLowerGamma)->Arg(5)->Arg(1000)->Arg(5000);

void BM_InvRegLowerGamma(benchmark::State& state) {
  const double a = static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(gammafn::inv_reg_lower_gamma(a, 0.9));
}
BENCHMARK(BM_InvRegLowerGamma)->Arg(1000);

void BM_BuildRegions(benchmark::State& state) {
  const Scenario s = reference();
  const Strategy st = state.range(0) == 1 ? Strategy::I : Strategy::II;
  for (auto _ : state) benchmark::DoNotOptimize(build_regions(s, st));
}
BENCHMARK(BM_BuildRegions)->Arg(1)->Arg(2);

void BM_DecisionMatrix(benchmark::State& state) {
  const Scenario s = reference(static_cast<int>(state.range(0)));
  const DecisionRegions r = build_regions(s, Strategy::I);
  for (auto _ : state) benchmark::DoNotOptimize(decision_matrix(s, r));
}
BENCHMARK(BM_DecisionMatrix)->Arg(1000)->Arg(5000);

DecisionMatrix local_matrix() {
  const Scenario s = reference();
  return decision_matrix(s, build_regions(s, Strategy::I));
}

void BM_MajorityClosed(benchmark::State& state) {
  const DecisionMatrix local = local_matrix();
  const int users = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(fusion::majority_matrix_closed(local, users));
}
BENCHMARK(BM_MajorityClosed)->Arg(5)->Arg(10)->Arg(20);

void BM_MajorityEnumerated(benchmark::State& state) {
  const DecisionMatrix local = local_matrix();
  const int users = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(fusion::majority_matrix(local, users));
}
BENCHMARK(BM_MajorityEnumerated)->Arg(5)->Arg(10)->Arg(20);

void BM_OptimalMatrix(benchmark::State& state) {
  const Scenario s = reference();
  const DecisionMatrix local = local_matrix();
  const int users = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(fusion::optimal_matrix(s, local, users));
}
BENCHMARK(BM_OptimalMatrix)->Arg(5)->Arg(10);

void BM_EmpiricalMatrix(benchmark::State& state) {
  const Scenario s = reference();
  const DecisionRegions r = build_regions(s, Strategy::I);
  const auto mode = state.range(0) == 0 ? sim::SamplingMode::DirectGamma
                                        : sim::SamplingMode::PerSample;
  const sim::TrialPlan plan{10000, 0x5EED, mode};
  for (auto _ : state) benchmark::DoNotOptimize(sim::empirical_counts(plan, s, r, 1));
  state.SetItemsProcessed(state.iterations() * plan.trials_per_hypothesis * s.num_levels());
}
BENCHMARK(BM_EmpiricalMatrix)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
