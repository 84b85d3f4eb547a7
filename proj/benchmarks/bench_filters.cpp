#include <benchmark/benchmark.h>

#include "pathkf/pathkf.hpp"

using namespace pathkf;

namespace {

const synth::SimulatedSeries& series() {
  static const auto s = synth::simulate_birth_death({});
  return s;
}

void BM_SplinePosterior(benchmark::State& state) {
  const models::Window w{{0, 10}, {8, 30}, 4, {24, 1.0}};
  for (auto _ : state) {
    benchmark::DoNotOptimize(models::fit_spline_posterior(w, models::ModelKind::ConstantRegulation,
                                                          models::FitPosition::Center));
  }
}
BENCHMARK(BM_SplinePosterior);

void BM_Pkf(benchmark::State& state) {
  const pkf::PkfOptions options{static_cast<std::size_t>(state.range(0)), false, 0.0};
  for (auto _ : state) {
    benchmark::DoNotOptimize(pkf::run_pkf(series().data, models::ModelKind::BirthDeath, options));
  }
}
BENCHMARK(BM_Pkf)->Arg(1)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_Ukf(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(baselines::run_ukf(series().data, models::ModelKind::BirthDeath, 10.0));
  }
}
BENCHMARK(BM_Ukf)->Unit(benchmark::kMillisecond);

void BM_Ipls(benchmark::State& state) {
  const auto iterations = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        baselines::run_ipls(series().data, models::ModelKind::BirthDeath, 10.0, iterations));
  }
}
BENCHMARK(BM_Ipls)->Arg(1)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_GenePanel(benchmark::State& state) {
  synth::GenePanelScenario p;
  p.n_genes = static_cast<std::size_t>(state.range(0));
  const auto panel = synth::simulate_gene_panel(p);
  for (auto _ : state) {
    for (const auto& s : panel) {
      benchmark::DoNotOptimize(pkf::run_pkf(s.data, models::ModelKind::ConstantRegulation));
    }
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_GenePanel)->Arg(25)->Arg(50)->Arg(100)->Complexity(benchmark::oN)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
