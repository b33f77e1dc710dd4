#include <benchmark/benchmark.h>

#include <random>

#include "qmupl/gauss1.hpp"
#include "qmupl/gauss2.hpp"
#include "qmupl/grid.hpp"
#include "qmupl/moments.hpp"

using namespace qmupl;

static void BM_WidthClosedForm(benchmark::State& state) {
  const Model m;
  double t = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(a_exact(t, complex(0.3, 0.7), m));
    t += 1e-3;
  }
}
BENCHMARK(BM_WidthClosedForm);

static void BM_GridStep(benchmark::State& state) {
  const Model m;
  const auto n = static_cast<std::size_t>(state.range(0));
  const GridPropagator prop(n, 80.0, m, 1e-3);
  WaveGrid g = double_gaussian_wave(n, 80.0, DoubleGaussianState::symmetric(m.a_inf(), 6.0));
  std::mt19937_64 rng(1);
  std::normal_distribution<double> normal(0.0, std::sqrt(1e-3));
  for (auto _ : state) {
    prop.kinetic(g, 0.5);
    prop.collapse_nonlinear(g, normal(rng));
    prop.kinetic(g, 0.5);
    normalize(g);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}
BENCHMARK(BM_GridStep)->RangeMultiplier(4)->Range(256, 4096);

static void BM_ReducedGammaPath(benchmark::State& state) {
  const HittingConfig cfg{2.0, 0.0, 1.0};
  std::uint64_t index = 0;
  for (auto _ : state) benchmark::DoNotOptimize(simulate_reduced_gamma(cfg, 200.0, 1e-3, 1, index++));
}
BENCHMARK(BM_ReducedGammaPath);

static void BM_MomentsMerge(benchmark::State& state) {
  const auto cells = static_cast<std::size_t>(state.range(0));
  std::vector<double> times(cells);
  for (std::size_t i = 0; i < cells; ++i) times[i] = static_cast<double>(i);
  MomentStats a({"x"}, times), b({"x"}, times);
  std::vector<double> path(cells, 1.0);
  for (int k = 0; k < 4; ++k) {
    a.add_path(path);
    b.add_path(path);
  }
  for (auto _ : state) {
    MomentStats c = a;
    c.merge(b);
    benchmark::DoNotOptimize(c.count());
  }
}
BENCHMARK(BM_MomentsMerge)->Arg(64)->Arg(4096);
BENCHMARK_MAIN();
