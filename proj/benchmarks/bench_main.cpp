#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "otbdp/breakdown.hpp"
#include "otbdp/curves.hpp"
#include "otbdp/geometry.hpp"
#include "otbdp/sdot.hpp"

using namespace otbdp;

namespace {

PointSet random_atoms(std::size_t n, std::size_t d, std::uint64_t seed) {
  std::mt19937_64 g(seed);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  PointSet atoms(d);
  for (std::size_t i = 0; i < n; ++i) {
    Point x(d);
    for (auto& v : x) v = U(g);
    atoms.push_back(x);
  }
  return atoms;
}

void BM_Classify(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto ref = ReferenceMeasure::parse("cube:2");
  const PowerDiagram pd(ref, random_atoms(n, 2, 1), std::vector<double>(n, 0.0));
  const auto pts = sample(ref, 4096, 2);
  for (auto _ : state) {
    std::size_t acc = 0;
    for (std::size_t k = 0; k < pts.size(); ++k) acc += pd.classify(pts[k]);
    benchmark::DoNotOptimize(acc);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(pts.size()));
}
BENCHMARK(BM_Classify)->Arg(8)->Arg(64)->Arg(512);

void BM_Solve(benchmark::State& state) {
  const auto ref = ReferenceMeasure::parse("cube:2");
  const auto target = DiscreteMeasure::empirical(random_atoms(static_cast<std::size_t>(state.range(0)), 2, 3));
  SolveConfig cfg;
  cfg.mc_budget = static_cast<std::size_t>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(solve(ref, target, cfg).residual());
}
BENCHMARK(BM_Solve)->Args({8, 100'000})->Args({32, 100'000})->Unit(benchmark::kMillisecond);

void BM_SubsetSearch(benchmark::State& state) {
  std::mt19937_64 g(4);
  std::uniform_real_distribution<double> U(0.05, 1.0);
  std::vector<double> w(static_cast<std::size_t>(state.range(0)));
  for (auto& v : w) v = U(g);
  double tot = 0.0;
  for (double v : w) tot += v;
  for (auto& v : w) v /= tot;
  for (auto _ : state) benchmark::DoNotOptimize(min_subset_at_least(w, 0.3).sum);
}
BENCHMARK(BM_SubsetSearch)->Arg(12)->Arg(20)->Arg(28)->Unit(benchmark::kMicrosecond);

void BM_Curve(benchmark::State& state) {
  CurveSpec spec;
  spec.dims = {static_cast<std::size_t>(state.range(0))};
  for (auto _ : state) benchmark::DoNotOptimize(bdp_curve(spec).size());
}
BENCHMARK(BM_Curve)->Arg(2)->Arg(10)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
