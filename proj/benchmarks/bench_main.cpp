#include <benchmark/benchmark.h>

#include <random>

#include "toric_hk/catalog.hpp"
#include "toric_hk/sampling.hpp"
#include "toric_hk/verify.hpp"

using namespace toric_hk;

namespace {

const CatalogEntry& n2() { return *find_catalog_entry("n2-unimodular"); }

void BM_EvalPhi(benchmark::State& state) {
  const auto& e = n2();
  Rng rng(1);
  const auto pts = sample_points(e.arrangement, 64, rng);
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(eval_Phi(e.arrangement, e.b, pts[i++ % pts.size()]));
}
BENCHMARK(BM_EvalPhi);

void BM_EvalMetric(benchmark::State& state) {
  const auto& e = n2();
  Rng rng(2);
  const auto pts = sample_points(e.arrangement, 64, rng);
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(eval_metric(e.arrangement, e.b, pts[i++ % pts.size()]));
}
BENCHMARK(BM_EvalMetric);

void BM_LegendreSolve(benchmark::State& state) {
  const auto& e = n2();
  Rng rng(3);
  const auto cps = sample_chart_points(e.arrangement, e.b, 64, rng);
  std::size_t i = 0;
  for (auto _ : state) {
    const auto& c = cps[i++ % cps.size()];
    benchmark::DoNotOptimize(legendre_solve(e.arrangement, e.b, c.u, c.z));
  }
}
BENCHMARK(BM_LegendreSolve);

void BM_RicciResidual(benchmark::State& state) {
  const auto& e = *find_catalog_entry(state.range(0) == 1 ? "eguchi-hanson" : "n2-unimodular");
  Rng rng(4);
  SamplingRegion region;
  region.min_string_distance = default_tolerances().fd_string_distance;
  const auto pts = sample_points(e.arrangement, 16, rng, region);
  std::size_t i = 0;
  for (auto _ : state)
    benchmark::DoNotOptimize(ricci_residual(e.arrangement, e.b, pts[i++ % pts.size()], 1e-3));
}
BENCHMARK(BM_RicciResidual)->Arg(1)->Arg(2);

void BM_IntersectionStrata(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  std::vector<Flat> flats;
  for (int k = 0; k < d; ++k) {
    // Distinct normals (1, k) through shifted points keep many pairs consistent.
    flats.emplace_back(Normal({1, k}), std::array<double, 3>{0.1 * k, 0.0, 0.0});
  }
  const FlatArrangement arr(2, flats);
  for (auto _ : state) benchmark::DoNotOptimize(intersection_strata(arr));
}
BENCHMARK(BM_IntersectionStrata)->Arg(4)->Arg(8)->Arg(16);

}  // namespace

BENCHMARK_MAIN();
