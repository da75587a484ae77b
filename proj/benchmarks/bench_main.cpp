#include <benchmark/benchmark.h>

#include <vector>

#include "ein/diamonds.hpp"
#include "ein/domains.hpp"
#include "ein/random.hpp"

namespace {

using namespace ein;

std::vector<UniPoint> random_points(int count, int n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<UniPoint> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) out.emplace_back(rng.unit_vector(n), rng.uniform(-10.0, 10.0));
  return out;
}

void BM_Classify(benchmark::State& state) {
  const auto pts = random_points(1024, static_cast<int>(state.range(0)), 1);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(classify(pts[i % 1024], pts[(i * 7 + 3) % 1024]));
    ++i;
  }
}
BENCHMARK(BM_Classify)->Arg(3)->Arg(8);

void BM_ClassifyDiamond(benchmark::State& state) {
  const Diamond d = Diamond::make(UniPoint(basis_vector(3, 0), 0.0), UniPoint(basis_vector(3, 1), 4.0));
  for (auto _ : state) benchmark::DoNotOptimize(classify_diamond(d));
}
BENCHMARK(BM_ClassifyDiamond);

void BM_ChartRoundTrip(benchmark::State& state) {
  const ChartFrame f = frame_for(UniPoint(basis_vector(3, 0), 0.3));
  Rng rng(2);
  const Vec X = rng.uniform_box(3, 2.0);
  for (auto _ : state) benchmark::DoNotOptimize(chart_coords(f, embed(f, X)));
}
BENCHMARK(BM_ChartRoundTrip);

void BM_LiftToChart(benchmark::State& state) {
  const ChartFrame f = frame_for(UniPoint(basis_vector(3, 0), 0.3));
  Rng rng(3);
  const Vec X = rng.uniform_box(3, 2.0);
  for (auto _ : state) benchmark::DoNotOptimize(lift_to_chart(f, X));
}
BENCHMARK(BM_LiftToChart);

void BM_Member(benchmark::State& state) {
  const RegularDomain cone = polyhedral_cone(direction_grid(3, static_cast<int>(state.range(0))));
  Rng rng(4);
  const Vec q = rng.uniform_box(3, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(member(cone, q));
}
BENCHMARK(BM_Member)->Arg(16)->Arg(256);

void BM_KnnLists(benchmark::State& state) {
  Rng rng(5);
  std::vector<Vec> pts;
  for (int i = 0; i < state.range(0); ++i) pts.push_back(rng.uniform_box(3, 1.0));
  for (auto _ : state) benchmark::DoNotOptimize(knn_lists(pts, 10));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_KnnLists)->RangeMultiplier(4)->Range(256, 16384)->Complexity();

void BM_Components(benchmark::State& state) {
  Rng rng(6);
  SampleCloud cloud;
  for (int i = 0; i < 4096; ++i) cloud.points.push_back(rng.uniform_box(3, 1.0));
  for (auto _ : state) benchmark::DoNotOptimize(components(cloud, 10, KnnGraph::Symmetric));
}
BENCHMARK(BM_Components);

void BM_CounterexampleScene(benchmark::State& state) {
  CounterexampleScene sc;
  sc.samples = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(counterexample_scene(sc));
}
BENCHMARK(BM_CounterexampleScene)->Arg(5000)->Arg(20000)->Unit(benchmark::kMillisecond);

void BM_PipCheck(benchmark::State& state) {
  const RegularDomain cone = polyhedral_cone(direction_grid(3, 16));
  Vec p = Vec::Zero(3);
  p[2] = 1.0;
  for (auto _ : state) benchmark::DoNotOptimize(pip_reconstruction_check(cone, p, 1000, 7));
}
BENCHMARK(BM_PipCheck)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
