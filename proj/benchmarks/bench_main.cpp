#include <benchmark/benchmark.h>

#include <random>

#include "conley/analysis.hpp"
#include "conley/homology.hpp"
#include "conley/orbits.hpp"

using namespace conley;

namespace {

const Rect kSquare{-1, 1, -1, 1};

// Boundary matrix of the full grid at the given depth.
void BM_SmithFullGrid(benchmark::State& state) {
  const CubicalSet s = build_set(kSquare, static_cast<int>(state.range(0)), [](Point) { return true; });
  const BoundaryMatrices bm = boundary_matrices(s);
  for (auto _ : state) benchmark::DoNotOptimize(smith_normal_form(bm.d2));
  state.SetLabel(std::to_string(bm.d2.rows()) + "x" + std::to_string(bm.d2.cols()));
}
BENCHMARK(BM_SmithFullGrid)->DenseRange(2, 5);

void BM_SmithRandomDense(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::mt19937 rng(7);
  SparseIntMatrix m(n, n);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) m.add(r, c, static_cast<long>(rng() % 7) - 3);
  }
  for (auto _ : state) benchmark::DoNotOptimize(smith_normal_form(m));
}
BENCHMARK(BM_SmithRandomDense)->Arg(8)->Arg(16)->Arg(32);

void BM_RelativeHomologyAnnulus(benchmark::State& state) {
  const int depth = static_cast<int>(state.range(0));
  const auto outer = BlockShape::annulus({0, 0}, 0.3, 0.95).predicate();
  const CubicalSet n = build_set(kSquare, depth, outer);
  const CubicalSet l = build_set(kSquare, depth, BlockShape::annulus({0, 0}, 0.3, 0.5).predicate());
  for (auto _ : state) benchmark::DoNotOptimize(relative_homology(n, l.intersected(n)));
}
BENCHMARK(BM_RelativeHomologyAnnulus)->DenseRange(3, 6);

void BM_BuildTripleSaddle(benchmark::State& state) {
  const int depth = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(build_triple(catalogue("saddle"), kSquare, depth, BlockShape::whole().predicate()));
  }
}
BENCHMARK(BM_BuildTripleSaddle)->DenseRange(1, 6);

void BM_ConleyIndexZbarpow2(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(conley_index(catalogue("zbarpow2"), kSquare, 3, BlockShape::whole().predicate()));
  }
}
BENCHMARK(BM_ConleyIndexZbarpow2);

void BM_HomoclinicScanZpow2(benchmark::State& state) {
  const PlanarField f(catalogue("zpow2"));
  const int seeds = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(homoclinic_scan(f, {0, 0}, 2, 0.2, seeds));
}
BENCHMARK(BM_HomoclinicScanZpow2)->Arg(8)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_IntegrateHopf(benchmark::State& state) {
  const PlanarField f(catalogue("hopf"));
  for (auto _ : state) benchmark::DoNotOptimize(integrate(f, {0.1, 0}, Direction::Forward, 50));
}
BENCHMARK(BM_IntegrateHopf)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
