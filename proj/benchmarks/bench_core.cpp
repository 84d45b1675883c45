#include <benchmark/benchmark.h>

#include "yamabe/energy.hpp"
#include "yamabe/hessian.hpp"
#include "yamabe/reduction.hpp"
#include "yamabe/solver.hpp"

using namespace yamabe;

namespace {

Field test_field(const Manifold& m, int size) {
  return normalize_volume(m, Field::from_function(m.make_grid(size), [](double t) {
    return 1.0 + 0.2 * std::cos(t) + 0.05 * std::sin(3 * t);
  }));
}

void BM_YamabeEnergy(benchmark::State& state) {
  const Manifold m = make_product_manifold(3, 1.0);
  const Field u = test_field(m, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(yamabe_energy(m, u));
}
BENCHMARK(BM_YamabeEnergy)->Arg(64)->Arg(256)->Arg(512);

void BM_Gradient(benchmark::State& state) {
  const Manifold m = make_product_manifold(3, 1.0);
  const Field u = test_field(m, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(gradient(m, u));
}
BENCHMARK(BM_Gradient)->Arg(64)->Arg(256);

void BM_HessianSpectrum(benchmark::State& state) {
  const Manifold m = make_product_manifold(3, 1.0);
  const Field u = test_field(m, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(hessian_spectrum(m, u));
}
BENCHMARK(BM_HessianSpectrum)->Arg(64)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_GraphMapSolve(benchmark::State& state) {
  const Manifold m = make_product_manifold(3, 1.0);
  const Field v = constant_point(m, static_cast<int>(state.range(0))).u;
  const GraphMap map(m, v, hessian_spectrum(m, v).kernel_basis());
  Eigen::VectorXd x(2);
  x << 0.04, -0.02;
  for (auto _ : state) benchmark::DoNotOptimize(map.solve(x));
}
BENCHMARK(BM_GraphMapSolve)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_MinimizeAboveCriticalLength(benchmark::State& state) {
  const Manifold m = make_product_manifold(3, 1.2);
  const Field u0 = Field::from_function(m.make_grid(static_cast<int>(state.range(0))),
                                        [](double t) { return 1.0 + 0.1 * std::cos(t); });
  for (auto _ : state) benchmark::DoNotOptimize(minimize(m, u0));
}
BENCHMARK(BM_MinimizeAboveCriticalLength)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
