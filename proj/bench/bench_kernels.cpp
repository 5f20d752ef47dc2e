// Serial reference vs OpenMP kernels. Arg 0 = Exec::Serial, 1 = Exec::Parallel.

#include <benchmark/benchmark.h>

#include "schwarzstatic/curvature_lab.hpp"
#include "schwarzstatic/gauge.hpp"
#include "schwarzstatic/structure.hpp"
#include "schwarzstatic/sweep.hpp"
#include "schwarzstatic/synthetic.hpp"

using namespace schwarzstatic;

namespace {

const SchwarzschildParams P{1.0, 3.0};

Exec exec_of(const benchmark::State& s) { return s.range(0) ? Exec::Parallel : Exec::Serial; }

const ShellGrid& grid() {
  static const ShellGrid g{RadialGrid::uniform(P.r0, P.r0 + 1.0, 41), SphereGrid::for_band(8)};
  return g;
}

const DeformationPair& gauged_pair() {
  static const DeformationPair d = [] {
    const RandomDeformation X(P, grid().sphere, 7, {.L = 3});
    const auto raw = sample_deformation(X.sampler(), grid());
    return apply_gauge(raw, build_gauge_field(X.sampler(), P, grid()), P).pair;
  }();
  return d;
}

void BM_StaticResidual(benchmark::State& s) {
  const auto g = schwarzschild_conformal_metric(P, grid());
  const auto u = schwarzschild_log_potential(P, grid());
  for (auto _ : s) benchmark::DoNotOptimize(conformal_static_residual(g, u, exec_of(s)));
}

void BM_Linearize(benchmark::State& s) {
  for (auto _ : s) benchmark::DoNotOptimize(linearize_at_schwarzschild(gauged_pair(), P, 1e-4, exec_of(s)));
}

void BM_GaugeField(benchmark::State& s) {
  const RandomDeformation X(P, grid().sphere, 11, {.L = 4});
  for (auto _ : s) benchmark::DoNotOptimize(build_gauge_field(X.sampler(), P, grid(), {}, exec_of(s)));
}

void BM_StructureResiduals(benchmark::State& s) {
  const auto f = foliation_from_gauge_fixed(gauged_pair(), P);
  for (auto _ : s) benchmark::DoNotOptimize(structure_residuals(f, P, {}, exec_of(s)));
}

void BM_Sweep(benchmark::State& s) {
  const SweepConfig c;
  for (auto _ : s) benchmark::DoNotOptimize(run_sweep(c, {s.range(0) ? 4 : 1, false}));
}

}  // namespace

BENCHMARK(BM_StaticResidual)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Linearize)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GaugeField)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_StructureResiduals)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Sweep)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
