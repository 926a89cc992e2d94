// Serial reference path against the OpenMP path for the sample-loop kernels.
// Arg 0 = serial, 1 = parallel.

#include <benchmark/benchmark.h>

#include "finsler/catalog.hpp"
#include "finsler/invariants.hpp"
#include "finsler/tensors.hpp"
#include "finsler/verify.hpp"

using namespace finsler;

namespace {

Exec exec_of(const benchmark::State& state) { return state.range(0) == 0 ? Exec::serial : Exec::parallel; }

void BM_Diameter(benchmark::State& state) {
  auto m = catalog::randers_perturbed_torus();
  for (auto _ : state) benchmark::DoNotOptimize(diameter_estimate(*m, 16, exec_of(state)));
}

void BM_Reversibility(benchmark::State& state) {
  auto m = catalog::randers_shear_torus();
  EstimateOptions opt;
  opt.exec = exec_of(state);
  opt.refine_starts = 0;
  for (auto _ : state) benchmark::DoNotOptimize(reversibility_estimate(*m, 2000, 1, opt).value);
}

void BM_Volume(benchmark::State& state) {
  auto m = catalog::randers_perturbed_torus();
  for (auto _ : state) benchmark::DoNotOptimize(volume(*m, Measure::holmes_thompson, 24, exec_of(state)));
}

void BM_Rauch(benchmark::State& state) {
  auto m = catalog::sphere_stereographic();
  VerifyParams p;
  p.samples = 64;
  p.k_used = 1.0;
  p.exec = exec_of(state);
  for (auto _ : state) benchmark::DoNotOptimize(check_rauch(*m, p).worst_margin);
}

}  // namespace

BENCHMARK(BM_Diameter)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Reversibility)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Volume)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Rauch)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
