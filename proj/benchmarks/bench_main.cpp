#include <benchmark/benchmark.h>

#include "hfclt/cltcheck.hpp"
#include "hfclt/convolve.hpp"
#include "hfclt/fieldsim.hpp"

using namespace hfclt;

namespace {

void convolve_with(benchmark::State& state, ConvolveMethod method, FftAccuracy accuracy) {
  const Spectrum s = build_spectrum(AlgebraicModel{2.0, 1.0}, LatticeBox(1, static_cast<int>(state.range(0))));
  ConvolveOptions o;
  o.method = method;
  o.accuracy = accuracy;
  for (auto _ : state) benchmark::DoNotOptimize(convolve_power(s, 3, o));
  state.SetComplexityN(state.range(0));
}

void BM_ConvolveDirect(benchmark::State& state) { convolve_with(state, ConvolveMethod::kDirect, FftAccuracy::kPointwise); }
void BM_ConvolveFftPointwise(benchmark::State& state) { convolve_with(state, ConvolveMethod::kFft, FftAccuracy::kPointwise); }
void BM_ConvolveFftNormwise(benchmark::State& state) { convolve_with(state, ConvolveMethod::kFft, FftAccuracy::kNormwise); }

void BM_Convolve2d(benchmark::State& state) {
  const Spectrum s = build_spectrum(ExponentialModel{{0.5}, {1.0}}, LatticeBox(2, static_cast<int>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(convolve_power(s, 2));
}

void BM_CltReport(benchmark::State& state) {
  const Spectrum s = build_spectrum(AlgebraicModel{2.0, 1.0}, LatticeBox(1, 512));
  const auto p = convolve_power(s, 3);
  std::vector<LatticePoint> freqs;
  for (int k = 8; k <= 512; k *= 2) freqs.push_back(LatticePoint{k});
  for (auto _ : state) benchmark::DoNotOptimize(clt_report(p, freqs, 3, 1));
}

void BM_McReplications(benchmark::State& state) {
  const Spectrum s = build_spectrum(ExponentialModel{{0.5}, {1.0}}, LatticeBox(1, static_cast<int>(state.range(0))));
  McConfig cfg;
  cfg.freqs = {LatticePoint{static_cast<int>(state.range(0))}};
  cfg.orders = {1, 2, 3};
  cfg.reps = 1000;
  cfg.seed = 1;
  cfg.workers = 1;
  for (auto _ : state) benchmark::DoNotOptimize(mc_moments(s, cfg));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(cfg.reps));
}

}  // namespace

BENCHMARK(BM_ConvolveDirect)->RangeMultiplier(4)->Range(16, 1024)->Complexity();
BENCHMARK(BM_ConvolveFftPointwise)->RangeMultiplier(4)->Range(16, 1024)->Complexity();
BENCHMARK(BM_ConvolveFftNormwise)->RangeMultiplier(4)->Range(16, 1024)->Complexity();
BENCHMARK(BM_Convolve2d)->Arg(8)->Arg(32);
BENCHMARK(BM_CltReport);
BENCHMARK(BM_McReplications)->Arg(16)->Arg(64);
BENCHMARK_MAIN();
