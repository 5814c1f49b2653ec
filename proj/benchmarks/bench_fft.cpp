#include <benchmark/benchmark.h>

#include <complex>
#include <vector>

#include "fmcw/fft.hpp"
#include "fmcw/rng.hpp"

namespace {

std::vector<std::complex<double>> random_signal(std::size_t n) {
  fmcw::SplitMix64 rng(42);
  std::vector<std::complex<double>> x(n);
  for (auto& v : x) v = {rng.next_double() - 0.5, rng.next_double() - 0.5};
  return x;
}

void BM_DftPow2(benchmark::State& state) {
  const auto x = random_signal(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    auto spec = fmcw::dft(x);
    benchmark::DoNotOptimize(spec.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_DftPow2)->Arg(256)->Arg(1024)->Arg(4096)->Arg(16384);

// Bluestein path: sizes with large prime factors.
void BM_DftBluestein(benchmark::State& state) {
  const auto x = random_signal(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    auto spec = fmcw::dft(x);
    benchmark::DoNotOptimize(spec.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_DftBluestein)->Arg(200)->Arg(1000)->Arg(4001)->Arg(10007);

}  // namespace

BENCHMARK_MAIN();
