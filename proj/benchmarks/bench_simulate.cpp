#include <benchmark/benchmark.h>

#include "fmcw/dsp.hpp"
#include "fmcw/scene.hpp"

namespace {

fmcw::SceneConfig desk_scene(int rx_count, double noise_std) {
  fmcw::SceneConfig scene;
  scene.targets = {{50.0, 19.0, 10.0, 1.0}, {150.0, -15.0, -5.0, 0.8}};
  scene.rx_count = rx_count;
  scene.noise_std = noise_std;
  scene.rng_seed = 7;
  return scene;
}

fmcw::ChirpParams desk_chirp(int num_chirps) {
  fmcw::ChirpParams chirp;
  chirp.num_chirps = num_chirps;
  return chirp;  // defaults: 77 GHz, 150 MHz, 20 us, 10 MS/s
}

void BM_SimulateFrame(benchmark::State& state) {
  const auto scene = desk_scene(static_cast<int>(state.range(0)), 0.05);
  const auto chirp = desk_chirp(static_cast<int>(state.range(1)));
  for (auto _ : state) {
    auto cube = fmcw::simulate_frame(scene, chirp);
    benchmark::DoNotOptimize(cube.samples.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(1) *
                          static_cast<std::int64_t>(chirp.samples_per_chirp()));
}
BENCHMARK(BM_SimulateFrame)->Args({1, 64})->Args({4, 128})->Args({8, 256});

void BM_ProcessFrame(benchmark::State& state) {
  const auto scene = desk_scene(static_cast<int>(state.range(0)), 0.05);
  const auto chirp = desk_chirp(static_cast<int>(state.range(1)));
  const auto cube = fmcw::simulate_frame(scene, chirp);
  const fmcw::DspOptions options;
  for (auto _ : state) {
    auto processed = fmcw::process_frame(cube, options);
    benchmark::DoNotOptimize(processed.rd_map.magnitudes.data());
  }
}
BENCHMARK(BM_ProcessFrame)->Args({1, 64})->Args({4, 128})->Args({8, 256});

}  // namespace
