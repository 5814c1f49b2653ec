#include <benchmark/benchmark.h>

#include <array>
#include <vector>

#include "fmcw/cluster.hpp"
#include "fmcw/rng.hpp"

namespace {

// Gaussian blobs plus uniform background noise.
std::vector<std::array<double, 3>> blob_points(std::size_t n) {
  fmcw::SplitMix64 rng(99);
  std::vector<std::array<double, 3>> points;
  points.reserve(n);
  const std::array<std::array<double, 3>, 4> centers{{
      {10.0, 10.0, 1.0}, {40.0, -20.0, -2.0}, {-30.0, 25.0, 0.5}, {0.0, -40.0, 3.0}}};
  for (std::size_t i = 0; i < n; ++i) {
    if (i % 5 == 4) {
      points.push_back({rng.next_double() * 120.0 - 60.0,
                        rng.next_double() * 120.0 - 60.0,
                        rng.next_double() * 8.0 - 4.0});
      continue;
    }
    const auto& c = centers[i % centers.size()];
    const auto [g0, g1] = rng.next_gaussian_pair();
    const auto [g2, _] = rng.next_gaussian_pair();
    points.push_back({c[0] + g0, c[1] + g1, c[2] + 0.2 * g2});
  }
  return points;
}

void BM_DbscanBruteForce(benchmark::State& state) {
  const auto points = blob_points(static_cast<std::size_t>(state.range(0)));
  fmcw::DbscanParams params;
  params.eps = 2.5;
  params.min_pts = 6;
  for (auto _ : state) {
    auto labeling = fmcw::dbscan(std::span<const std::array<double, 3>>(points), params);
    benchmark::DoNotOptimize(labeling.labels.data());
  }
}
BENCHMARK(BM_DbscanBruteForce)->Arg(200)->Arg(1000)->Arg(4000);

void BM_DbscanGridIndex(benchmark::State& state) {
  const auto points = blob_points(static_cast<std::size_t>(state.range(0)));
  fmcw::DbscanParams params;
  params.eps = 2.5;
  params.min_pts = 6;
  params.use_grid_index = true;
  for (auto _ : state) {
    auto labeling = fmcw::dbscan(std::span<const std::array<double, 3>>(points), params);
    benchmark::DoNotOptimize(labeling.labels.data());
  }
}
BENCHMARK(BM_DbscanGridIndex)->Arg(200)->Arg(1000)->Arg(4000);

void BM_KDistance(benchmark::State& state) {
  const auto points = blob_points(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    auto curve = fmcw::k_distance(std::span<const std::array<double, 3>>(points), 5);
    benchmark::DoNotOptimize(curve.data());
  }
}
BENCHMARK(BM_KDistance)->Arg(200)->Arg(1000);

}  // namespace
