#include "fmcw/cluster.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <numeric>
#include <random>
#include <set>
#include <stdexcept>
#include <vector>

#include <doctest.h>

#include "support/oracles.hpp"

namespace {

using Point = std::array<double, 3>;

std::vector<Point> random_points(std::size_t n, std::uint64_t seed, double spread) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, spread);
  std::vector<Point> pts(n);
  for (auto& p : pts) p = {u(rng), u(rng), u(rng)};
  return pts;
}

// Relabel cluster ids by order of first appearance so two labelings can be
// compared up to a bijection of cluster ids.
std::vector<int> canonicalize(const std::vector<int>& labels) {
  std::vector<int> out(labels.size(), fmcw::kNoiseLabel);
  std::vector<int> remap;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == fmcw::kNoiseLabel) continue;
    auto it = std::find(remap.begin(), remap.end(), labels[i]);
    if (it == remap.end()) {
      remap.push_back(labels[i]);
      it = std::prev(remap.end());
    }
    out[i] = static_cast<int>(it - remap.begin());
  }
  return out;
}

}  // namespace

TEST_CASE("the six-point textbook scene: two clusters plus one noise point") {
  std::vector<Point> pts = {
      {10, 20, 1}, {11, 21, 1}, {12, 22, 1}, {30, 40, -2}, {31, 41, -2}, {100, 100, 10},
  };
  fmcw::DbscanParams params;
  params.eps = 2.0;
  params.min_pts = 2;
  auto result = fmcw::dbscan(pts, params);

  CHECK(result.cluster_count == 2);
  CHECK(result.labels == std::vector<int>{0, 0, 0, 1, 1, fmcw::kNoiseLabel});
  CHECK(result.core_flags == std::vector<bool>{true, true, true, true, true, false});
}

TEST_CASE("neighborhood counts include the point itself") {
  // Two points sqrt(2) apart: each neighborhood is {self, other} = 2 points,
  // so min_pts = 2 makes both core. Exclusive counting would call both noise.
  std::vector<Point> pair = {{0, 0, 0}, {1, 1, 0}};
  fmcw::DbscanParams params;
  params.eps = 2.0;
  params.min_pts = 2;
  auto result = fmcw::dbscan(pair, params);
  CHECK(result.labels == std::vector<int>{0, 0});

  // min_pts = 1 marks every point core, even an isolated one.
  params.min_pts = 1;
  std::vector<Point> spread = {{0, 0, 0}, {100, 0, 0}, {200, 0, 0}};
  auto singletons = fmcw::dbscan(spread, params);
  CHECK(singletons.labels == std::vector<int>{0, 1, 2});
  CHECK(singletons.cluster_count == 3);
}

TEST_CASE("the eps boundary is inclusive") {
  std::vector<Point> pts = {{0, 0, 0}, {2, 0, 0}};
  fmcw::DbscanParams params;
  params.eps = 2.0;
  params.min_pts = 2;
  CHECK(fmcw::dbscan(pts, params).cluster_count == 1);

  params.eps = 1.9999999;
  CHECK(fmcw::dbscan(pts, params).cluster_count == 0);
}

TEST_CASE("a contested border point joins the first cluster that reaches it") {
  // Two 4-point squares, each dense enough that all its corners are core at
  // min_pts = 4. The point at (2.5, 0) touches exactly one core of each
  // square (3 neighbors including itself, so never core): a genuinely
  // contested border. Scan order grows the left cluster first.
  std::vector<Point> pts = {
      {0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {1, 1, 0},  // left square
      {2.5, 0, 0},                                 // contested border
      {4, 0, 0}, {5, 0, 0}, {4, 1, 0}, {5, 1, 0},  // right square
  };
  fmcw::DbscanParams params;
  params.eps = 1.5;
  params.min_pts = 4;
  auto result = fmcw::dbscan(pts, params);
  CHECK(result.cluster_count == 2);
  CHECK_FALSE(result.core_flags[4]);
  CHECK(result.labels == std::vector<int>{0, 0, 0, 0, 0, 1, 1, 1, 1});

  // The declarative reference resolves the tie the same way.
  CHECK(result.labels == oracles::reference_dbscan(pts, params.eps, params.min_pts));
}

TEST_CASE("dbscan matches the declarative reference on random instances") {
  std::mt19937_64 pick(11);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 10 + pick() % 70;
    const double spread = 20.0;
    auto pts = random_points(n, pick(), spread);
    fmcw::DbscanParams params;
    params.eps = 1.0 + static_cast<double>(pick() % 40) / 10.0;
    params.min_pts = 1 + static_cast<int>(pick() % 6);
    CAPTURE(n);
    CAPTURE(params.eps);
    CAPTURE(params.min_pts);

    auto got = fmcw::dbscan(pts, params);
    auto expected = oracles::reference_dbscan(pts, params.eps, params.min_pts);
    CHECK(got.labels == expected);
  }
}

TEST_CASE("the grid index returns identical labels to the direct scan") {
  std::mt19937_64 pick(23);
  for (int trial = 0; trial < 20; ++trial) {
    auto pts = random_points(30 + pick() % 120, pick(), 15.0);
    fmcw::DbscanParams params;
    params.eps = 0.5 + static_cast<double>(pick() % 30) / 10.0;
    params.min_pts = 1 + static_cast<int>(pick() % 7);
    params.use_grid_index = false;
    auto brute = fmcw::dbscan(pts, params);
    params.use_grid_index = true;
    auto grid = fmcw::dbscan(pts, params);
    CHECK(brute.labels == grid.labels);
    CHECK(brute.core_flags == grid.core_flags);
    CHECK(brute.cluster_count == grid.cluster_count);
  }
}

TEST_CASE("labels are permutation-invariant up to renaming for min_pts <= 3") {
  // With min_pts <= 3 a border point cannot be adjacent to two different
  // clusters (its core neighbors would be mutual neighbors and merge), so the
  // partition is unique and input order only renames cluster ids.
  std::mt19937_64 pick(37);
  for (int trial = 0; trial < 20; ++trial) {
    auto pts = random_points(40, pick(), 12.0);
    fmcw::DbscanParams params;
    params.eps = 1.5;
    params.min_pts = 1 + static_cast<int>(pick() % 3);

    auto base = fmcw::dbscan(pts, params);

    std::vector<std::size_t> perm(pts.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), pick);
    std::vector<Point> shuffled(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) shuffled[i] = pts[perm[i]];

    auto permuted = fmcw::dbscan(shuffled, params);
    // Map the permuted labels back to the original order and compare up to a
    // bijection of cluster ids.
    std::vector<int> back(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) back[perm[i]] = permuted.labels[i];
    CHECK(canonicalize(back) == canonicalize(base.labels));
  }
}

TEST_CASE("core flags and the noise set are permutation-invariant at any min_pts") {
  std::mt19937_64 pick(41);
  for (int trial = 0; trial < 10; ++trial) {
    auto pts = random_points(60, pick(), 10.0);
    fmcw::DbscanParams params;
    params.eps = 2.0;
    params.min_pts = 6;  // radar default; contested borders are possible here

    auto base = fmcw::dbscan(pts, params);

    std::vector<std::size_t> perm(pts.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), pick);
    std::vector<Point> shuffled(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) shuffled[i] = pts[perm[i]];
    auto permuted = fmcw::dbscan(shuffled, params);

    for (std::size_t i = 0; i < pts.size(); ++i) {
      CHECK(permuted.core_flags[i] == base.core_flags[perm[i]]);
      CHECK((permuted.labels[i] == fmcw::kNoiseLabel) ==
            (base.labels[perm[i]] == fmcw::kNoiseLabel));
    }
    CHECK(permuted.cluster_count == base.cluster_count);
  }
}

TEST_CASE("axis scaling separates clusters that overlap spatially") {
  // Same (x, y), velocities 0 vs 0.6: unscaled they form one cluster.
  std::vector<Point> pts = {
      {0, 0, 0.0}, {0.5, 0, 0.0}, {1, 0, 0.0},
      {0, 0, 0.6}, {0.5, 0, 0.6}, {1, 0, 0.6},
  };
  fmcw::DbscanParams params;
  params.eps = 1.0;
  params.min_pts = 3;
  CHECK(fmcw::dbscan(pts, params).cluster_count == 1);

  params.axis_scales = {{1.0, 1.0, 10.0}};  // velocity differences now dominate
  auto scaled = fmcw::dbscan(pts, params);
  CHECK(scaled.cluster_count == 2);
  CHECK(scaled.labels == std::vector<int>{0, 0, 0, 1, 1, 1});
}

TEST_CASE("k_distance: sorted k-th neighbor distances, self excluded") {
  std::vector<Point> line = {{0, 0, 0}, {1, 0, 0}, {3, 0, 0}, {7, 0, 0}};
  // Nearest-other distances: [1, 1, 2, 4].
  CHECK(fmcw::k_distance(line, 1) == std::vector<double>{1.0, 1.0, 2.0, 4.0});
  // Second-nearest per point: [3, 2, 3, 6] -> sorted.
  CHECK(fmcw::k_distance(line, 2) == std::vector<double>{2.0, 3.0, 3.0, 6.0});

  CHECK_THROWS_AS((void)fmcw::k_distance(line, 4), std::invalid_argument);
  CHECK_THROWS_AS((void)fmcw::k_distance(line, 0), std::invalid_argument);

  // Duplicate coordinates: the nearest OTHER point sits at distance zero.
  std::vector<Point> dup = {{5, 5, 0}, {5, 5, 0}};
  CHECK(fmcw::k_distance(dup, 1) == std::vector<double>{0.0, 0.0});
}

TEST_CASE("suggest_eps finds the knee of the k-distance curve") {
  // Five small distances then a jump: the knee is the last small value.
  std::vector<double> curve = {1.0, 1.0, 1.0, 1.0, 10.0, 11.0};
  auto s = fmcw::suggest_eps(curve);
  CHECK(s.eps == doctest::Approx(1.0));
  CHECK_FALSE(s.degenerate);

  // A flat curve carries no knee information.
  std::vector<double> flat = {2.0, 2.0, 2.0, 2.0};
  auto f = fmcw::suggest_eps(flat);
  CHECK(f.eps == doctest::Approx(2.0));
  CHECK(f.degenerate);

  // Too few samples to form a chord.
  auto tiny = fmcw::suggest_eps(std::vector<double>{3.0});
  CHECK(tiny.eps == doctest::Approx(3.0));
  CHECK(tiny.degenerate);
}

TEST_CASE("suggest_eps on a realistic two-regime curve") {
  // Dense cluster distances ~0.5, then noise distances ramping to 8: the
  // knee must sit near the transition, not in either tail.
  std::vector<double> curve;
  for (int i = 0; i < 20; ++i) curve.push_back(0.4 + 0.01 * i);
  for (int i = 0; i < 8; ++i) curve.push_back(1.0 + 1.0 * i);
  std::sort(curve.begin(), curve.end());
  auto s = fmcw::suggest_eps(curve);
  CHECK(s.eps >= 0.5);
  CHECK(s.eps <= 2.0);
  CHECK_FALSE(s.degenerate);
}

TEST_CASE("default_min_pts doubles the dimension count") {
  CHECK(fmcw::default_min_pts(3) == 6);
  CHECK(fmcw::default_min_pts(2) == 4);
  CHECK_THROWS_AS((void)fmcw::default_min_pts(0), std::invalid_argument);
}

TEST_CASE("radar-point overloads agree with the raw-array API") {
  std::vector<fmcw::RadarPoint> rp = {
      {10, 20, 1, 5.0}, {11, 21, 1, 4.0}, {100, 100, 10, 3.0},
  };
  std::vector<Point> raw = {{10, 20, 1}, {11, 21, 1}, {100, 100, 10}};
  fmcw::DbscanParams params;
  params.eps = 2.0;
  params.min_pts = 2;
  CHECK(fmcw::dbscan(rp, params).labels == fmcw::dbscan(raw, params).labels);
  CHECK(fmcw::k_distance(rp, 1) == fmcw::k_distance(raw, 1));
}

TEST_CASE("parameter validation") {
  fmcw::DbscanParams params;
  CHECK_NOTHROW(params.validate());
  params.eps = 0.0;
  CHECK_THROWS_AS(params.validate(), std::invalid_argument);
  params = {};
  params.min_pts = 0;
  CHECK_THROWS_AS(params.validate(), std::invalid_argument);
}
