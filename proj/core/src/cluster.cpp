#include "fmcw/cluster.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <map>
#include <stdexcept>
#include <string>

namespace fmcw {

namespace {

using Point3 = std::array<double, 3>;

std::vector<Point3> apply_scales(std::span<const Point3> points,
                                 const std::optional<Point3>& axis_scales) {
  std::vector<Point3> scaled(points.begin(), points.end());
  if (axis_scales) {
    for (Point3& p : scaled) {
      for (int d = 0; d < 3; ++d) p[d] *= (*axis_scales)[d];
    }
  }
  return scaled;
}

double squared_distance(const Point3& a, const Point3& b) {
  const double dx = a[0] - b[0];
  const double dy = a[1] - b[1];
  const double dz = a[2] - b[2];
  return dx * dx + dy * dy + dz * dz;
}

// Neighbor provider: brute force or uniform grid with eps-sized cells. Both
// return the same sets (inclusive <= eps, self included) in ascending index
// order, so the clustering result cannot depend on which one is active.
class NeighborIndex {
 public:
  NeighborIndex(const std::vector<Point3>& points, double eps, bool use_grid)
      : points_(points), eps_sq_(eps * eps), use_grid_(use_grid && !points.empty()) {
    if (!use_grid_) return;
    cell_size_ = eps > 0.0 ? eps : 1.0;
    for (std::size_t i = 0; i < points_.size(); ++i) {
      grid_[cell_of(points_[i])].push_back(i);
    }
  }

  std::vector<std::size_t> neighbors_of(std::size_t i) const {
    std::vector<std::size_t> out;
    const Point3& p = points_[i];
    if (!use_grid_) {
      for (std::size_t j = 0; j < points_.size(); ++j) {
        if (squared_distance(p, points_[j]) <= eps_sq_) out.push_back(j);
      }
      return out;
    }

    const Cell home = cell_of(p);
    for (std::int64_t dx = -1; dx <= 1; ++dx) {
      for (std::int64_t dy = -1; dy <= 1; ++dy) {
        for (std::int64_t dz = -1; dz <= 1; ++dz) {
          const Cell c{home[0] + dx, home[1] + dy, home[2] + dz};
          const auto it = grid_.find(c);
          if (it == grid_.end()) continue;
          for (const std::size_t j : it->second) {
            if (squared_distance(p, points_[j]) <= eps_sq_) out.push_back(j);
          }
        }
      }
    }
    // Cells are visited out of index order; restore it so traversal order
    // (and with it border-point assignment) matches the brute-force path.
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  using Cell = std::array<std::int64_t, 3>;

  Cell cell_of(const Point3& p) const {
    return {static_cast<std::int64_t>(std::floor(p[0] / cell_size_)),
            static_cast<std::int64_t>(std::floor(p[1] / cell_size_)),
            static_cast<std::int64_t>(std::floor(p[2] / cell_size_))};
  }

  const std::vector<Point3>& points_;
  double eps_sq_;
  bool use_grid_;
  double cell_size_ = 1.0;
  std::map<Cell, std::vector<std::size_t>> grid_;
};

}  // namespace

void DbscanParams::validate() const {
  if (!(eps > 0.0) || !std::isfinite(eps)) {
    throw std::invalid_argument("cluster.eps must be positive, got " +
                                std::to_string(eps));
  }
  if (min_pts < 1) {
    throw std::invalid_argument("cluster.min_pts must be >= 1, got " +
                                std::to_string(min_pts));
  }
  if (axis_scales) {
    for (const double s : *axis_scales) {
      if (!(s > 0.0) || !std::isfinite(s)) {
        throw std::invalid_argument("cluster.axis_scales entries must be positive");
      }
    }
  }
}

Labeling dbscan(std::span<const Point3> points, const DbscanParams& params) {
  params.validate();
  const std::size_t n = points.size();

  Labeling result;
  result.labels.assign(n, kNoiseLabel);
  result.core_flags.assign(n, false);
  if (n == 0) return result;

  const std::vector<Point3> scaled = apply_scales(points, params.axis_scales);
  const NeighborIndex index(scaled, params.eps, params.use_grid_index);

  // Pass 1: core points are a pure per-point property (|neighborhood| >=
  // min_pts with self included), independent of traversal order.
  std::vector<std::vector<std::size_t>> neighborhoods(n);
  for (std::size_t i = 0; i < n; ++i) {
    neighborhoods[i] = index.neighbors_of(i);
    result.core_flags[i] =
        neighborhoods[i].size() >= static_cast<std::size_t>(params.min_pts);
  }

  // Pass 2: grow one cluster per still-unlabeled core point, in scan order.
  int next_cluster = 0;
  std::vector<char> enqueued(n, 0);
  for (std::size_t seed = 0; seed < n; ++seed) {
    if (!result.core_flags[seed] || result.labels[seed] != kNoiseLabel) continue;

    const int cluster = next_cluster++;
    std::deque<std::size_t> frontier;
    frontier.push_back(seed);
    enqueued[seed] = 1;
    while (!frontier.empty()) {
      const std::size_t p = frontier.front();
      frontier.pop_front();
      if (result.labels[p] != kNoiseLabel) continue;
      result.labels[p] = cluster;
      if (!result.core_flags[p]) continue;  // border points do not expand
      for (const std::size_t q : neighborhoods[p]) {
        if (result.labels[q] == kNoiseLabel && !enqueued[q]) {
          frontier.push_back(q);
          enqueued[q] = 1;
        }
      }
    }
  }
  result.cluster_count = next_cluster;
  return result;
}

Labeling dbscan(std::span<const RadarPoint> points, const DbscanParams& params) {
  std::vector<Point3> converted(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    converted[i] = {points[i].x_m, points[i].y_m, points[i].v_mps};
  }
  return dbscan(converted, params);
}

std::vector<double> k_distance(std::span<const Point3> points, int k,
                               const std::optional<Point3>& axis_scales) {
  const std::size_t n = points.size();
  if (k < 1) throw std::invalid_argument("k_distance: k must be >= 1");
  if (static_cast<std::size_t>(k) >= n) {
    throw std::invalid_argument("k_distance: need more than k points, got " +
                                std::to_string(n) + " for k = " + std::to_string(k));
  }

  const std::vector<Point3> scaled = apply_scales(points, axis_scales);
  std::vector<double> kth(n);
  std::vector<double> dists;
  dists.reserve(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    dists.clear();
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;  // self excluded
      dists.push_back(squared_distance(scaled[i], scaled[j]));
    }
    std::nth_element(dists.begin(), dists.begin() + (k - 1), dists.end());
    kth[i] = std::sqrt(dists[k - 1]);
  }
  std::sort(kth.begin(), kth.end());
  return kth;
}

std::vector<double> k_distance(std::span<const RadarPoint> points, int k,
                               const std::optional<Point3>& axis_scales) {
  std::vector<Point3> converted(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    converted[i] = {points[i].x_m, points[i].y_m, points[i].v_mps};
  }
  return k_distance(converted, k, axis_scales);
}

EpsSuggestion suggest_eps(std::span<const double> sorted_k_distances) {
  const std::size_t n = sorted_k_distances.size();
  if (n == 0) throw std::invalid_argument("suggest_eps: empty k-distance curve");

  EpsSuggestion suggestion;
  if (n < 3 || sorted_k_distances.front() == sorted_k_distances.back()) {
    // No bend to find: flat curve (all equal) or too few samples.
    suggestion.eps = sorted_k_distances.back();
    suggestion.degenerate = true;
    return suggestion;
  }

  // Perpendicular distance of each sample (i, y_i) from the chord joining
  // (0, y_0) and (n-1, y_{n-1}); the common denominator |chord| is constant
  // and omitted. Ties go to the larger index = larger eps.
  const double x1 = 0.0, y1 = sorted_k_distances.front();
  const double x2 = static_cast<double>(n - 1), y2 = sorted_k_distances.back();
  const double dx = x2 - x1, dy = y2 - y1;
  std::size_t best = 0;
  double best_dev = -1.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dev = std::abs(dy * (static_cast<double>(i) - x1) -
                                dx * (sorted_k_distances[i] - y1));
    if (dev >= best_dev) {
      best_dev = dev;
      best = i;
    }
  }
  suggestion.eps = sorted_k_distances[best];
  return suggestion;
}

int default_min_pts(int dimensions) {
  if (dimensions < 1) throw std::invalid_argument("default_min_pts: dimensions must be >= 1");
  return 2 * dimensions;
}

}  // namespace fmcw
