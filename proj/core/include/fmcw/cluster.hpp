#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "fmcw/detect.hpp"

namespace fmcw {

inline constexpr int kNoiseLabel = -1;

struct DbscanParams {
  // Neighborhood radius. Membership is inclusive: dist <= eps.
  double eps = 1.0;
  // Minimum neighborhood size for a core point. The count INCLUDES the point
  // itself, so min_pts = 1 marks every point core.
  int min_pts = 6;
  // Optional per-axis multipliers applied before the Euclidean distance,
  // e.g. to weight the velocity axis differently from x/y.
  std::optional<std::array<double, 3>> axis_scales;
  // When set, neighbor queries go through a uniform cell grid instead of the
  // O(n^2) scan. Labels are identical either way; this is purely a speedup.
  bool use_grid_index = false;

  void validate() const;
};

struct Labeling {
  // labels[i] is a cluster id (0-based, dense) or kNoiseLabel.
  std::vector<int> labels;
  std::vector<bool> core_flags;
  int cluster_count = 0;
};

// Deterministic DBSCAN over 3-D points. Points are visited in input order;
// each unvisited core point seeds the next cluster id, and the cluster is
// grown breadth-first through core points' neighborhoods. Border points keep
// the first cluster that reaches them in this scan order. Distances use the
// Euclidean metric after axis scaling; neighborhood tests are dist <= eps.
Labeling dbscan(std::span<const std::array<double, 3>> points, const DbscanParams& params);

// Convenience overload over radar points (x, y, velocity-as-z).
Labeling dbscan(std::span<const RadarPoint> points, const DbscanParams& params);

// Distance from each point to its k-th nearest OTHER point (self excluded),
// returned sorted ascending. Throws std::invalid_argument when k >= n.
std::vector<double> k_distance(std::span<const std::array<double, 3>> points, int k,
                               const std::optional<std::array<double, 3>>& axis_scales =
                                   std::nullopt);
std::vector<double> k_distance(std::span<const RadarPoint> points, int k,
                               const std::optional<std::array<double, 3>>& axis_scales =
                                   std::nullopt);

struct EpsSuggestion {
  double eps = 0.0;
  // True when the curve carried no elbow information (all distances equal,
  // or fewer than 3 samples); eps is still the best available value.
  bool degenerate = false;
};

// Knee of the sorted k-distance curve: the sample with the largest
// perpendicular deviation from the chord joining the first and last samples.
// Ties resolve toward the larger index (larger eps, i.e. the safer choice).
EpsSuggestion suggest_eps(std::span<const double> sorted_k_distances);

// Rule-of-thumb minimum cluster size: 2 * dimensions.
int default_min_pts(int dimensions);

}  // namespace fmcw
