#pragma once

#include <cstddef>
#include <vector>

#include "fmcw/dsp.hpp"

namespace fmcw {

// One detected peak cell in the processed cube.
struct Detection {
  std::size_t range_bin = 0;
  std::size_t doppler_bin = 0;  // center-shifted index
  std::size_t angle_bin = 0;    // center-shifted index; 0 when the axis is trivial
  double magnitude = 0.0;
};

struct DetectPolicy {
  // Threshold = median + factor * (1.4826 * MAD) over all cube cells. The
  // 1.4826 scaling makes the MAD a consistent sigma estimate for Gaussian
  // noise, so `threshold_factor` reads as "sigmas above the median".
  double threshold_factor = 8.0;
  // Keep at most this many peaks (strongest first).
  std::size_t max_peaks = 64;

  void validate() const;
};

// Robust noise-floor statistics of a magnitude cube.
struct NoiseFloor {
  double median = 0.0;
  double mad_sigma = 0.0;  // 1.4826 * median(|x - median|)
  double threshold(double factor) const { return median + factor * mad_sigma; }
};
NoiseFloor estimate_noise_floor(const std::vector<double>& magnitudes);

// Cells that are strict local maxima over their full neighborhood (8
// neighbors when the angle axis is trivial, 26 otherwise; out-of-grid
// neighbors are ignored) AND >= the robust threshold. Sorted by descending
// magnitude; exact ties break by ascending (range, doppler, angle); truncated
// to max_peaks.
std::vector<Detection> detect_peaks(const RadarCube& cube, const DetectPolicy& policy);

// Same policy on a 2-D range-Doppler map (angle_bin = 0 on every detection).
std::vector<Detection> detect_peaks(const RangeDopplerMap& map, const DetectPolicy& policy);

// One Cartesian point per detection. The third coordinate carries the radial
// velocity, NOT height: x = R*cos(az), y = R*sin(az), z = v. Downstream
// clustering treats velocity as a first-class separating feature.
struct RadarPoint {
  double x_m = 0.0;
  double y_m = 0.0;
  double v_mps = 0.0;  // doubles as the point's z coordinate
  double magnitude = 0.0;
};

// Convert detections to points. Detections whose angle bin has no physical
// direction (zero-padding artifacts outside |sin| <= 1) are skipped.
std::vector<RadarPoint> to_point_cloud(const std::vector<Detection>& detections,
                                       const CubeGeometry& geometry);

}  // namespace fmcw
