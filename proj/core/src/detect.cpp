#include "fmcw/detect.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <tuple>

#include "fmcw/fft.hpp"

namespace fmcw {

namespace {

double median_of(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("median of empty set");
  const std::size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + mid, values.end());
  double m = values[mid];
  if (values.size() % 2 == 0) {
    // Lower-half maximum; nth_element left it in the first `mid` elements.
    const double lower = *std::max_element(values.begin(), values.begin() + mid);
    m = 0.5 * (lower + m);
  }
  return m;
}

void sort_and_truncate(std::vector<Detection>& peaks, std::size_t max_peaks) {
  std::sort(peaks.begin(), peaks.end(), [](const Detection& a, const Detection& b) {
    if (a.magnitude != b.magnitude) return a.magnitude > b.magnitude;
    return std::tie(a.range_bin, a.doppler_bin, a.angle_bin) <
           std::tie(b.range_bin, b.doppler_bin, b.angle_bin);
  });
  if (peaks.size() > max_peaks) peaks.resize(max_peaks);
}

}  // namespace

void DetectPolicy::validate() const {
  if (!(threshold_factor >= 0.0) || !std::isfinite(threshold_factor)) {
    throw std::invalid_argument("detect.threshold_factor must be >= 0");
  }
  if (max_peaks == 0) {
    throw std::invalid_argument("detect.max_peaks must be >= 1");
  }
}

NoiseFloor estimate_noise_floor(const std::vector<double>& magnitudes) {
  NoiseFloor nf;
  nf.median = median_of(magnitudes);
  std::vector<double> deviations(magnitudes.size());
  for (std::size_t i = 0; i < magnitudes.size(); ++i) {
    deviations[i] = std::abs(magnitudes[i] - nf.median);
  }
  nf.mad_sigma = 1.4826 * median_of(std::move(deviations));
  return nf;
}

std::vector<Detection> detect_peaks(const RadarCube& cube, const DetectPolicy& policy) {
  policy.validate();
  const Array3D<double>& m = cube.magnitudes;
  if (m.empty()) throw std::invalid_argument("detect_peaks: empty cube");

  const NoiseFloor nf = estimate_noise_floor(m.storage());
  const double threshold = nf.threshold(policy.threshold_factor);

  const std::ptrdiff_t nr = static_cast<std::ptrdiff_t>(m.dim0());
  const std::ptrdiff_t nd = static_cast<std::ptrdiff_t>(m.dim1());
  const std::ptrdiff_t na = static_cast<std::ptrdiff_t>(m.dim2());

  std::vector<Detection> peaks;
  for (std::ptrdiff_t r = 0; r < nr; ++r) {
    for (std::ptrdiff_t d = 0; d < nd; ++d) {
      for (std::ptrdiff_t a = 0; a < na; ++a) {
        const double v = m(r, d, a);
        if (v < threshold) continue;

        // Strict local maximum over all in-grid neighbors. With na == 1 the
        // angle offsets collapse and this is the plain 2-D 8-neighborhood.
        bool is_peak = true;
        for (std::ptrdiff_t dr = -1; dr <= 1 && is_peak; ++dr) {
          for (std::ptrdiff_t dd = -1; dd <= 1 && is_peak; ++dd) {
            for (std::ptrdiff_t da = -1; da <= 1 && is_peak; ++da) {
              if (dr == 0 && dd == 0 && da == 0) continue;
              const std::ptrdiff_t rr = r + dr, dn = d + dd, an = a + da;
              if (rr < 0 || rr >= nr || dn < 0 || dn >= nd || an < 0 || an >= na) {
                continue;
              }
              if (m(rr, dn, an) >= v) is_peak = false;
            }
          }
        }
        if (is_peak) {
          peaks.push_back({static_cast<std::size_t>(r), static_cast<std::size_t>(d),
                           static_cast<std::size_t>(a), v});
        }
      }
    }
  }

  sort_and_truncate(peaks, policy.max_peaks);
  return peaks;
}

std::vector<Detection> detect_peaks(const RangeDopplerMap& map,
                                    const DetectPolicy& policy) {
  // Reuse the cube path by viewing the map as a cube with a trivial angle
  // axis; the 26-neighborhood degenerates to the 2-D 8-neighborhood.
  RadarCube cube;
  cube.geometry = map.geometry;
  cube.geometry.angle_fft_size = 1;
  cube.magnitudes = Array3D<double>(map.magnitudes.rows(), map.magnitudes.cols(), 1);
  cube.magnitudes.storage() = map.magnitudes.storage();
  return detect_peaks(cube, policy);
}

std::vector<RadarPoint> to_point_cloud(const std::vector<Detection>& detections,
                                       const CubeGeometry& geometry) {
  std::vector<RadarPoint> points;
  points.reserve(detections.size());
  for (const Detection& det : detections) {
    double azimuth_deg = 0.0;
    if (geometry.angle_fft_size > 1) {
      if (!geometry.angle_bin_valid(det.angle_bin)) continue;
      azimuth_deg = geometry.angle_deg_at(det.angle_bin);
    }
    const double range = geometry.range_at(det.range_bin);
    const double velocity =
        geometry.velocity_at(centered_bin(det.doppler_bin, geometry.doppler_fft_size));
    const double azimuth_rad = azimuth_deg * kPi / 180.0;
    RadarPoint p;
    p.x_m = range * std::cos(azimuth_rad);
    p.y_m = range * std::sin(azimuth_rad);
    p.v_mps = velocity;
    p.magnitude = det.magnitude;
    points.push_back(p);
  }
  return points;
}

}  // namespace fmcw
