#include "fmcw/dsp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "fmcw/fft.hpp"

namespace fmcw {

namespace {

std::vector<double> make_window(WindowKind kind, std::size_t length) {
  std::vector<double> w(length, 1.0);
  if (kind == WindowKind::kHann && length > 0) {
    for (std::size_t n = 0; n < length; ++n) {
      w[n] = 0.5 - 0.5 * std::cos(2.0 * kPi * static_cast<double>(n) /
                                  static_cast<double>(length));
    }
  }
  return w;
}

std::size_t resolve_fft_size(std::size_t requested, std::size_t data_length,
                             const char* what) {
  if (requested == 0) return data_length;
  if (requested < data_length) {
    throw std::invalid_argument(std::string(what) +
                                ": fft size smaller than the data length");
  }
  return requested;
}

}  // namespace

double CubeGeometry::range_at(std::size_t range_bin) const {
  return bin_to_range(range_bin, range_fft_size, sample_rate_hz, slope_hz_per_s, c_mps);
}

double CubeGeometry::velocity_at(std::ptrdiff_t doppler_bin_centered) const {
  return bin_to_velocity(doppler_bin_centered, doppler_fft_size, chirp_duration_s,
                         carrier_frequency_hz, c_mps);
}

double CubeGeometry::angle_sine_at(std::ptrdiff_t angle_bin_centered) const {
  const double spatial_freq = static_cast<double>(angle_bin_centered) /
                              static_cast<double>(angle_fft_size);
  return spatial_freq / rx_spacing_wavelengths;
}

bool CubeGeometry::angle_bin_valid(std::size_t angle_bin) const {
  const double s = angle_sine_at(centered_bin(angle_bin, angle_fft_size));
  return s >= -1.0 && s <= 1.0;
}

double CubeGeometry::angle_deg_at(std::size_t angle_bin) const {
  const double s = angle_sine_at(centered_bin(angle_bin, angle_fft_size));
  if (s < -1.0 || s > 1.0) {
    throw std::domain_error("angle bin maps outside [-1, 1]; no physical direction");
  }
  return std::asin(s) * 180.0 / kPi;
}

double CubeGeometry::range_resolution_m() const {
  return c_mps / (2.0 * bandwidth_hz);
}

double CubeGeometry::velocity_resolution_mps() const {
  return bin_to_velocity(1, doppler_fft_size, chirp_duration_s, carrier_frequency_hz,
                         c_mps);
}

double bin_to_range(std::size_t range_bin, std::size_t fft_size, double sample_rate_hz,
                    double slope_hz_per_s, double c_mps) {
  const double beat_hz = static_cast<double>(range_bin) * sample_rate_hz /
                         static_cast<double>(fft_size);
  return range_from_beat(beat_hz, slope_hz_per_s, c_mps);
}

double bin_to_velocity(std::ptrdiff_t doppler_bin_centered, std::size_t fft_size,
                       double chirp_duration_s, double carrier_hz, double c_mps) {
  const double doppler_hz = static_cast<double>(doppler_bin_centered) /
                            (static_cast<double>(fft_size) * chirp_duration_s);
  return velocity_from_doppler(doppler_hz, carrier_hz, c_mps);
}

double aoa_from_phase(double delta_phi_rad, double spacing_m, double wavelength_m) {
  if (!(spacing_m > 0.0) || !(wavelength_m > 0.0)) {
    throw std::invalid_argument("aoa_from_phase: spacing and wavelength must be positive");
  }
  const double s = delta_phi_rad * wavelength_m / (2.0 * kPi * spacing_m);
  if (s < -1.0 || s > 1.0) {
    throw std::domain_error("aoa_from_phase: arcsin argument " + std::to_string(s) +
                            " outside [-1, 1]");
  }
  return std::asin(s) * 180.0 / kPi;
}

Array3D<std::complex<double>> range_fft(const RawFrameCube& cube, std::size_t fft_size,
                                        WindowKind window) {
  const std::size_t n_rx = cube.samples.dim0();
  const std::size_t n_chirps = cube.samples.dim1();
  const std::size_t n_samples = cube.samples.dim2();
  if (n_samples == 0) throw std::invalid_argument("range_fft: empty cube");

  const std::size_t size = resolve_fft_size(fft_size, n_samples, "range_fft");
  const bool real_input = cube.domain != ChirpRepresentation::kComplexBaseband;
  // Real input spectra are conjugate-symmetric; bins N/2.. duplicate 0..N/2.
  const std::size_t kept = real_input ? size / 2 : size;
  if (kept == 0) throw std::invalid_argument("range_fft: fft size too small");

  const std::vector<double> w = make_window(window, n_samples);
  Array3D<std::complex<double>> out(n_rx, n_chirps, kept);
  std::vector<std::complex<double>> buf(n_samples);
  for (std::size_t rx = 0; rx < n_rx; ++rx) {
    for (std::size_t k = 0; k < n_chirps; ++k) {
      for (std::size_t n = 0; n < n_samples; ++n) {
        buf[n] = cube.samples(rx, k, n) * w[n];
      }
      const std::vector<std::complex<double>> spec = dft(buf, size);
      for (std::size_t b = 0; b < kept; ++b) out(rx, k, b) = spec[b];
    }
  }
  return out;
}

Array3D<std::complex<double>> doppler_fft(const Array3D<std::complex<double>>& range_bins,
                                          std::size_t fft_size, WindowKind window) {
  const std::size_t n_rx = range_bins.dim0();
  const std::size_t n_chirps = range_bins.dim1();
  const std::size_t n_range = range_bins.dim2();
  if (n_chirps == 0 || n_range == 0) {
    throw std::invalid_argument("doppler_fft: empty input");
  }

  const std::size_t size = resolve_fft_size(fft_size, n_chirps, "doppler_fft");
  const std::vector<double> w = make_window(window, n_chirps);

  Array3D<std::complex<double>> out(n_rx, n_range, size);
  std::vector<std::complex<double>> buf(n_chirps);
  for (std::size_t rx = 0; rx < n_rx; ++rx) {
    for (std::size_t r = 0; r < n_range; ++r) {
      for (std::size_t k = 0; k < n_chirps; ++k) {
        buf[k] = range_bins(rx, k, r) * w[k];
      }
      const std::vector<std::complex<double>> spec = dft(buf, size);
      // Store center-shifted: zero Doppler at index floor(size/2).
      for (std::size_t k = 0; k < size; ++k) {
        out(rx, r, fftshift_index(k, size)) = spec[k];
      }
    }
  }
  return out;
}

RadarCube angle_fft(const Array3D<std::complex<double>>& doppler_cube,
                    const CubeGeometry& geometry, std::size_t fft_size) {
  const std::size_t n_rx = doppler_cube.dim0();
  const std::size_t n_range = doppler_cube.dim1();
  const std::size_t n_doppler = doppler_cube.dim2();
  if (n_rx == 0 || n_range == 0 || n_doppler == 0) {
    throw std::invalid_argument("angle_fft: empty input");
  }

  std::size_t size = fft_size;
  if (size == 0) size = n_rx == 1 ? 1 : std::max<std::size_t>(64, n_rx);
  if (size < n_rx) {
    throw std::invalid_argument("angle_fft: fft size smaller than the rx count");
  }

  RadarCube cube;
  cube.geometry = geometry;
  cube.geometry.angle_fft_size = size;
  cube.magnitudes = Array3D<double>(n_range, n_doppler, size);

  std::vector<std::complex<double>> buf(n_rx);
  for (std::size_t r = 0; r < n_range; ++r) {
    for (std::size_t d = 0; d < n_doppler; ++d) {
      for (std::size_t rx = 0; rx < n_rx; ++rx) buf[rx] = doppler_cube(rx, r, d);
      if (size == 1) {
        cube.magnitudes(r, d, 0) = std::abs(buf[0]);
        continue;
      }
      const std::vector<std::complex<double>> spec = dft(buf, size);
      for (std::size_t a = 0; a < size; ++a) {
        cube.magnitudes(r, d, fftshift_index(a, size)) = std::abs(spec[a]);
      }
    }
  }
  return cube;
}

RangeDopplerMap range_doppler_map(const Array3D<std::complex<double>>& doppler_cube,
                                  const CubeGeometry& geometry) {
  const std::size_t n_rx = doppler_cube.dim0();
  const std::size_t n_range = doppler_cube.dim1();
  const std::size_t n_doppler = doppler_cube.dim2();
  if (n_rx == 0) throw std::invalid_argument("range_doppler_map: empty input");

  RangeDopplerMap map;
  map.geometry = geometry;
  // Averaging over rx destroys direction information, so the map's geometry
  // has no angle axis. Detections taken from it decode to boresight instead
  // of inheriting the cube's angle bin count (which would place the trivial
  // angle_bin = 0 at centered bin -N/2, i.e. -90 degrees).
  map.geometry.angle_fft_size = 1;
  map.magnitudes = Array2D<double>(n_range, n_doppler);
  const double inv_rx = 1.0 / static_cast<double>(n_rx);
  for (std::size_t r = 0; r < n_range; ++r) {
    for (std::size_t d = 0; d < n_doppler; ++d) {
      double acc = 0.0;
      for (std::size_t rx = 0; rx < n_rx; ++rx) acc += std::abs(doppler_cube(rx, r, d));
      map.magnitudes(r, d) = acc * inv_rx;
    }
  }
  return map;
}

CubeGeometry make_geometry(const RawFrameCube& cube, const DspOptions& options) {
  if (!cube.scene_meta.has_value()) {
    throw std::invalid_argument(
        "processing requires scene metadata (carrier frequency, rx spacing) "
        "alongside the cube");
  }
  const SceneConfig& scene = *cube.scene_meta;
  const std::size_t n_samples = cube.samples.dim2();
  const std::size_t n_chirps = cube.samples.dim1();
  const std::size_t n_rx = cube.samples.dim0();

  CubeGeometry g;
  g.range_fft_size = resolve_fft_size(options.range_fft_size, n_samples, "range_fft");
  g.doppler_fft_size =
      resolve_fft_size(options.doppler_fft_size, n_chirps, "doppler_fft");
  g.angle_fft_size = options.angle_fft_size != 0
                         ? options.angle_fft_size
                         : (n_rx == 1 ? 1 : std::max<std::size_t>(64, n_rx));
  g.sample_rate_hz = cube.chirp_params.sample_rate_hz;
  g.slope_hz_per_s = chirp_slope(cube.chirp_params);
  g.chirp_duration_s = cube.chirp_params.duration_s;
  g.bandwidth_hz = cube.chirp_params.bandwidth_hz;
  g.carrier_frequency_hz = scene.carrier_frequency_hz;
  g.rx_count = scene.rx_count;
  g.rx_spacing_wavelengths = scene.rx_spacing_wavelengths;
  g.c_mps = scene.c_mps;
  return g;
}

ProcessedFrame process_frame(const RawFrameCube& cube, const DspOptions& options) {
  CubeGeometry geometry = make_geometry(cube, options);

  ProcessedFrame out;
  const Array3D<std::complex<double>> ranged =
      range_fft(cube, options.range_fft_size, options.window);
  out.doppler_cube = doppler_fft(ranged, options.doppler_fft_size, options.window);
  // Note: for real-domain cubes the range axis holds only the lower half of
  // the spectrum, but geometry.range_fft_size stays the full transform length
  // because bin_to_range divides by it.
  out.rd_map = range_doppler_map(out.doppler_cube, geometry);
  out.cube = angle_fft(out.doppler_cube, geometry, options.angle_fft_size);
  return out;
}

Heatmap normalize_heatmap(const RangeDopplerMap& map) {
  Heatmap hm;
  hm.values = Array2D<double>(map.magnitudes.rows(), map.magnitudes.cols());
  double max_val = 0.0;
  for (const double v : map.magnitudes.storage()) max_val = std::max(max_val, v);
  if (max_val <= 0.0) return hm;  // all-zero map stays all-zero
  const double inv = 1.0 / max_val;
  for (std::size_t i = 0; i < hm.values.size(); ++i) {
    hm.values.storage()[i] = map.magnitudes.storage()[i] * inv;
  }
  return hm;
}

}  // namespace fmcw
