#pragma once

#include <complex>
#include <cstddef>

#include "fmcw/array.hpp"
#include "fmcw/constants.hpp"
#include "fmcw/scene.hpp"

namespace fmcw {

enum class WindowKind {
  kRectangular,
  kHann,  // periodic Hann, 0.5 - 0.5*cos(2*pi*n/N)
};

// Everything needed to map cube indices back to physical units. Range bins
// are plain DFT indices; Doppler and angle axes are center-shifted, so their
// "centered bin" is the index minus floor(size/2).
struct CubeGeometry {
  std::size_t range_fft_size = 0;
  std::size_t doppler_fft_size = 0;
  std::size_t angle_fft_size = 1;
  double sample_rate_hz = 0.0;
  double slope_hz_per_s = 0.0;
  double chirp_duration_s = 0.0;
  double bandwidth_hz = 0.0;
  double carrier_frequency_hz = 0.0;
  int rx_count = 1;
  double rx_spacing_wavelengths = 0.5;
  double c_mps = kSpeedOfLight;

  double wavelength_m() const { return c_mps / carrier_frequency_hz; }

  // Range of a (non-shifted) range bin: (bin * fs / N) * c / (2 * S).
  double range_at(std::size_t range_bin) const;

  // Velocity of a centered Doppler bin: f_D = b / (N * T_chirp), v = f_D*l/2.
  double velocity_at(std::ptrdiff_t doppler_bin_centered) const;

  // arcsin argument of a centered angle bin: (b / N) / spacing. Zero-padding
  // makes some outer bins map outside [-1, 1]; those are invalid directions.
  double angle_sine_at(std::ptrdiff_t angle_bin_centered) const;
  bool angle_bin_valid(std::size_t angle_bin) const;
  // Azimuth in degrees of a shifted angle bin; throws std::domain_error for
  // bins whose sine falls outside [-1, 1].
  double angle_deg_at(std::size_t angle_bin) const;

  // c / (2 * B): the classic range resolution of the sweep.
  double range_resolution_m() const;
  // Velocity step between adjacent Doppler bins.
  double velocity_resolution_mps() const;
};

// Magnitude map after range + Doppler processing, averaged over rx.
// Rows are range bins, columns are center-shifted Doppler bins.
struct RangeDopplerMap {
  Array2D<double> magnitudes;  // [range_bin][doppler_bin]
  CubeGeometry geometry;
};

// Range x Doppler x angle magnitude cube (angle axis has size 1 when only a
// single rx element is present).
struct RadarCube {
  Array3D<double> magnitudes;  // [range][doppler][angle]
  CubeGeometry geometry;
};

// Range-Doppler map rescaled to [0, 1] for rendering.
struct Heatmap {
  Array2D<double> values;
};

struct DspOptions {
  std::size_t range_fft_size = 0;    // 0 = samples per chirp
  std::size_t doppler_fft_size = 0;  // 0 = chirp count
  std::size_t angle_fft_size = 0;    // 0 = max(64, rx_count), or 1 when rx_count == 1
  WindowKind window = WindowKind::kRectangular;
};

// Stage 1: DFT along fast time. Output is [rx][chirp][range_bin]. For
// complex-baseband cubes all fft_size bins are kept; for real-valued cubes
// only the first floor(fft_size/2) (the upper half mirrors the lower).
Array3D<std::complex<double>> range_fft(const RawFrameCube& cube,
                                        std::size_t fft_size = 0,
                                        WindowKind window = WindowKind::kRectangular);

// Stage 2: DFT along slow time (chirps) followed by a center shift. Input is
// the range_fft output [rx][chirp][range_bin]; output is transposed to
// [rx][range_bin][doppler_bin] with Doppler bin floor(N/2) = zero velocity.
Array3D<std::complex<double>> doppler_fft(const Array3D<std::complex<double>>& range_bins,
                                          std::size_t fft_size = 0,
                                          WindowKind window = WindowKind::kRectangular);

// Stage 3: DFT across rx elements (zero-padded to fft_size) plus center
// shift, yielding magnitudes [range][doppler][angle].
RadarCube angle_fft(const Array3D<std::complex<double>>& doppler_cube,
                    const CubeGeometry& geometry, std::size_t fft_size = 0);

// rx-averaged magnitude map from the doppler_fft output.
RangeDopplerMap range_doppler_map(const Array3D<std::complex<double>>& doppler_cube,
                                  const CubeGeometry& geometry);

// Full chain with shared geometry bookkeeping.
struct ProcessedFrame {
  Array3D<std::complex<double>> doppler_cube;  // [rx][range][doppler]
  RangeDopplerMap rd_map;
  RadarCube cube;
};
ProcessedFrame process_frame(const RawFrameCube& cube, const DspOptions& options);

// Geometry the chain will produce for a given cube + options (also used when
// loading maps back from disk).
CubeGeometry make_geometry(const RawFrameCube& cube, const DspOptions& options);

// Standalone conversions mirroring CubeGeometry, usable without a full chain.
double bin_to_range(std::size_t range_bin, std::size_t fft_size, double sample_rate_hz,
                    double slope_hz_per_s, double c_mps = kSpeedOfLight);
double bin_to_velocity(std::ptrdiff_t doppler_bin_centered, std::size_t fft_size,
                       double chirp_duration_s, double carrier_hz,
                       double c_mps = kSpeedOfLight);

// Angle of arrival (degrees) from the phase difference between two rx
// elements `spacing_m` apart: theta = arcsin(delta_phi * lambda / (2*pi*d)).
// Throws std::domain_error when the argument falls outside [-1, 1].
double aoa_from_phase(double delta_phi_rad, double spacing_m, double wavelength_m);

// Peak-normalized copy of the map: all values divided by the maximum, or an
// all-zero map when the maximum is 0.
Heatmap normalize_heatmap(const RangeDopplerMap& map);

}  // namespace fmcw
