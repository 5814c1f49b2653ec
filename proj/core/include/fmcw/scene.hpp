#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

#include "fmcw/array.hpp"
#include "fmcw/constants.hpp"
#include "fmcw/waveform.hpp"

namespace fmcw {

// One ideal point scatterer.
struct Target {
  double range_m = 0.0;
  // Radial velocity, positive when the target recedes from the radar.
  double radial_velocity_mps = 0.0;
  // Azimuth in degrees, restricted to the open interval (-90, 90) so that
  // sin(azimuth) is invertible.
  double azimuth_deg = 0.0;
  // Linear echo amplitude.
  double amplitude = 1.0;

  void validate(const char* label = "target") const;
};

// Radar front-end plus environment for one simulation.
struct SceneConfig {
  std::vector<Target> targets;
  double carrier_frequency_hz = 77.0e9;
  int rx_count = 1;
  // Uniform linear array pitch in wavelengths (0.5 = half-wavelength).
  double rx_spacing_wavelengths = 0.5;
  // Standard deviation of the additive Gaussian noise, per real/imaginary
  // component of each complex sample. 0 disables noise entirely.
  double noise_std = 0.0;
  std::uint64_t rng_seed = 0;
  // Propagation speed. Defaults to the exact SI value; set to 3.0e8 to
  // reproduce worked examples that use the rounded constant.
  double c_mps = kSpeedOfLight;

  double wavelength_m() const { return c_mps / carrier_frequency_hz; }
  void validate() const;
};

// Simulated dechirped receive data for one frame.
struct RawFrameCube {
  // [rx][chirp][sample]
  Array3D<std::complex<double>> samples;
  ChirpParams chirp_params;
  ChirpRepresentation domain = ChirpRepresentation::kComplexBaseband;
  std::optional<SceneConfig> scene_meta;
};

// Dechirped beat frequency of a stationary target: f_b = S * 2R / c.
double beat_frequency(double slope_hz_per_s, double range_m, double c_mps = kSpeedOfLight);

// Range from a measured beat frequency: R = f_b * c / (2 * S).
double range_from_beat(double beat_hz, double slope_hz_per_s, double c_mps = kSpeedOfLight);

// Doppler shift of a scatterer receding at v: f_D = 2 * v * f_carrier / c.
double doppler_shift(double radial_velocity_mps, double carrier_hz,
                     double c_mps = kSpeedOfLight);

// Radial velocity from a measured Doppler shift: v = f_D * lambda / 2.
double velocity_from_doppler(double doppler_hz, double carrier_hz,
                             double c_mps = kSpeedOfLight);

// Phase advance at ULA element `rx_index` for a plane wave from `azimuth_deg`:
// 2*pi * spacing_wavelengths * rx_index * sin(azimuth).
double antenna_phase(double azimuth_deg, int rx_index, double spacing_wavelengths);

// Synthesize the dechirped frame for a scene under the stop-and-hop model:
// within one chirp a target contributes a complex tone at its beat frequency;
// across chirps its phase advances by 2*pi*f_D*T_chirp; across rx elements by
// the ULA phase; plus a fixed offset 2*pi*f_start*2R/c.
//
// Noise is complex circular Gaussian (noise_std per component) drawn from a
// splitmix64 substream keyed by (rng_seed, rx, chirp), so the cube is
// bit-identical for a given seed regardless of fill order.
//
// Preconditions checked: scene and chirp validate; every target's beat
// frequency is below sample_rate_hz (error names the offending target).
RawFrameCube simulate_frame(const SceneConfig& scene, const ChirpParams& chirp);

}  // namespace fmcw
