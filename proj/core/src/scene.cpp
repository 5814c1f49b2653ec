#include "fmcw/scene.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "fmcw/rng.hpp"

namespace fmcw {

void Target::validate(const char* label) const {
  const std::string where(label);
  if (range_m < 0.0 || !std::isfinite(range_m)) {
    throw std::invalid_argument(where + ".range_m must be >= 0, got " +
                                std::to_string(range_m));
  }
  if (!std::isfinite(radial_velocity_mps)) {
    throw std::invalid_argument(where + ".radial_velocity_mps must be finite");
  }
  if (!(azimuth_deg > -90.0) || !(azimuth_deg < 90.0)) {
    throw std::invalid_argument(where + ".azimuth_deg must lie in (-90, 90), got " +
                                std::to_string(azimuth_deg));
  }
  if (!(amplitude > 0.0) || !std::isfinite(amplitude)) {
    throw std::invalid_argument(where + ".amplitude must be positive, got " +
                                std::to_string(amplitude));
  }
}

void SceneConfig::validate() const {
  if (!(carrier_frequency_hz > 0.0) || !std::isfinite(carrier_frequency_hz)) {
    throw std::invalid_argument("scene.carrier_frequency_hz must be positive");
  }
  if (rx_count < 1) {
    throw std::invalid_argument("scene.rx_count must be >= 1, got " +
                                std::to_string(rx_count));
  }
  if (!(rx_spacing_wavelengths > 0.0) || !std::isfinite(rx_spacing_wavelengths)) {
    throw std::invalid_argument("scene.rx_spacing_wavelengths must be positive");
  }
  if (noise_std < 0.0 || !std::isfinite(noise_std)) {
    throw std::invalid_argument("scene.noise_std must be >= 0, got " +
                                std::to_string(noise_std));
  }
  if (!(c_mps > 0.0) || !std::isfinite(c_mps)) {
    throw std::invalid_argument("scene.c_mps must be positive");
  }
  for (std::size_t i = 0; i < targets.size(); ++i) {
    targets[i].validate(("scene.targets[" + std::to_string(i) + "]").c_str());
  }
}

double beat_frequency(double slope_hz_per_s, double range_m, double c_mps) {
  return slope_hz_per_s * 2.0 * range_m / c_mps;
}

double range_from_beat(double beat_hz, double slope_hz_per_s, double c_mps) {
  return beat_hz * c_mps / (2.0 * slope_hz_per_s);
}

double doppler_shift(double radial_velocity_mps, double carrier_hz, double c_mps) {
  return 2.0 * radial_velocity_mps * carrier_hz / c_mps;
}

double velocity_from_doppler(double doppler_hz, double carrier_hz, double c_mps) {
  const double wavelength = c_mps / carrier_hz;
  return doppler_hz * wavelength / 2.0;
}

double antenna_phase(double azimuth_deg, int rx_index, double spacing_wavelengths) {
  const double azimuth_rad = azimuth_deg * kPi / 180.0;
  return 2.0 * kPi * spacing_wavelengths * static_cast<double>(rx_index) *
         std::sin(azimuth_rad);
}

RawFrameCube simulate_frame(const SceneConfig& scene, const ChirpParams& chirp) {
  scene.validate();
  chirp.validate();

  const double slope = chirp_slope(chirp);
  for (std::size_t i = 0; i < scene.targets.size(); ++i) {
    const double beat = beat_frequency(slope, scene.targets[i].range_m, scene.c_mps);
    if (beat >= chirp.sample_rate_hz) {
      throw std::invalid_argument(
          "scene.targets[" + std::to_string(i) + "]: beat frequency " +
          std::to_string(beat) + " Hz is not below sample_rate_hz " +
          std::to_string(chirp.sample_rate_hz) + " Hz; reduce range or slope");
    }
  }

  const std::size_t n_rx = static_cast<std::size_t>(scene.rx_count);
  const std::size_t n_chirps = static_cast<std::size_t>(chirp.num_chirps);
  const std::size_t n_samples = chirp.samples_per_chirp();

  // Per-target quantities that do not change with rx/chirp/sample.
  struct Echo {
    double beat_hz;
    double doppler_hz;
    double base_phase;  // 2*pi*f_start*2R/c, reduced mod 2*pi
    double sin_azimuth;
    double amplitude;
  };
  std::vector<Echo> echoes;
  echoes.reserve(scene.targets.size());
  for (const Target& t : scene.targets) {
    Echo e;
    e.beat_hz = beat_frequency(slope, t.range_m, scene.c_mps);
    e.doppler_hz = doppler_shift(t.radial_velocity_mps, scene.carrier_frequency_hz,
                                 scene.c_mps);
    // The round-trip carrier phase is huge (f_start * 2R/c ~ 1e4 cycles);
    // reduce the cycle count mod 1 before scaling by 2*pi to keep precision.
    const double cycles = chirp.f_start_hz * 2.0 * t.range_m / scene.c_mps;
    e.base_phase = 2.0 * kPi * (cycles - std::floor(cycles));
    e.sin_azimuth = std::sin(t.azimuth_deg * kPi / 180.0);
    e.amplitude = t.amplitude;
    echoes.push_back(e);
  }

  RawFrameCube cube;
  cube.samples = Array3D<std::complex<double>>(n_rx, n_chirps, n_samples);
  cube.chirp_params = chirp;
  cube.domain = ChirpRepresentation::kComplexBaseband;
  cube.scene_meta = scene;

  for (std::size_t rx = 0; rx < n_rx; ++rx) {
    for (std::size_t k = 0; k < n_chirps; ++k) {
      std::complex<double>* block = &cube.samples(rx, k, 0);

      for (const Echo& e : echoes) {
        const double chirp_phase =
            2.0 * kPi * e.doppler_hz * chirp.duration_s * static_cast<double>(k);
        const double rx_phase = 2.0 * kPi * scene.rx_spacing_wavelengths *
                                static_cast<double>(rx) * e.sin_azimuth;
        const double static_phase = e.base_phase + chirp_phase + rx_phase;
        const double omega = 2.0 * kPi * e.beat_hz / chirp.sample_rate_hz;
        for (std::size_t n = 0; n < n_samples; ++n) {
          block[n] += e.amplitude *
                      std::polar(1.0, static_phase + omega * static_cast<double>(n));
        }
      }

      if (scene.noise_std > 0.0) {
        SplitMix64 rng(substream_seed(scene.rng_seed, static_cast<std::uint32_t>(rx),
                                      static_cast<std::uint32_t>(k)));
        for (std::size_t n = 0; n < n_samples; ++n) {
          const auto [g0, g1] = rng.next_gaussian_pair();
          block[n] += std::complex<double>(scene.noise_std * g0, scene.noise_std * g1);
        }
      }
    }
  }
  return cube;
}

}  // namespace fmcw
