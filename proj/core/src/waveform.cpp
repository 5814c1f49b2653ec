#include "fmcw/waveform.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "fmcw/constants.hpp"

namespace fmcw {

std::size_t ChirpParams::samples_per_chirp() const {
  // floor(fs * T), with a relative nudge so products that are mathematically
  // integral (e.g. 1e7 * 107e-7 = 106.99999999999999 in binary) do not lose
  // their last sample to rounding.
  const double product = sample_rate_hz * duration_s;
  if (!(product > 0.0) || !std::isfinite(product)) return 0;
  return static_cast<std::size_t>(std::floor(product * (1.0 + 1e-15)));
}

void ChirpParams::validate() const {
  if (!(bandwidth_hz > 0.0) || !std::isfinite(bandwidth_hz)) {
    throw std::invalid_argument("chirp.bandwidth_hz must be positive, got " +
                                std::to_string(bandwidth_hz));
  }
  if (!(duration_s > 0.0) || !std::isfinite(duration_s)) {
    throw std::invalid_argument("chirp.duration_s must be positive, got " +
                                std::to_string(duration_s));
  }
  if (!(sample_rate_hz > 0.0) || !std::isfinite(sample_rate_hz)) {
    throw std::invalid_argument("chirp.sample_rate_hz must be positive, got " +
                                std::to_string(sample_rate_hz));
  }
  if (f_start_hz < 0.0 || !std::isfinite(f_start_hz)) {
    throw std::invalid_argument("chirp.f_start_hz must be non-negative, got " +
                                std::to_string(f_start_hz));
  }
  if (num_chirps < 1) {
    throw std::invalid_argument("chirp.num_chirps must be >= 1, got " +
                                std::to_string(num_chirps));
  }
  if (samples_per_chirp() < 2) {
    throw std::invalid_argument(
        "chirp: sample_rate_hz * duration_s yields " +
        std::to_string(samples_per_chirp()) +
        " samples per chirp; at least 2 are required");
  }
}

double chirp_slope(const ChirpParams& params) {
  return params.bandwidth_hz / params.duration_s;
}

double instantaneous_frequency(const ChirpParams& params, double t_s) {
  if (t_s < 0.0 || t_s > params.duration_s) {
    throw std::domain_error("instantaneous_frequency: t outside [0, duration]");
  }
  return params.f_start_hz + chirp_slope(params) * t_s;
}

std::vector<std::complex<double>> synthesize_chirp(const ChirpParams& params,
                                                   ChirpRepresentation representation) {
  params.validate();
  if (representation == ChirpRepresentation::kReal) {
    // A real sampled sinusoid needs fs > 2 * f_max; the sweep tops out at
    // f_start + B.
    const double f_max = params.f_start_hz + params.bandwidth_hz;
    if (params.sample_rate_hz <= 2.0 * f_max) {
      throw std::invalid_argument(
          "chirp: real representation requires sample_rate_hz > 2 * (f_start_hz "
          "+ bandwidth_hz) = " +
          std::to_string(2.0 * f_max) + " Hz, got " +
          std::to_string(params.sample_rate_hz) + " Hz");
    }
  }

  const std::size_t n_samples = params.samples_per_chirp();
  const double slope = chirp_slope(params);
  std::vector<std::complex<double>> samples(n_samples);
  for (std::size_t n = 0; n < n_samples; ++n) {
    const double t = static_cast<double>(n) / params.sample_rate_hz;
    switch (representation) {
      case ChirpRepresentation::kComplexBaseband: {
        const double phase = 2.0 * kPi * 0.5 * slope * t * t;
        samples[n] = std::polar(1.0, phase);
        break;
      }
      case ChirpRepresentation::kReal:
      case ChirpRepresentation::kBasebandReal: {
        const double phase = 2.0 * kPi * (params.f_start_hz * t + 0.5 * slope * t * t);
        samples[n] = std::complex<double>(std::sin(phase), 0.0);
        break;
      }
    }
  }
  return samples;
}

}  // namespace fmcw
