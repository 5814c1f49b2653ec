#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace fmcw {

// Sample domain produced by synthesize_chirp.
enum class ChirpRepresentation {
  // exp(j * 2*pi * (S/2) * t^2): the carrier term f_start*t is removed, as
  // after an ideal quadrature mixer. Sampling needs fs to cover the sweep
  // bandwidth only, so this is the default for simulation.
  kComplexBaseband,
  // sin(2*pi * (f_start*t + (S/2)*t^2)) at RF. Rejected when the final
  // instantaneous frequency f_start + B violates Nyquist for the given fs.
  kReal,
  // Same real sinusoid but f_start is interpreted as an already-mixed-down
  // offset, so no Nyquist check is applied against the RF carrier. Useful
  // for reproducing low-rate textbook plots of RF-parameterised chirps.
  kBasebandReal,
};

// Linear-FM (chirp) sweep parameters. The instantaneous frequency ramps from
// f_start to f_start + bandwidth over one sweep of `duration_s`, giving the
// slope S = bandwidth / duration.
struct ChirpParams {
  double f_start_hz = 77.0e9;
  double bandwidth_hz = 150.0e6;
  double duration_s = 20.0e-6;
  double sample_rate_hz = 10.0e6;
  int num_chirps = 128;

  // Samples in one sweep: floor(sample_rate * duration). validate() rejects
  // parameter sets that yield fewer than 2.
  std::size_t samples_per_chirp() const;

  // Throws std::invalid_argument naming the offending field.
  void validate() const;
};

// Sweep slope S = bandwidth / duration, Hz/s.
double chirp_slope(const ChirpParams& params);

// f(t) = f_start + S * t for t in [0, duration]; throws std::domain_error
// outside the sweep.
double instantaneous_frequency(const ChirpParams& params, double t_s);

// One sampled sweep, t_n = n / sample_rate for n = 0 .. samples_per_chirp-1.
// Real representations are returned with zero imaginary parts.
std::vector<std::complex<double>> synthesize_chirp(const ChirpParams& params,
                                                   ChirpRepresentation representation);

}  // namespace fmcw
