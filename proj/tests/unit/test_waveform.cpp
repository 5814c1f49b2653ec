#include "fmcw/waveform.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include <doctest.h>

#include "support/oracles.hpp"

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

fmcw::ChirpParams textbook_chirp() {
  // The classic automotive example: 200 MHz over 1 ms sampled at 1 MHz.
  fmcw::ChirpParams p;
  p.f_start_hz = 77.0e9;
  p.bandwidth_hz = 200.0e6;
  p.duration_s = 1.0e-3;
  p.sample_rate_hz = 1.0e6;
  p.num_chirps = 4;
  return p;
}

}  // namespace

TEST_CASE("chirp slope is bandwidth over duration") {
  fmcw::ChirpParams p = textbook_chirp();
  CHECK(fmcw::chirp_slope(p) == doctest::Approx(2.0e11).epsilon(1e-12));

  fmcw::ChirpParams d;  // defaults: 150 MHz over 20 us
  CHECK(fmcw::chirp_slope(d) == doctest::Approx(7.5e12).epsilon(1e-12));
}

TEST_CASE("instantaneous frequency ramps linearly across the sweep") {
  fmcw::ChirpParams p = textbook_chirp();
  CHECK(fmcw::instantaneous_frequency(p, 0.0) == doctest::Approx(77.0e9));
  CHECK(fmcw::instantaneous_frequency(p, p.duration_s) ==
        doctest::Approx(77.0e9 + 200.0e6));
  CHECK(fmcw::instantaneous_frequency(p, 0.5e-3) ==
        doctest::Approx(77.0e9 + 100.0e6));

  CHECK_THROWS_AS((void)fmcw::instantaneous_frequency(p, -1.0e-9), std::domain_error);
  CHECK_THROWS_AS((void)fmcw::instantaneous_frequency(p, p.duration_s + 1.0e-9),
                  std::domain_error);
}

TEST_CASE("samples_per_chirp floors fs*T and survives FP representation") {
  fmcw::ChirpParams p;
  p.sample_rate_hz = 1.0e6;
  p.duration_s = 1.0e-3;
  CHECK(p.samples_per_chirp() == 1000);

  // 1e7 * 107e-7 = 106.99999999999999 in doubles; the intended count is 107.
  p.sample_rate_hz = 1.0e7;
  p.duration_s = 107.0e-7;
  CHECK(p.samples_per_chirp() == 107);

  // A genuinely fractional product still floors.
  p.sample_rate_hz = 1000.0;
  p.duration_s = 1.0015e-3;
  CHECK(p.samples_per_chirp() == 1);
}

TEST_CASE("parameter validation names the offending field") {
  fmcw::ChirpParams p = textbook_chirp();
  CHECK_NOTHROW(p.validate());

  p.bandwidth_hz = -1.0;
  CHECK_THROWS_WITH_AS(p.validate(), doctest::Contains("chirp.bandwidth"),
                       std::invalid_argument);

  p = textbook_chirp();
  p.duration_s = 0.0;
  CHECK_THROWS_WITH_AS(p.validate(), doctest::Contains("chirp.duration"),
                       std::invalid_argument);

  p = textbook_chirp();
  p.sample_rate_hz = 0.0;
  CHECK_THROWS_WITH_AS(p.validate(), doctest::Contains("chirp.sample_rate"),
                       std::invalid_argument);

  p = textbook_chirp();
  p.num_chirps = 0;
  CHECK_THROWS_WITH_AS(p.validate(), doctest::Contains("chirp.num_chirps"),
                       std::invalid_argument);

  p = textbook_chirp();
  p.sample_rate_hz = 1000.0;  // only 1 sample per sweep
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}

TEST_CASE("complex baseband chirp matches exp(j*pi*S*t^2) sample by sample") {
  fmcw::ChirpParams p;
  p.f_start_hz = 0.0;
  p.bandwidth_hz = 4000.0;
  p.duration_s = 0.05;
  p.sample_rate_hz = 16000.0;
  auto samples = fmcw::synthesize_chirp(p, fmcw::ChirpRepresentation::kComplexBaseband);
  REQUIRE(samples.size() == p.samples_per_chirp());
  CHECK(samples[0].real() == doctest::Approx(1.0));
  CHECK(samples[0].imag() == doctest::Approx(0.0));

  const double slope = fmcw::chirp_slope(p);
  for (std::size_t n = 0; n < samples.size(); n += 97) {
    const double t = static_cast<double>(n) / p.sample_rate_hz;
    const double phase = kPi * slope * t * t;  // 2*pi * (S/2) * t^2
    CHECK(std::abs(samples[n] - std::polar(1.0, phase)) < 1e-9);
    CHECK(std::abs(samples[n]) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("real chirp frequency measured by zero crossings tracks the ramp") {
  // Sweep 0..100 Hz over 1 s: the instantaneous frequency at t=0.5 s is 50 Hz.
  fmcw::ChirpParams p;
  p.f_start_hz = 0.0;
  p.bandwidth_hz = 100.0;
  p.duration_s = 1.0;
  p.sample_rate_hz = 10000.0;
  auto samples = fmcw::synthesize_chirp(p, fmcw::ChirpRepresentation::kReal);
  REQUIRE(samples.size() == 10000);
  CHECK(samples[0].real() == doctest::Approx(0.0));  // sin(0)
  for (const auto& s : samples) CHECK(s.imag() == 0.0);

  // 0.1 s window centered on t = 0.5 s.
  std::vector<double> window;
  for (std::size_t n = 4500; n < 5500; ++n) window.push_back(samples[n].real());
  const double measured = oracles::zero_crossing_frequency(window, p.sample_rate_hz);
  CHECK(measured == doctest::Approx(50.0).epsilon(0.02));
  CHECK(fmcw::instantaneous_frequency(p, 0.5) == doctest::Approx(50.0));
}

TEST_CASE("real RF synthesis enforces Nyquist, baseband-real does not") {
  fmcw::ChirpParams p = textbook_chirp();  // f_start 77 GHz, fs 1 MHz
  CHECK_THROWS_AS((void)fmcw::synthesize_chirp(p, fmcw::ChirpRepresentation::kReal),
                  std::invalid_argument);
  CHECK_NOTHROW((void)fmcw::synthesize_chirp(p, fmcw::ChirpRepresentation::kComplexBaseband));

  // Baseband-real reinterprets f_start as an offset after mixing, so the same
  // parameter set synthesizes fine once f_start is folded down.
  fmcw::ChirpParams folded = p;
  folded.f_start_hz = 0.0;
  auto samples = fmcw::synthesize_chirp(folded, fmcw::ChirpRepresentation::kBasebandReal);
  CHECK(samples.size() == folded.samples_per_chirp());

  // And kReal accepts parameters that genuinely satisfy fs > 2*(f_start + B).
  fmcw::ChirpParams audio;
  audio.f_start_hz = 100.0;
  audio.bandwidth_hz = 200.0;
  audio.duration_s = 0.1;
  audio.sample_rate_hz = 10000.0;
  CHECK_NOTHROW((void)fmcw::synthesize_chirp(audio, fmcw::ChirpRepresentation::kReal));
}

TEST_CASE("synthesized chirps are deterministic") {
  fmcw::ChirpParams p;
  p.f_start_hz = 0.0;
  p.bandwidth_hz = 1.0e6;
  p.duration_s = 1.0e-4;
  p.sample_rate_hz = 2.0e6;
  auto a = fmcw::synthesize_chirp(p, fmcw::ChirpRepresentation::kComplexBaseband);
  auto b = fmcw::synthesize_chirp(p, fmcw::ChirpRepresentation::kComplexBaseband);
  CHECK(a == b);
}
