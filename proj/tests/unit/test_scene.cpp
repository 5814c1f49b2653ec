#include "fmcw/scene.hpp"

#include <cmath>
#include <complex>
#include <span>
#include <stdexcept>
#include <vector>

#include <doctest.h>

#include "fmcw/fft.hpp"
#include "support/oracles.hpp"

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kRoundedC = 3.0e8;

fmcw::ChirpParams default_chirp() {
  return fmcw::ChirpParams{};  // 77 GHz / 150 MHz / 20 us / 10 MHz / 128 chirps
}

std::vector<std::complex<double>> chirp_row(const fmcw::RawFrameCube& cube,
                                            std::size_t rx, std::size_t chirp) {
  const std::size_t n = cube.samples.dim2();
  std::vector<std::complex<double>> row(n);
  for (std::size_t i = 0; i < n; ++i) row[i] = cube.samples(rx, chirp, i);
  return row;
}

}  // namespace

TEST_CASE("beat frequency round-trips range with the textbook constants") {
  // B = 200 MHz over T = 1 ms -> S = 2e11 Hz/s; a 37.5 m target beats at 50 kHz.
  const double slope = 2.0e11;
  CHECK(fmcw::beat_frequency(slope, 37.5, kRoundedC) == doctest::Approx(50.0e3).epsilon(1e-12));
  CHECK(fmcw::range_from_beat(50.0e3, slope, kRoundedC) ==
        doctest::Approx(37.5).epsilon(1e-9));

  CHECK(fmcw::beat_frequency(1.0e14, 100.0, kRoundedC) ==
        doctest::Approx(66666666.666666664).epsilon(1e-12));

  // Round trip is an identity for arbitrary inputs.
  for (double r : {0.5, 12.0, 250.0}) {
    CHECK(fmcw::range_from_beat(fmcw::beat_frequency(slope, r, kRoundedC), slope,
                                kRoundedC) == doctest::Approx(r).epsilon(1e-12));
  }
}

TEST_CASE("Doppler shift and velocity are inverse maps") {
  CHECK(fmcw::doppler_shift(10.0, 77.0e9, kRoundedC) ==
        doctest::Approx(5133.333333333333).epsilon(1e-12));
  CHECK(fmcw::velocity_from_doppler(1000.0, 77.0e9, kRoundedC) ==
        doctest::Approx(1.948051948051948).epsilon(1e-12));
  for (double v : {-31.0, 0.25, 19.0}) {
    CHECK(fmcw::velocity_from_doppler(fmcw::doppler_shift(v, 77.0e9), 77.0e9) ==
          doctest::Approx(v).epsilon(1e-12));
  }
}

TEST_CASE("ULA phase advance") {
  CHECK(fmcw::antenna_phase(30.0, 1, 0.5) == doctest::Approx(kPi / 2.0).epsilon(1e-12));
  CHECK(fmcw::antenna_phase(0.0, 3, 0.5) == doctest::Approx(0.0));
  CHECK(fmcw::antenna_phase(-30.0, 2, 0.5) == doctest::Approx(-kPi).epsilon(1e-12));
  // Linear in element index.
  CHECK(fmcw::antenna_phase(17.0, 4, 0.5) ==
        doctest::Approx(4.0 * fmcw::antenna_phase(17.0, 1, 0.5)).epsilon(1e-12));
}

TEST_CASE("scene validation rejects out-of-domain targets") {
  fmcw::SceneConfig scene;
  scene.targets.push_back({50.0, 0.0, 0.0, 1.0});
  CHECK_NOTHROW(scene.validate());

  scene.targets[0].azimuth_deg = 90.0;
  CHECK_THROWS_WITH_AS(scene.validate(), doctest::Contains("scene.targets[0]"),
                       std::invalid_argument);

  scene.targets[0] = {-1.0, 0.0, 0.0, 1.0};
  CHECK_THROWS_AS(scene.validate(), std::invalid_argument);

  scene.targets[0] = {50.0, 0.0, 0.0, 0.0};  // zero amplitude
  CHECK_THROWS_AS(scene.validate(), std::invalid_argument);

  scene.targets[0] = {50.0, 0.0, 0.0, 1.0};
  scene.rx_count = 0;
  CHECK_THROWS_WITH_AS(scene.validate(), doctest::Contains("rx_count"),
                       std::invalid_argument);
}

TEST_CASE("a beat frequency at or above fs is rejected with the target named") {
  fmcw::SceneConfig scene;
  scene.targets.push_back({50.0, 0.0, 0.0, 1.0});
  scene.targets.push_back({250.0, 0.0, 0.0, 1.0});  // beat > 10 MHz at S = 7.5e12
  CHECK_THROWS_WITH_AS((void)fmcw::simulate_frame(scene, default_chirp()),
                       doctest::Contains("scene.targets[1]"), std::invalid_argument);
}

TEST_CASE("single stationary target puts the range-DFT peak at the beat bin") {
  fmcw::SceneConfig scene;
  scene.targets.push_back({50.0, 0.0, 0.0, 1.0});
  fmcw::ChirpParams chirp = default_chirp();
  chirp.num_chirps = 4;

  auto cube = fmcw::simulate_frame(scene, chirp);
  REQUIRE(cube.samples.dim0() == 1);
  REQUIRE(cube.samples.dim1() == 4);
  REQUIRE(cube.samples.dim2() == 200);
  CHECK(cube.domain == fmcw::ChirpRepresentation::kComplexBaseband);

  const double beat = fmcw::beat_frequency(fmcw::chirp_slope(chirp), 50.0, scene.c_mps);
  const std::size_t expected_bin = static_cast<std::size_t>(
      std::lround(beat * 200.0 / chirp.sample_rate_hz));

  for (std::size_t k = 0; k < 4; ++k) {
    auto spectrum = fmcw::dft(chirp_row(cube, 0, k));
    std::size_t argmax = 0;
    for (std::size_t i = 1; i < spectrum.size(); ++i) {
      if (std::abs(spectrum[i]) > std::abs(spectrum[argmax])) argmax = i;
    }
    CHECK(argmax == expected_bin);
  }
}

TEST_CASE("first sample carries the round-trip carrier phase") {
  fmcw::SceneConfig scene;
  scene.targets.push_back({50.0, 0.0, 0.0, 1.0});
  auto cube = fmcw::simulate_frame(scene, default_chirp());

  const double cycles = 77.0e9 * 2.0 * 50.0 / scene.c_mps;
  const double phase = 2.0 * kPi * (cycles - std::floor(cycles));
  CHECK(std::abs(cube.samples(0, 0, 0) - std::polar(1.0, phase)) < 1e-9);
}

TEST_CASE("phase advances across chirps at exactly the Doppler rate") {
  fmcw::SceneConfig scene;
  scene.targets.push_back({50.0, 19.0, 0.0, 1.0});
  fmcw::ChirpParams chirp = default_chirp();
  chirp.num_chirps = 16;
  auto cube = fmcw::simulate_frame(scene, chirp);

  // Pick out the beat bin of each chirp; its phase must rotate by
  // 2*pi*f_D*T_chirp per chirp (stop-and-hop).
  const double beat = fmcw::beat_frequency(fmcw::chirp_slope(chirp), 50.0, scene.c_mps);
  const std::size_t bin = static_cast<std::size_t>(
      std::lround(beat * 200.0 / chirp.sample_rate_hz));
  std::vector<std::complex<double>> across_chirps;
  for (std::size_t k = 0; k < 16; ++k) {
    across_chirps.push_back(fmcw::dft(chirp_row(cube, 0, k))[bin]);
  }
  const double slope = oracles::unwrapped_phase_slope(across_chirps);
  const double f_d = fmcw::doppler_shift(19.0, scene.carrier_frequency_hz, scene.c_mps);
  const double expected = 2.0 * kPi * f_d * chirp.duration_s;
  REQUIRE(expected < kPi);  // unambiguous
  CHECK(slope == doctest::Approx(expected).epsilon(1e-9));
}

TEST_CASE("rx elements are offset by the ULA phase") {
  fmcw::SceneConfig scene;
  scene.targets.push_back({50.0, 0.0, 30.0, 1.0});
  scene.rx_count = 4;
  fmcw::ChirpParams chirp = default_chirp();
  chirp.num_chirps = 2;
  auto cube = fmcw::simulate_frame(scene, chirp);

  const std::complex<double> step =
      std::polar(1.0, fmcw::antenna_phase(30.0, 1, scene.rx_spacing_wavelengths));
  for (std::size_t rx = 1; rx < 4; ++rx) {
    for (std::size_t n = 0; n < 200; n += 37) {
      const auto ratio = cube.samples(rx, 0, n) / cube.samples(rx - 1, 0, n);
      CHECK(std::abs(ratio - step) < 1e-9);
    }
  }
}

TEST_CASE("echo amplitude scales samples linearly") {
  fmcw::ChirpParams chirp = default_chirp();
  chirp.num_chirps = 2;
  fmcw::SceneConfig unit;
  unit.targets.push_back({80.0, -5.0, 10.0, 1.0});
  fmcw::SceneConfig doubled = unit;
  doubled.targets[0].amplitude = 2.0;

  auto a = fmcw::simulate_frame(unit, chirp);
  auto b = fmcw::simulate_frame(doubled, chirp);
  for (std::size_t n = 0; n < 200; n += 23) {
    CHECK(std::abs(b.samples(0, 0, n) - 2.0 * a.samples(0, 0, n)) < 1e-12);
  }
}

TEST_CASE("noise is reproducible per seed and decorrelated across seeds") {
  fmcw::SceneConfig scene;
  scene.noise_std = 1.0;
  scene.rng_seed = 42;
  fmcw::ChirpParams chirp = default_chirp();
  chirp.num_chirps = 8;

  auto a = fmcw::simulate_frame(scene, chirp);
  auto b = fmcw::simulate_frame(scene, chirp);
  CHECK(a.samples.storage() == b.samples.storage());  // bit-identical

  scene.rng_seed = 43;
  auto c = fmcw::simulate_frame(scene, chirp);
  CHECK(a.samples.storage() != c.samples.storage());
}

TEST_CASE("noise statistics match the configured standard deviation") {
  fmcw::SceneConfig scene;
  scene.noise_std = 2.0;
  scene.rng_seed = 7;
  fmcw::ChirpParams chirp = default_chirp();
  chirp.num_chirps = 32;  // 32 * 200 complex samples = 12800 real draws

  auto cube = fmcw::simulate_frame(scene, chirp);
  double sum = 0.0, sum_sq = 0.0;
  std::size_t count = 0;
  for (const auto& s : cube.samples.storage()) {
    sum += s.real() + s.imag();
    sum_sq += s.real() * s.real() + s.imag() * s.imag();
    count += 2;
  }
  const double mean = sum / static_cast<double>(count);
  const double stddev = std::sqrt(sum_sq / static_cast<double>(count) - mean * mean);
  CHECK(std::abs(mean) < 0.1);                      // ~4 sigma of the sample mean
  CHECK(stddev == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("noise substreams are keyed by (rx, chirp), not draw order") {
  // The same (rx, chirp) block must receive the same noise regardless of how
  // many other blocks exist, because each block owns an independent stream.
  fmcw::SceneConfig scene;
  scene.noise_std = 1.0;
  scene.rng_seed = 99;
  fmcw::ChirpParams chirp = default_chirp();

  chirp.num_chirps = 2;
  auto small = fmcw::simulate_frame(scene, chirp);
  chirp.num_chirps = 8;
  auto big = fmcw::simulate_frame(scene, chirp);

  for (std::size_t k = 0; k < 2; ++k) {
    for (std::size_t n = 0; n < 200; ++n) {
      CHECK(small.samples(0, k, n) == big.samples(0, k, n));
    }
  }
}
