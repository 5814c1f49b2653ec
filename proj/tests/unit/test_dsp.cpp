#include "fmcw/dsp.hpp"

#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include <doctest.h>

#include "fmcw/detect.hpp"
#include "fmcw/fft.hpp"
#include "fmcw/scene.hpp"

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kRoundedC = 3.0e8;

fmcw::CubeGeometry demo_geometry() {
  fmcw::CubeGeometry g;
  g.range_fft_size = 200;
  g.doppler_fft_size = 128;
  g.angle_fft_size = 64;
  g.sample_rate_hz = 10.0e6;
  g.slope_hz_per_s = 7.5e12;
  g.chirp_duration_s = 20.0e-6;
  g.bandwidth_hz = 150.0e6;
  g.carrier_frequency_hz = 77.0e9;
  g.rx_count = 8;
  g.rx_spacing_wavelengths = 0.5;
  return g;
}

std::size_t argmax_abs(const std::vector<std::complex<double>>& v) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (std::abs(v[i]) > std::abs(v[best])) best = i;
  }
  return best;
}

}  // namespace

TEST_CASE("bin_to_range reproduces the worked 37.5 m example") {
  // fs = 1 MHz, N = 1000 -> bin 50 is 50 kHz; S = 2e11 Hz/s, c = 3e8.
  CHECK(fmcw::bin_to_range(50, 1000, 1.0e6, 2.0e11, kRoundedC) ==
        doctest::Approx(37.5).epsilon(1e-12));
  CHECK(fmcw::bin_to_range(0, 1000, 1.0e6, 2.0e11, kRoundedC) == 0.0);
}

TEST_CASE("bin_to_velocity: one Doppler bin of the default frame") {
  // 128 chirps of 20 us at 77 GHz, exact c.
  CHECK(fmcw::bin_to_velocity(1, 128, 20.0e-6, 77.0e9) ==
        doctest::Approx(0.7604313565340908).epsilon(1e-12));
  CHECK(fmcw::bin_to_velocity(-1, 128, 20.0e-6, 77.0e9) ==
        doctest::Approx(-0.7604313565340908).epsilon(1e-12));
  CHECK(fmcw::bin_to_velocity(0, 128, 20.0e-6, 77.0e9) == 0.0);
}

TEST_CASE("geometry accessors agree with the standalone conversions") {
  fmcw::CubeGeometry g = demo_geometry();
  CHECK(g.range_at(50) ==
        doctest::Approx(fmcw::bin_to_range(50, 200, 10.0e6, 7.5e12)).epsilon(1e-15));
  CHECK(g.velocity_at(7) ==
        doctest::Approx(fmcw::bin_to_velocity(7, 128, 20.0e-6, 77.0e9)).epsilon(1e-15));
  CHECK(g.velocity_resolution_mps() == doctest::Approx(g.velocity_at(1)).epsilon(1e-15));

  // c/(2B): exactly 1 m at the rounded constant, slightly less at exact c.
  fmcw::CubeGeometry rounded = g;
  rounded.c_mps = kRoundedC;
  CHECK(rounded.range_resolution_m() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(g.range_resolution_m() == doctest::Approx(0.9993081933333334).epsilon(1e-12));
}

TEST_CASE("aoa_from_phase matches the quarter-pi example") {
  // d = 0.5 m, lambda = 0.03 m, delta-phi = pi/4 -> asin(0.0075) = 0.42971 deg.
  const double aoa = fmcw::aoa_from_phase(kPi / 4.0, 0.5, 0.03);
  CHECK(aoa == doctest::Approx(0.429722375059592).epsilon(1e-9));
  CHECK(std::abs(aoa - 0.42971) < 1e-4);

  // Antisymmetric in the phase difference.
  CHECK(fmcw::aoa_from_phase(-kPi / 4.0, 0.5, 0.03) == doctest::Approx(-aoa));

  // |arcsin argument| > 1 has no physical direction: the threshold phase is
  // 2*pi*d/lambda = 104.72 rad here, so 120 rad lands outside it.
  CHECK_THROWS_AS((void)fmcw::aoa_from_phase(120.0, 0.5, 0.03), std::domain_error);
  CHECK_THROWS_AS((void)fmcw::aoa_from_phase(kPi / 4.0, -0.5, 0.03),
                  std::invalid_argument);
}

TEST_CASE("angle bin mapping and validity") {
  fmcw::CubeGeometry g = demo_geometry();  // 64 bins at half-wavelength spacing
  CHECK(g.angle_sine_at(0) == 0.0);
  CHECK(g.angle_sine_at(16) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(g.angle_deg_at(fmcw::index_of_centered_bin(16, 64)) ==
        doctest::Approx(30.0).epsilon(1e-9));
  CHECK(g.angle_deg_at(fmcw::index_of_centered_bin(0, 64)) == doctest::Approx(0.0));

  // Quarter-wavelength spacing pushes outer bins beyond |sin| = 1.
  fmcw::CubeGeometry sparse = g;
  sparse.rx_spacing_wavelengths = 0.25;
  CHECK(sparse.angle_bin_valid(fmcw::index_of_centered_bin(16, 64)));   // sin = 1.0
  CHECK_FALSE(sparse.angle_bin_valid(fmcw::index_of_centered_bin(17, 64)));
  CHECK_THROWS_AS((void)sparse.angle_deg_at(fmcw::index_of_centered_bin(17, 64)),
                  std::domain_error);
}

TEST_CASE("range_fft peaks at the beat bin and keeps half the bins for real data") {
  fmcw::SceneConfig scene;
  scene.targets.push_back({50.0, 0.0, 0.0, 1.0});
  fmcw::ChirpParams chirp;  // defaults: fs 10 MHz, 200 samples
  chirp.num_chirps = 2;
  auto cube = fmcw::simulate_frame(scene, chirp);

  auto bins = fmcw::range_fft(cube);
  REQUIRE(bins.dim2() == 200);  // complex baseband keeps every bin
  std::vector<std::complex<double>> row(200);
  for (std::size_t b = 0; b < 200; ++b) row[b] = bins(0, 0, b);
  const double beat = fmcw::beat_frequency(fmcw::chirp_slope(chirp), 50.0, scene.c_mps);
  CHECK(argmax_abs(row) == static_cast<std::size_t>(
                               std::lround(beat * 200.0 / chirp.sample_rate_hz)));

  // A real-valued cube keeps only the non-redundant lower half.
  fmcw::RawFrameCube real_cube;
  real_cube.chirp_params = chirp;
  real_cube.chirp_params.sample_rate_hz = 256.0;
  real_cube.chirp_params.duration_s = 1.0;
  real_cube.domain = fmcw::ChirpRepresentation::kReal;
  real_cube.samples = fmcw::Array3D<std::complex<double>>(1, 1, 256);
  for (std::size_t n = 0; n < 256; ++n) {
    real_cube.samples(0, 0, n) = std::cos(2.0 * kPi * 30.0 * static_cast<double>(n) / 256.0);
  }
  auto half = fmcw::range_fft(real_cube);
  REQUIRE(half.dim2() == 128);
  std::vector<std::complex<double>> half_row(128);
  for (std::size_t b = 0; b < 128; ++b) half_row[b] = half(0, 0, b);
  CHECK(argmax_abs(half_row) == 30);
}

TEST_CASE("range_fft zero-pads but refuses to truncate") {
  fmcw::RawFrameCube cube;
  cube.chirp_params.sample_rate_hz = 100.0;
  cube.chirp_params.duration_s = 0.16;
  cube.samples = fmcw::Array3D<std::complex<double>>(1, 1, 16, {1.0, 0.0});
  auto padded = fmcw::range_fft(cube, 64);
  CHECK(padded.dim2() == 64);
  CHECK_THROWS_AS((void)fmcw::range_fft(cube, 8), std::invalid_argument);
}

TEST_CASE("doppler_fft centers the spectrum: +m cycles land at centered bin +m") {
  const std::size_t n_chirps = 16;
  fmcw::Array3D<std::complex<double>> range_bins(1, n_chirps, 2);
  for (std::size_t k = 0; k < n_chirps; ++k) {
    // Range bin 0: +3 cycles over the frame. Range bin 1: -3 cycles.
    range_bins(0, k, 0) = std::polar(1.0, 2.0 * kPi * 3.0 * static_cast<double>(k) / 16.0);
    range_bins(0, k, 1) = std::polar(1.0, -2.0 * kPi * 3.0 * static_cast<double>(k) / 16.0);
  }
  auto out = fmcw::doppler_fft(range_bins);
  REQUIRE(out.dim0() == 1);  // rx
  REQUIRE(out.dim1() == 2);  // range bins (transposed)
  REQUIRE(out.dim2() == 16);

  std::vector<std::complex<double>> plus(16), minus(16);
  for (std::size_t d = 0; d < 16; ++d) {
    plus[d] = out(0, 0, d);
    minus[d] = out(0, 1, d);
  }
  CHECK(fmcw::centered_bin(argmax_abs(plus), 16) == 3);
  CHECK(fmcw::centered_bin(argmax_abs(minus), 16) == -3);
  CHECK(std::abs(plus[fmcw::index_of_centered_bin(3, 16)]) == doctest::Approx(16.0));
}

TEST_CASE("conjugating the slow-time signal mirrors the Doppler axis") {
  const std::size_t n_chirps = 32;
  fmcw::Array3D<std::complex<double>> fwd(1, n_chirps, 1), rev(1, n_chirps, 1);
  for (std::size_t k = 0; k < n_chirps; ++k) {
    const auto z = std::polar(1.0, 2.0 * kPi * 5.25 * static_cast<double>(k) / 32.0);
    fwd(0, k, 0) = z;
    rev(0, k, 0) = std::conj(z);
  }
  auto a = fmcw::doppler_fft(fwd);
  auto b = fmcw::doppler_fft(rev);
  // |A(+b)| == |B(-b)| for every centered bin with a mirror partner.
  for (std::ptrdiff_t bin = -15; bin <= 15; ++bin) {
    const double lhs = std::abs(a(0, 0, fmcw::index_of_centered_bin(bin, 32)));
    const double rhs = std::abs(b(0, 0, fmcw::index_of_centered_bin(-bin, 32)));
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-9));
  }
}

TEST_CASE("angle_fft localizes a plane wave to within one bin of its azimuth") {
  const int n_rx = 8;
  fmcw::CubeGeometry g = demo_geometry();
  fmcw::Array3D<std::complex<double>> doppler_cube(n_rx, 1, 1);
  const double azimuth = 20.0;
  for (int rx = 0; rx < n_rx; ++rx) {
    doppler_cube(rx, 0, 0) =
        std::polar(1.0, fmcw::antenna_phase(azimuth, rx, g.rx_spacing_wavelengths));
  }
  auto cube = fmcw::angle_fft(doppler_cube, g, 64);
  REQUIRE(cube.magnitudes.dim2() == 64);
  CHECK(cube.geometry.angle_fft_size == 64);

  std::size_t best = 0;
  for (std::size_t a = 1; a < 64; ++a) {
    if (cube.magnitudes(0, 0, a) > cube.magnitudes(0, 0, best)) best = a;
  }
  const double recovered = cube.geometry.angle_deg_at(best);
  // One bin step in sine space is 1/(64*0.5); convert at the recovered angle.
  const double bin_width_deg =
      (std::asin(std::min(1.0, cube.geometry.angle_sine_at(
                                   fmcw::centered_bin(best, 64) + 1))) -
       std::asin(cube.geometry.angle_sine_at(fmcw::centered_bin(best, 64)))) *
      180.0 / kPi;
  CHECK(std::abs(recovered - azimuth) <= bin_width_deg);
}

TEST_CASE("angle_fft pass-through and size checks") {
  fmcw::CubeGeometry g = demo_geometry();
  g.rx_count = 1;
  fmcw::Array3D<std::complex<double>> one_rx(1, 2, 3, {3.0, -4.0});
  auto cube = fmcw::angle_fft(one_rx, g, 1);
  REQUIRE(cube.magnitudes.dim2() == 1);
  CHECK(cube.magnitudes(0, 0, 0) == doctest::Approx(5.0));  // |3-4i|

  fmcw::Array3D<std::complex<double>> eight_rx(8, 1, 1, {1.0, 0.0});
  CHECK_THROWS_AS((void)fmcw::angle_fft(eight_rx, g, 4), std::invalid_argument);
}

TEST_CASE("range_doppler_map averages magnitudes over rx") {
  fmcw::Array3D<std::complex<double>> cube(2, 1, 1);
  cube(0, 0, 0) = {3.0, 4.0};   // |.| = 5
  cube(1, 0, 0) = {0.0, -1.0};  // |.| = 1
  auto map = fmcw::range_doppler_map(cube, demo_geometry());
  CHECK(map.magnitudes(0, 0) == doctest::Approx(3.0));
  // Averaging discards direction, so the map's geometry drops the angle axis;
  // detections taken from the 2-D map then decode to boresight rather than to
  // centered bin -N/2 of the original cube (which would read as -90 degrees).
  CHECK(demo_geometry().angle_fft_size > 1);
  CHECK(map.geometry.angle_fft_size == 1);
}

TEST_CASE("points lifted from a 2-D map sit at boresight") {
  fmcw::RawFrameCube raw;
  raw.chirp_params.f_start_hz = 77.0e9;
  raw.chirp_params.bandwidth_hz = 150.0e6;
  raw.chirp_params.duration_s = 20.0e-6;
  raw.chirp_params.sample_rate_hz = 10.0e6;
  raw.chirp_params.num_chirps = 8;
  fmcw::SceneConfig scene;
  scene.rx_count = 4;
  scene.targets = {{40.0, 0.0, 0.0, 1.0}};
  const fmcw::ProcessedFrame frame =
      fmcw::process_frame(fmcw::simulate_frame(scene, raw.chirp_params), {});

  const auto detections = fmcw::detect_peaks(frame.rd_map, fmcw::DetectPolicy{});
  const auto points = fmcw::to_point_cloud(detections, frame.rd_map.geometry);
  REQUIRE(!points.empty());
  for (const fmcw::RadarPoint& p : points) {
    CHECK(p.y_m == 0.0);
    CHECK(p.x_m > 0.0);
  }
  CHECK(points[0].x_m == doctest::Approx(40.0).epsilon(0.05));
}

TEST_CASE("Hann window trades peak height for sidelobe suppression") {
  // Off-grid tone at bin 10.5 of 64: rectangular leakage decays slowly.
  fmcw::RawFrameCube cube;
  cube.chirp_params.sample_rate_hz = 64.0;
  cube.chirp_params.duration_s = 1.0;
  cube.samples = fmcw::Array3D<std::complex<double>>(1, 1, 64);
  for (std::size_t n = 0; n < 64; ++n) {
    cube.samples(0, 0, n) = std::polar(1.0, 2.0 * kPi * 10.5 * static_cast<double>(n) / 64.0);
  }
  auto rect = fmcw::range_fft(cube, 0, fmcw::WindowKind::kRectangular);
  auto hann = fmcw::range_fft(cube, 0, fmcw::WindowKind::kHann);

  const auto far_leakage = [](const fmcw::Array3D<std::complex<double>>& bins) {
    double worst = 0.0;
    for (std::size_t b = 0; b < 64; ++b) {
      if (b >= 5 && b <= 16) continue;  // main lobe neighborhood
      worst = std::max(worst, std::abs(bins(0, 0, b)));
    }
    return worst;
  };
  CHECK(far_leakage(hann) < 0.1 * far_leakage(rect));

  // Coherent gain of periodic Hann is exactly 1/2 for an on-grid tone.
  for (std::size_t n = 0; n < 64; ++n) {
    cube.samples(0, 0, n) = std::polar(1.0, 2.0 * kPi * 10.0 * static_cast<double>(n) / 64.0);
  }
  auto rect_on = fmcw::range_fft(cube, 0, fmcw::WindowKind::kRectangular);
  auto hann_on = fmcw::range_fft(cube, 0, fmcw::WindowKind::kHann);
  CHECK(std::abs(hann_on(0, 0, 10)) / std::abs(rect_on(0, 0, 10)) ==
        doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("normalize_heatmap scales by the global peak") {
  fmcw::RangeDopplerMap map;
  map.magnitudes = fmcw::Array2D<double>(100, 100, 0.0);
  map.magnitudes(30, 50) = 10.0;
  map.magnitudes(60, 70) = 8.0;
  auto hm = fmcw::normalize_heatmap(map);
  CHECK(hm.values(30, 50) == doctest::Approx(1.0));
  CHECK(hm.values(60, 70) == doctest::Approx(0.8));
  CHECK(hm.values(0, 0) == 0.0);

  fmcw::RangeDopplerMap zeros;
  zeros.magnitudes = fmcw::Array2D<double>(4, 4, 0.0);
  auto flat = fmcw::normalize_heatmap(zeros);
  for (std::size_t r = 0; r < 4; ++r) {
    for (std::size_t d = 0; d < 4; ++d) CHECK(flat.values(r, d) == 0.0);
  }
}

TEST_CASE("process_frame wires the stages together with consistent geometry") {
  fmcw::SceneConfig scene;
  scene.targets.push_back({60.0, 10.0, 15.0, 1.0});
  scene.rx_count = 4;
  fmcw::ChirpParams chirp;
  chirp.num_chirps = 32;
  auto raw = fmcw::simulate_frame(scene, chirp);

  fmcw::DspOptions options;
  auto frame = fmcw::process_frame(raw, options);

  CHECK(frame.rd_map.magnitudes.rows() == 200);
  CHECK(frame.rd_map.magnitudes.cols() == 32);
  CHECK(frame.cube.magnitudes.dim0() == 200);
  CHECK(frame.cube.magnitudes.dim1() == 32);
  CHECK(frame.cube.magnitudes.dim2() == 64);  // max(64, rx)
  CHECK(frame.cube.geometry.angle_fft_size == 64);
  CHECK(frame.rd_map.geometry.range_fft_size == 200);
  CHECK(frame.rd_map.geometry.doppler_fft_size == 32);
  CHECK(frame.rd_map.geometry.carrier_frequency_hz == 77.0e9);

  // The map's global peak sits at the target's (range, velocity) cell.
  std::size_t best_r = 0, best_d = 0;
  for (std::size_t r = 0; r < 200; ++r) {
    for (std::size_t d = 0; d < 32; ++d) {
      if (frame.rd_map.magnitudes(r, d) > frame.rd_map.magnitudes(best_r, best_d)) {
        best_r = r;
        best_d = d;
      }
    }
  }
  CHECK(std::abs(frame.rd_map.geometry.range_at(best_r) - 60.0) <=
        frame.rd_map.geometry.range_resolution_m());
  CHECK(std::abs(frame.rd_map.geometry.velocity_at(
            fmcw::centered_bin(best_d, 32)) - 10.0) <=
        frame.rd_map.geometry.velocity_resolution_mps());

  // Without scene metadata the chain cannot build a geometry.
  raw.scene_meta.reset();
  CHECK_THROWS_AS((void)fmcw::process_frame(raw, options), std::invalid_argument);
}
