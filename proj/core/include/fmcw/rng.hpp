#pragma once

#include <cmath>
#include <cstdint>
#include <utility>

namespace fmcw {

// splitmix64 output finalizer: bijective avalanche mix of a 64-bit word.
inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// Deterministic project-wide generator (splitmix64). The algorithm is pinned
// so that a seed reproduces bit-identical streams on every platform; do not
// swap in std::mt19937 or any distribution from <random>, whose outputs are
// implementation-defined.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    state_ += 0x9E3779B97F4A7C15ull;
    return mix64(state_);
  }

  // Uniform in [0, 1), 53 random mantissa bits.
  double next_double() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

  // One standard-normal pair via Box-Muller. Consumes exactly two uniforms,
  // which keeps the draw count per complex noise sample fixed.
  std::pair<double, double> next_gaussian_pair() {
    const double u1 = next_double();
    const double u2 = next_double();
    // log(1 - u1) is safe: u1 < 1 exactly, so the argument is in (0, 1].
    const double radius = std::sqrt(-2.0 * std::log(1.0 - u1));
    const double angle = 2.0 * 3.141592653589793238462643383279502884 * u2;
    return {radius * std::cos(angle), radius * std::sin(angle)};
  }

 private:
  std::uint64_t state_;
};

// Seed for the noise substream of one (rx, chirp) block. Keying the stream by
// indices rather than by draw order means the simulated cube is independent
// of the order in which rx/chirp blocks are filled.
inline std::uint64_t substream_seed(std::uint64_t seed, std::uint32_t rx_index,
                                    std::uint32_t chirp_index) {
  std::uint64_t key = (static_cast<std::uint64_t>(rx_index) << 32) | chirp_index;
  return mix64(seed ^ mix64(key + 0x9E3779B97F4A7C15ull));
}

}  // namespace fmcw
