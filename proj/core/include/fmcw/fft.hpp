#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace fmcw {

// Forward DFT with the engineering sign convention:
//   X[k] = sum_n x[n] * exp(-j * 2*pi * k * n / size)
// `size` = 0 means "length of x". A larger size zero-pads; a smaller nonzero
// size is rejected. Power-of-two sizes run on an iterative radix-2 kernel,
// everything else through Bluestein's chirp-z algorithm; both agree with the
// naive O(n^2) definition to ~1e-12 relative.
std::vector<std::complex<double>> dft(std::span<const std::complex<double>> x,
                                      std::size_t size = 0);

// Inverse transform of the above (includes the 1/size normalization).
std::vector<std::complex<double>> idft(std::span<const std::complex<double>> x,
                                       std::size_t size = 0);

// In-place iterative radix-2 butterfly; data.size() must be a power of two.
// The inverse path does NOT normalize (callers divide by n themselves).
void fft_pow2_inplace(std::vector<std::complex<double>>& data, bool inverse);

bool is_power_of_two(std::size_t n);

// Smallest power of two >= n.
std::size_t next_power_of_two(std::size_t n);

// Index the zero-frequency bin ends up at after a center shift.
inline std::size_t fftshift_center(std::size_t n) { return n / 2; }

// Where input bin `k` of an n-point spectrum lands after the center shift.
inline std::size_t fftshift_index(std::size_t k, std::size_t n) {
  return (k + n / 2) % n;
}

// Signed frequency offset of shifted index `i`: i - floor(n/2).
inline std::ptrdiff_t centered_bin(std::size_t i, std::size_t n) {
  return static_cast<std::ptrdiff_t>(i) - static_cast<std::ptrdiff_t>(n / 2);
}

// Shifted index holding centered bin `b`.
inline std::size_t index_of_centered_bin(std::ptrdiff_t b, std::size_t n) {
  return static_cast<std::size_t>(b + static_cast<std::ptrdiff_t>(n / 2));
}

// Reorder a spectrum so the zero-frequency bin sits at floor(n/2).
template <typename T>
std::vector<T> fftshift(const std::vector<T>& x) {
  const std::size_t n = x.size();
  std::vector<T> out(n);
  for (std::size_t k = 0; k < n; ++k) out[fftshift_index(k, n)] = x[k];
  return out;
}

}  // namespace fmcw
