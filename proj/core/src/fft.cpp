#include "fmcw/fft.hpp"

#include <cmath>
#include <stdexcept>

#include "fmcw/constants.hpp"

namespace fmcw {

namespace {

std::complex<double> unit_phasor(double angle) {
  return {std::cos(angle), std::sin(angle)};
}

void bit_reverse_permute(std::vector<std::complex<double>>& data) {
  const std::size_t n = data.size();
  std::size_t j = 0;
  for (std::size_t i = 1; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(data[i], data[j]);
  }
}

// Bluestein's chirp-z transform: an arbitrary-length DFT expressed as one
// circular convolution of length m = next_pow2(2n - 1), evaluated with the
// radix-2 kernel. The quadratic phase k^2/2 is reduced with k^2 mod 2n before
// converting to an angle so large indices do not lose precision.
std::vector<std::complex<double>> dft_bluestein(
    const std::vector<std::complex<double>>& x) {
  const std::size_t n = x.size();
  const std::size_t m = next_power_of_two(2 * n - 1);

  // w[k] = exp(-j * pi * k^2 / n); indices reduced modulo 2n because
  // exp(-j*pi*q/n) has period 2n in q.
  std::vector<std::complex<double>> w(n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t q = static_cast<std::size_t>(
        (static_cast<unsigned long long>(k) * k) % (2 * n));
    w[k] = unit_phasor(-kPi * static_cast<double>(q) / static_cast<double>(n));
  }

  std::vector<std::complex<double>> a(m, {0.0, 0.0});
  std::vector<std::complex<double>> b(m, {0.0, 0.0});
  for (std::size_t k = 0; k < n; ++k) a[k] = x[k] * w[k];
  b[0] = std::conj(w[0]);
  for (std::size_t k = 1; k < n; ++k) {
    b[k] = std::conj(w[k]);
    b[m - k] = std::conj(w[k]);
  }

  fft_pow2_inplace(a, false);
  fft_pow2_inplace(b, false);
  for (std::size_t i = 0; i < m; ++i) a[i] *= b[i];
  fft_pow2_inplace(a, true);

  std::vector<std::complex<double>> out(n);
  const double scale = 1.0 / static_cast<double>(m);
  for (std::size_t k = 0; k < n; ++k) out[k] = a[k] * scale * w[k];
  return out;
}

}  // namespace

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

std::size_t next_power_of_two(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

void fft_pow2_inplace(std::vector<std::complex<double>>& data, bool inverse) {
  const std::size_t n = data.size();
  if (!is_power_of_two(n)) {
    throw std::invalid_argument("fft_pow2_inplace: size must be a power of two");
  }
  if (n == 1) return;

  bit_reverse_permute(data);
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double base = (inverse ? 2.0 : -2.0) * kPi / static_cast<double>(len);
    for (std::size_t start = 0; start < n; start += len) {
      for (std::size_t k = 0; k < len / 2; ++k) {
        // Twiddles from k directly (not by repeated multiplication) so the
        // phase error stays at rounding level across long transforms.
        const std::complex<double> tw = unit_phasor(base * static_cast<double>(k));
        std::complex<double>& u = data[start + k];
        std::complex<double>& v = data[start + k + len / 2];
        const std::complex<double> t = v * tw;
        v = u - t;
        u += t;
      }
    }
  }
}

std::vector<std::complex<double>> dft(std::span<const std::complex<double>> x,
                                      std::size_t size) {
  if (size == 0) size = x.size();
  if (size == 0) throw std::invalid_argument("dft: empty input");
  if (size < x.size()) {
    throw std::invalid_argument("dft: size smaller than the input length");
  }

  std::vector<std::complex<double>> buf(x.begin(), x.end());
  buf.resize(size, {0.0, 0.0});
  if (is_power_of_two(size)) {
    fft_pow2_inplace(buf, false);
    return buf;
  }
  return dft_bluestein(buf);
}

std::vector<std::complex<double>> idft(std::span<const std::complex<double>> x,
                                       std::size_t size) {
  if (size == 0) size = x.size();
  if (size == 0) throw std::invalid_argument("idft: empty input");
  if (size < x.size()) {
    throw std::invalid_argument("idft: size smaller than the input length");
  }

  // IDFT(x) = conj(DFT(conj(x))) / n, which reuses both forward kernels.
  std::vector<std::complex<double>> buf(x.begin(), x.end());
  buf.resize(size, {0.0, 0.0});
  for (auto& v : buf) v = std::conj(v);
  std::vector<std::complex<double>> out = dft(buf, size);
  const double scale = 1.0 / static_cast<double>(size);
  for (auto& v : out) v = std::conj(v) * scale;
  return out;
}

}  // namespace fmcw
