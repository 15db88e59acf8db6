#include "fft.hpp"

#include <cmath>

namespace hurstci::detail {

namespace {

constexpr double kPi = 3.14159265358979323846;

bool is_pow2(size_t n) { return n != 0 && (n & (n - 1)) == 0; }

void fft_pow2(std::vector<std::complex<double>>& a, bool inverse) {
  const size_t n = a.size();
  for (size_t i = 1, j = 0; i < n; ++i) {
    size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (size_t len = 2; len <= n; len <<= 1) {
    double ang = 2.0 * kPi / double(len) * (inverse ? 1.0 : -1.0);
    std::complex<double> wl(std::cos(ang), std::sin(ang));
    for (size_t i = 0; i < n; i += len) {
      std::complex<double> w(1.0, 0.0);
      for (size_t k = 0; k < len / 2; ++k) {
        std::complex<double> u = a[i + k];
        std::complex<double> v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
        w *= wl;
      }
    }
  }
}

// Bluestein: DFT of arbitrary size via convolution with a chirp.
void fft_bluestein(std::vector<std::complex<double>>& a, bool inverse) {
  const size_t n = a.size();
  size_t m = 1;
  while (m < 2 * n + 1) m <<= 1;
  const double sign = inverse ? 1.0 : -1.0;
  std::vector<std::complex<double>> chirp(n);
  for (size_t k = 0; k < n; ++k) {
    // angle = pi * k^2 / n mod 2pi, k^2 reduced mod 2n to keep precision
    unsigned long long k2 = (static_cast<unsigned long long>(k) * k) % (2ULL * n);
    double ang = sign * kPi * double(k2) / double(n);
    chirp[k] = std::complex<double>(std::cos(ang), std::sin(ang));
  }
  std::vector<std::complex<double>> x(m, {0.0, 0.0}), y(m, {0.0, 0.0});
  for (size_t k = 0; k < n; ++k) x[k] = a[k] * chirp[k];
  y[0] = std::conj(chirp[0]);
  for (size_t k = 1; k < n; ++k) y[k] = y[m - k] = std::conj(chirp[k]);
  fft_pow2(x, false);
  fft_pow2(y, false);
  for (size_t k = 0; k < m; ++k) x[k] *= y[k];
  fft_pow2(x, true);
  for (size_t k = 0; k < n; ++k) a[k] = x[k] * chirp[k] / double(m);
}

}  // namespace

void fft(std::vector<std::complex<double>>& data, bool inverse) {
  if (data.size() < 2) return;
  if (is_pow2(data.size()))
    fft_pow2(data, inverse);
  else
    fft_bluestein(data, inverse);
}

}  // namespace hurstci::detail
