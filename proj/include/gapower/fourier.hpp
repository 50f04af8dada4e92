#pragma once

#include <complex>
#include <cstddef>
#include <numbers>
#include <utility>
#include <vector>

namespace gapower::detail {

inline bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

/// Angle 2*pi*h*j/n reduced exactly through integer arithmetic, so that
/// large products of bin index and sample index lose no precision.
inline double bin_angle(std::size_t h, std::size_t j, std::size_t n) {
  return 2.0 * std::numbers::pi * static_cast<double>((h * j) % n) / static_cast<double>(n);
}

// Iterative radix-2 Cooley-Tukey; a.size() must be a power of two.
inline void fft_pow2(std::vector<std::complex<double>>& a, bool inverse) {
  const std::size_t n = a.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  const double turn = inverse ? 2.0 * std::numbers::pi : -2.0 * std::numbers::pi;
  std::vector<std::complex<double>> root(n / 2);
  for (std::size_t k = 0; k < n / 2; ++k) {
    if (4 * k % n == 0) {
      // exact quarter-turn roots keep integer-valued signals dust-free
      static constexpr std::complex<double> quarters[4]{
          {1.0, 0.0}, {0.0, -1.0}, {-1.0, 0.0}, {0.0, 1.0}};
      const std::size_t q = (4 * k / n) % 4;
      root[k] = inverse ? std::conj(quarters[q]) : quarters[q];
    } else {
      root[k] = std::polar(1.0, turn * static_cast<double>(k) / static_cast<double>(n));
    }
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t stride = n / len;
    for (std::size_t base = 0; base < n; base += len) {
      for (std::size_t k = 0; k < len / 2; ++k) {
        const auto u = a[base + k];
        const auto v = a[base + k + len / 2] * root[k * stride];
        a[base + k] = u + v;
        a[base + k + len / 2] = u - v;
      }
    }
  }
}

// O(n^2) transform for the remaining even sizes.
inline std::vector<std::complex<double>> dft_naive(const std::vector<std::complex<double>>& x,
                                                   bool inverse) {
  const std::size_t n = x.size();
  std::vector<std::complex<double>> out(n);
  for (std::size_t m = 0; m < n; ++m) {
    std::complex<double> acc{0.0, 0.0};
    for (std::size_t j = 0; j < n; ++j) {
      const double theta = bin_angle(m, j, n);
      const std::complex<double> w{std::cos(theta), inverse ? std::sin(theta) : -std::sin(theta)};
      acc += x[j] * w;
    }
    out[m] = acc;
  }
  return out;
}

/// Forward DFT, unscaled: X[m] = sum_j x[j] exp(-2*pi*i*j*m/n).
inline std::vector<std::complex<double>> fft(std::vector<std::complex<double>> x) {
  if (is_pow2(x.size())) {
    fft_pow2(x, false);
    return x;
  }
  return dft_naive(x, false);
}

/// Inverse DFT including the 1/n scale.
inline std::vector<std::complex<double>> ifft(std::vector<std::complex<double>> x) {
  const std::size_t n = x.size();
  if (is_pow2(n)) {
    fft_pow2(x, true);
  } else {
    x = dft_naive(x, true);
  }
  const double scale = 1.0 / static_cast<double>(n);
  for (auto& v : x) v *= scale;
  return x;
}

}  // namespace gapower::detail
