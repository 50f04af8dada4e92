#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <map>
#include <numbers>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "gapower/errors.hpp"
#include "gapower/fourier.hpp"

namespace gapower {

/// Uniform sampling of exactly one period T = 2*pi/omega.
///
/// The sample count must be even so that the DFT-based Hilbert transform has a
/// well-defined Nyquist bin to discard; analysis windows longer or shorter
/// than one period are not representable on purpose.
struct SamplingGrid {
  double omega;           // fundamental angular frequency, rad/s
  std::size_t n_samples;  // uniform samples over one period

  SamplingGrid(double omega_, std::size_t n_samples_) : omega(omega_), n_samples(n_samples_) {
    if (!std::isfinite(omega) || omega <= 0.0)
      throw Error("SamplingGrid: omega must be finite and > 0");
    if (n_samples < 4 || n_samples % 2 != 0)
      throw Error("SamplingGrid: n_samples must be even and >= 4, got " +
                  std::to_string(n_samples));
  }

  double period() const { return 2.0 * std::numbers::pi / omega; }
  double dt() const { return period() / static_cast<double>(n_samples); }
  double time(std::size_t j) const {
    return static_cast<double>(j) * period() / static_cast<double>(n_samples);
  }

  friend bool operator==(const SamplingGrid&, const SamplingGrid&) = default;
};

/// One period of a real periodic signal for a single phase/channel.
/// Immutable after construction; arithmetic requires identical grids.
class PhaseSignal {
 public:
  PhaseSignal(const SamplingGrid& grid, std::vector<double> samples)
      : grid_(grid), samples_(std::move(samples)) {
    if (samples_.size() != grid_.n_samples)
      throw Error("PhaseSignal: sample count does not match the grid");
    for (double v : samples_)
      if (!std::isfinite(v)) throw Error("PhaseSignal: samples must be finite");
  }

  static PhaseSignal zeros(const SamplingGrid& grid) {
    return PhaseSignal(grid, std::vector<double>(grid.n_samples, 0.0));
  }

  const SamplingGrid& grid() const { return grid_; }
  std::size_t size() const { return samples_.size(); }
  double operator[](std::size_t j) const { return samples_[j]; }
  const std::vector<double>& samples() const { return samples_; }

  PhaseSignal& operator+=(const PhaseSignal& o) {
    check_grid(o);
    for (std::size_t j = 0; j < samples_.size(); ++j) samples_[j] += o.samples_[j];
    return *this;
  }
  PhaseSignal& operator-=(const PhaseSignal& o) {
    check_grid(o);
    for (std::size_t j = 0; j < samples_.size(); ++j) samples_[j] -= o.samples_[j];
    return *this;
  }
  PhaseSignal& operator*=(double s) {
    for (auto& v : samples_) v *= s;
    return *this;
  }

  friend PhaseSignal operator+(PhaseSignal a, const PhaseSignal& b) { return a += b; }
  friend PhaseSignal operator-(PhaseSignal a, const PhaseSignal& b) { return a -= b; }
  friend PhaseSignal operator*(PhaseSignal a, double s) { return a *= s; }
  friend PhaseSignal operator*(double s, PhaseSignal a) { return a *= s; }
  friend PhaseSignal operator-(PhaseSignal a) { return a *= -1.0; }

  /// Pointwise product (used for instantaneous power terms).
  friend PhaseSignal operator*(const PhaseSignal& a, const PhaseSignal& b) {
    a.check_grid(b);
    std::vector<double> out(a.size());
    for (std::size_t j = 0; j < out.size(); ++j) out[j] = a.samples_[j] * b.samples_[j];
    return PhaseSignal(a.grid_, std::move(out));
  }

 private:
  void check_grid(const PhaseSignal& o) const {
    if (!(grid_ == o.grid_)) throw GridMismatch("PhaseSignal: grids differ");
  }

  SamplingGrid grid_;
  std::vector<double> samples_;
};

inline double mean(const PhaseSignal& x) {
  double acc = 0.0;
  for (double v : x.samples()) acc += v;
  return acc / static_cast<double>(x.size());
}

inline double rms(const PhaseSignal& x) {
  double acc = 0.0;
  for (double v : x.samples()) acc += v * v;
  return std::sqrt(acc / static_cast<double>(x.size()));
}

/// Trigonometric series: per order h, a_h*cos(h*omega*t) + b_h*sin(h*omega*t).
/// Chosen over amplitude/phase pairs to avoid phase-wrapping ambiguity.
class HarmonicSeries {
 public:
  explicit HarmonicSeries(double omega) : omega_(omega) {
    if (!std::isfinite(omega_) || omega_ <= 0.0)
      throw Error("HarmonicSeries: omega must be finite and > 0");
  }

  /// Setting both coefficients to zero removes the order.
  void set_term(int h, double cos_coef, double sin_coef) {
    if (h < 0) throw Error("HarmonicSeries: order must be >= 0");
    if (!std::isfinite(cos_coef) || !std::isfinite(sin_coef))
      throw Error("HarmonicSeries: coefficients must be finite");
    if (h == 0 && sin_coef != 0.0)
      throw Error("HarmonicSeries: the dc term cannot carry a sine coefficient");
    if (cos_coef == 0.0 && sin_coef == 0.0) {
      terms_.erase(h);
      return;
    }
    terms_[h] = {cos_coef, sin_coef};
  }

  std::array<double, 2> term(int h) const {
    auto it = terms_.find(h);
    return it == terms_.end() ? std::array<double, 2>{0.0, 0.0} : it->second;
  }

  const std::map<int, std::array<double, 2>>& terms() const { return terms_; }
  double omega() const { return omega_; }

  std::set<int> orders() const {
    std::set<int> out;
    for (const auto& [h, ab] : terms_) out.insert(h);
    return out;
  }

 private:
  double omega_;
  std::map<int, std::array<double, 2>> terms_;
};

/// The set of harmonic orders regarded as "in band" for a given analysis,
/// together with the relative amplitude cutoff that produced it.
struct HarmonicSupport {
  std::set<int> orders;
  double threshold = 1e-6;
};

/// Orders whose amplitude reaches `threshold` relative to the largest
/// harmonic found anywhere in `phases`.
inline HarmonicSupport support_of(const std::vector<HarmonicSeries>& phases, double threshold) {
  if (!(threshold > 0.0) || !(threshold < 1.0))
    throw Error("support_of: threshold must lie in (0, 1)");
  double peak = 0.0;
  for (const auto& s : phases)
    for (const auto& [h, ab] : s.terms()) peak = std::max(peak, std::hypot(ab[0], ab[1]));
  HarmonicSupport support{{}, threshold};
  if (peak == 0.0) return support;
  for (const auto& s : phases)
    for (const auto& [h, ab] : s.terms())
      if (std::hypot(ab[0], ab[1]) >= threshold * peak) support.orders.insert(h);
  return support;
}

/// Evaluate a harmonic series on a grid. Orders beyond the Nyquist bin alias
/// and are rejected; the Nyquist bin itself is representable only as a pure
/// cosine, which keeps sample_series a total inverse of spectrum.
inline PhaseSignal sample_series(const HarmonicSeries& series, const SamplingGrid& grid) {
  if (series.omega() != grid.omega)
    throw GridMismatch("sample_series: series omega differs from grid omega");
  const std::size_t n = grid.n_samples;
  for (const auto& [h, ab] : series.terms()) {
    const auto order = static_cast<std::size_t>(h);
    if (order > n / 2 || (order == n / 2 && ab[1] != 0.0))
      throw AliasingOrder(h, "sample_series: order " + std::to_string(h) +
                                 " aliases on a grid of " + std::to_string(n) + " samples");
  }
  std::vector<double> out(n, 0.0);
  for (const auto& [h, ab] : series.terms()) {
    for (std::size_t j = 0; j < n; ++j) {
      const double theta = detail::bin_angle(static_cast<std::size_t>(h), j, n);
      out[j] += ab[0] * std::cos(theta) + ab[1] * std::sin(theta);
    }
  }
  return PhaseSignal(grid, std::move(out));
}

/// Discrete Hilbert transform over one period, computed bin-wise: positive
/// frequency bins are multiplied by +j, negative ones by -j, dc and Nyquist
/// are zeroed. Resulting convention: H[sin] = cos, H[cos] = -sin, H[const] = 0.
inline PhaseSignal hilbert(const PhaseSignal& x) {
  const std::size_t n = x.size();
  std::vector<std::complex<double>> spec(n);
  for (std::size_t j = 0; j < n; ++j) spec[j] = {x[j], 0.0};
  spec = detail::fft(std::move(spec));
  const std::size_t nyquist = n / 2;
  spec[0] = {0.0, 0.0};
  spec[nyquist] = {0.0, 0.0};
  for (std::size_t m = 1; m < nyquist; ++m) {
    spec[m] = {-spec[m].imag(), spec[m].real()};          // * +j
    spec[n - m] = {spec[n - m].imag(), -spec[n - m].real()};  // * -j
  }
  auto back = detail::ifft(std::move(spec));
  std::vector<double> out(n);
  for (std::size_t j = 0; j < n; ++j) out[j] = back[j].real();
  return PhaseSignal(x.grid(), std::move(out));
}

/// Exact DFT-based (a_h, b_h) per bin; bins that come out exactly zero are
/// dropped. sample_series(spectrum(x), grid) reproduces x.
inline HarmonicSeries spectrum(const PhaseSignal& x) {
  const std::size_t n = x.size();
  std::vector<std::complex<double>> spec(n);
  for (std::size_t j = 0; j < n; ++j) spec[j] = {x[j], 0.0};
  spec = detail::fft(std::move(spec));
  HarmonicSeries out(x.grid().omega);
  const double inv_n = 1.0 / static_cast<double>(n);
  out.set_term(0, spec[0].real() * inv_n, 0.0);
  for (std::size_t h = 1; h < n / 2; ++h)
    out.set_term(static_cast<int>(h), 2.0 * spec[h].real() * inv_n,
                 -2.0 * spec[h].imag() * inv_n);
  out.set_term(static_cast<int>(n / 2), spec[n / 2].real() * inv_n, 0.0);
  return out;
}

/// Split a current into the part living on the voltage support (in band) and
/// the rest (out of band). A dc component of the current lands in the
/// out-of-band part whenever order 0 is not in the support.
inline std::pair<PhaseSignal, PhaseSignal> band_split(const PhaseSignal& current,
                                                      const HarmonicSupport& support) {
  const HarmonicSeries spec = spectrum(current);
  HarmonicSeries in_band(spec.omega());
  for (const auto& [h, ab] : spec.terms())
    if (support.orders.contains(h)) in_band.set_term(h, ab[0], ab[1]);
  PhaseSignal parallel = sample_series(in_band, current.grid());
  PhaseSignal orthogonal = current - parallel;
  return {std::move(parallel), std::move(orthogonal)};
}

/// A multi-phase voltage/current record over one shared period.
struct WaveformSet {
  SamplingGrid grid;
  std::vector<PhaseSignal> voltage;
  std::vector<PhaseSignal> current;
};

}  // namespace gapower
