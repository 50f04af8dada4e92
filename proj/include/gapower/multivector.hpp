#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "gapower/errors.hpp"
#include "gapower/waveform.hpp"

namespace gapower {

/// The three per-phase channels: the raw waveform, its Hilbert companion,
/// and the out-of-band residue.
enum class Channel : int { plain = 0, hat = 1, breve = 2 };

/// One axis of the 3n-dimensional Euclidean basis. Axes are totally ordered
/// by their encoded index: phase 1 plain, phase 1 hat, phase 1 breve,
/// phase 2 plain, ...
struct BasisAxis {
  int phase = 1;  // 1-based
  Channel channel = Channel::plain;

  int index() const { return 3 * (phase - 1) + static_cast<int>(channel); }

  static BasisAxis from_index(int idx) {
    if (idx < 0) throw Error("BasisAxis: negative index");
    return {idx / 3 + 1, static_cast<Channel>(idx % 3)};
  }

  std::string label() const {
    std::string s = std::to_string(phase);
    if (channel == Channel::hat) s += 'h';
    if (channel == Channel::breve) s += 'b';
    return s;
  }

  friend bool operator==(const BasisAxis&, const BasisAxis&) = default;
};

using AxisPair = std::pair<int, int>;      // strictly increasing encoded indices
using AxisTriple = std::array<int, 3>;     // strictly increasing encoded indices

inline std::string axis_label(int index) { return BasisAxis::from_index(index).label(); }

/// Canonical bivector plane name, e.g. "1^1h" or "1h^2".
inline std::string pair_label(const AxisPair& p) {
  return axis_label(p.first) + "^" + axis_label(p.second);
}

/// Encoded axis pair of the quadrature plane (sigma_k, sigma_k-hat) of phase k.
inline AxisPair quadrature_plane(int phase) {
  return {3 * (phase - 1), 3 * (phase - 1) + 1};
}

/// Grade-1 element sampled over one period: a real coefficient series per
/// basis axis. Absent axes are identically zero.
class GeomVector {
 public:
  GeomVector(const SamplingGrid& grid, int n_phases) : grid_(grid), n_phases_(n_phases) {
    if (n_phases < 1) throw Error("GeomVector: need at least one phase");
  }

  const SamplingGrid& grid() const { return grid_; }
  int n_phases() const { return n_phases_; }
  std::size_t n_samples() const { return grid_.n_samples; }

  void set(const BasisAxis& axis, std::vector<double> series) {
    if (axis.phase < 1 || axis.phase > n_phases_)
      throw Error("GeomVector: axis phase out of range");
    if (series.size() != grid_.n_samples)
      throw Error("GeomVector: series length does not match the grid");
    coeffs_[axis.index()] = std::move(series);
  }
  void set(const BasisAxis& axis, const PhaseSignal& s) {
    if (!(s.grid() == grid_)) throw GridMismatch("GeomVector: signal grid differs");
    set(axis, s.samples());
  }

  const std::vector<double>* find(int axis_index) const {
    auto it = coeffs_.find(axis_index);
    return it == coeffs_.end() ? nullptr : &it->second;
  }
  const std::vector<double>* find(const BasisAxis& axis) const { return find(axis.index()); }

  /// Coefficient of an axis at one sample; zero when the axis is absent.
  double coeff(int axis_index, std::size_t j) const {
    const auto* s = find(axis_index);
    return s ? (*s)[j] : 0.0;
  }

  const std::map<int, std::vector<double>>& coeffs() const { return coeffs_; }

  bool has_breve() const {
    for (const auto& [idx, s] : coeffs_)
      if (BasisAxis::from_index(idx).channel == Channel::breve) return true;
    return false;
  }

  /// Drop axes whose series is exactly zero everywhere.
  void prune() {
    for (auto it = coeffs_.begin(); it != coeffs_.end();) {
      const bool all_zero =
          std::all_of(it->second.begin(), it->second.end(), [](double v) { return v == 0.0; });
      it = all_zero ? coeffs_.erase(it) : std::next(it);
    }
  }

  GeomVector& operator+=(const GeomVector& o) {
    check_grid(o);
    n_phases_ = std::max(n_phases_, o.n_phases_);
    for (const auto& [idx, series] : o.coeffs_) {
      auto& mine = coeffs_.try_emplace(idx, std::vector<double>(grid_.n_samples, 0.0))
                       .first->second;
      for (std::size_t j = 0; j < series.size(); ++j) mine[j] += series[j];
    }
    return *this;
  }
  GeomVector& operator-=(const GeomVector& o) {
    check_grid(o);
    n_phases_ = std::max(n_phases_, o.n_phases_);
    for (const auto& [idx, series] : o.coeffs_) {
      auto& mine = coeffs_.try_emplace(idx, std::vector<double>(grid_.n_samples, 0.0))
                       .first->second;
      for (std::size_t j = 0; j < series.size(); ++j) mine[j] -= series[j];
    }
    return *this;
  }
  GeomVector& operator*=(double s) {
    for (auto& [idx, series] : coeffs_)
      for (auto& v : series) v *= s;
    return *this;
  }

  friend GeomVector operator+(GeomVector a, const GeomVector& b) { return a += b; }
  friend GeomVector operator-(GeomVector a, const GeomVector& b) { return a -= b; }
  friend GeomVector operator*(GeomVector a, double s) { return a *= s; }
  friend GeomVector operator*(double s, GeomVector a) { return a *= s; }

 private:
  void check_grid(const GeomVector& o) const {
    if (!(grid_ == o.grid_)) throw GridMismatch("GeomVector: grids differ");
  }

  SamplingGrid grid_;
  int n_phases_;
  std::map<int, std::vector<double>> coeffs_;
};

/// The plain/hat portion of a vector (everything except breve axes).
inline GeomVector in_band_part(const GeomVector& v) {
  GeomVector out(v.grid(), v.n_phases());
  for (const auto& [idx, series] : v.coeffs())
    if (BasisAxis::from_index(idx).channel != Channel::breve)
      out.set(BasisAxis::from_index(idx), series);
  return out;
}

/// The breve-axis portion of a vector.
inline GeomVector breve_part(const GeomVector& v) {
  GeomVector out(v.grid(), v.n_phases());
  for (const auto& [idx, series] : v.coeffs())
    if (BasisAxis::from_index(idx).channel == Channel::breve)
      out.set(BasisAxis::from_index(idx), series);
  return out;
}

/// Scalar + bivector (+ diagnostic trivector) coefficients per time sample.
class Multivector {
 public:
  explicit Multivector(const SamplingGrid& grid)
      : grid_(grid), scalar_(grid.n_samples, 0.0) {}

  const SamplingGrid& grid() const { return grid_; }
  std::size_t n_samples() const { return grid_.n_samples; }

  std::vector<double>& scalar() { return scalar_; }
  const std::vector<double>& scalar() const { return scalar_; }

  void set_bivector(const AxisPair& p, std::vector<double> series) {
    if (p.first >= p.second) throw Error("Multivector: bivector key must be increasing");
    if (series.size() != grid_.n_samples) throw Error("Multivector: series length mismatch");
    bivector_[p] = std::move(series);
  }
  void set_trivector(const AxisTriple& t, std::vector<double> series) {
    if (!(t[0] < t[1] && t[1] < t[2]))
      throw Error("Multivector: trivector key must be increasing");
    if (series.size() != grid_.n_samples) throw Error("Multivector: series length mismatch");
    trivector_[t] = std::move(series);
  }

  const std::map<AxisPair, std::vector<double>>& bivector() const { return bivector_; }
  const std::map<AxisTriple, std::vector<double>>& trivector() const { return trivector_; }

  bool pure_bivector() const {
    if (!trivector_.empty()) return false;
    return std::all_of(scalar_.begin(), scalar_.end(), [](double v) { return v == 0.0; });
  }

  /// Drop bivector/trivector entries that are exactly zero everywhere.
  void prune() {
    auto all_zero = [](const std::vector<double>& s) {
      return std::all_of(s.begin(), s.end(), [](double v) { return v == 0.0; });
    };
    for (auto it = bivector_.begin(); it != bivector_.end();)
      it = all_zero(it->second) ? bivector_.erase(it) : std::next(it);
    for (auto it = trivector_.begin(); it != trivector_.end();)
      it = all_zero(it->second) ? trivector_.erase(it) : std::next(it);
  }

  Multivector& operator+=(const Multivector& o) {
    check_grid(o);
    for (std::size_t j = 0; j < scalar_.size(); ++j) scalar_[j] += o.scalar_[j];
    for (const auto& [k, s] : o.bivector_) {
      auto& mine =
          bivector_.try_emplace(k, std::vector<double>(grid_.n_samples, 0.0)).first->second;
      for (std::size_t j = 0; j < s.size(); ++j) mine[j] += s[j];
    }
    for (const auto& [k, s] : o.trivector_) {
      auto& mine =
          trivector_.try_emplace(k, std::vector<double>(grid_.n_samples, 0.0)).first->second;
      for (std::size_t j = 0; j < s.size(); ++j) mine[j] += s[j];
    }
    return *this;
  }
  Multivector& operator-=(const Multivector& o) { return *this += o * -1.0; }
  Multivector& operator*=(double s) {
    for (auto& v : scalar_) v *= s;
    for (auto& [k, series] : bivector_)
      for (auto& v : series) v *= s;
    for (auto& [k, series] : trivector_)
      for (auto& v : series) v *= s;
    return *this;
  }

  friend Multivector operator+(Multivector a, const Multivector& b) { return a += b; }
  friend Multivector operator-(Multivector a, const Multivector& b) { return a -= b; }
  friend Multivector operator*(Multivector a, double s) { return a *= s; }

 private:
  void check_grid(const Multivector& o) const {
    if (!(grid_ == o.grid_)) throw GridMismatch("Multivector: grids differ");
  }

  SamplingGrid grid_;
  std::vector<double> scalar_;
  std::map<AxisPair, std::vector<double>> bivector_;
  std::map<AxisTriple, std::vector<double>> trivector_;
};

/// Geometric product of two grade-1 elements: scalar part sum_e a_e b_e, plus
/// the antisymmetric bivector part a_e b_f - a_f b_e on each plane e < f.
inline Multivector geometric_product(const GeomVector& a, const GeomVector& b) {
  if (!(a.grid() == b.grid())) throw GridMismatch("geometric_product: grids differ");
  const std::size_t n = a.n_samples();
  Multivector out(a.grid());
  std::map<AxisPair, std::vector<double>> planes;
  for (const auto& [e, ae] : a.coeffs()) {
    for (const auto& [f, bf] : b.coeffs()) {
      if (e == f) {
        auto& s = out.scalar();
        for (std::size_t j = 0; j < n; ++j) s[j] += ae[j] * bf[j];
        continue;
      }
      const AxisPair key = e < f ? AxisPair{e, f} : AxisPair{f, e};
      const double sign = e < f ? 1.0 : -1.0;
      auto& plane = planes.try_emplace(key, std::vector<double>(n, 0.0)).first->second;
      for (std::size_t j = 0; j < n; ++j) plane[j] += sign * ae[j] * bf[j];
    }
  }
  for (auto& [key, series] : planes) out.set_bivector(key, std::move(series));
  out.prune();
  return out;
}

/// Scalar (inner) part of the geometric product, as a time series.
inline PhaseSignal inner(const GeomVector& a, const GeomVector& b) {
  if (!(a.grid() == b.grid())) throw GridMismatch("inner: grids differ");
  const std::size_t n = a.n_samples();
  std::vector<double> out(n, 0.0);
  for (const auto& [e, ae] : a.coeffs()) {
    const auto* be = b.find(e);
    if (!be) continue;
    for (std::size_t j = 0; j < n; ++j) out[j] += ae[j] * (*be)[j];
  }
  return PhaseSignal(a.grid(), std::move(out));
}

/// Wedge (grade-2) part of the geometric product.
inline Multivector wedge(const GeomVector& a, const GeomVector& b) {
  Multivector out = geometric_product(a, b);
  std::fill(out.scalar().begin(), out.scalar().end(), 0.0);
  return out;
}

/// Reverse: fixes the scalar, negates grades 2 and 3.
inline Multivector reverse(Multivector m) {
  std::vector<double> keep = m.scalar();
  m *= -1.0;
  m.scalar() = std::move(keep);
  return m;
}

/// Per-sample Euclidean norm sqrt(<M M-dagger>_0).
inline PhaseSignal mv_norm(const Multivector& m) {
  const std::size_t n = m.n_samples();
  std::vector<double> out(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) out[j] = m.scalar()[j] * m.scalar()[j];
  for (const auto& [k, s] : m.bivector())
    for (std::size_t j = 0; j < n; ++j) out[j] += s[j] * s[j];
  for (const auto& [k, s] : m.trivector())
    for (std::size_t j = 0; j < n; ++j) out[j] += s[j] * s[j];
  for (auto& v : out) v = std::sqrt(v);
  return PhaseSignal(m.grid(), std::move(out));
}

/// Per-sample norm sqrt(sum_e v_e^2).
inline PhaseSignal vec_norm(const GeomVector& v) {
  const std::size_t n = v.n_samples();
  std::vector<double> out(n, 0.0);
  for (const auto& [e, s] : v.coeffs())
    for (std::size_t j = 0; j < n; ++j) out[j] += s[j] * s[j];
  for (auto& x : out) x = std::sqrt(x);
  return PhaseSignal(v.grid(), std::move(out));
}

/// Inverse of a grade-1 element: v / |v|^2 per sample. Samples whose norm
/// falls below 1e-9 of the peak norm make the inverse undefined and are
/// reported through NearZeroVector.
inline GeomVector inverse_vector(const GeomVector& v) {
  const PhaseSignal norm = vec_norm(v);
  const std::size_t n = v.n_samples();
  double peak = 0.0;
  for (std::size_t j = 0; j < n; ++j) peak = std::max(peak, norm[j]);
  const double eps = 1e-9 * peak;
  std::vector<std::size_t> offending;
  for (std::size_t j = 0; j < n; ++j)
    if (!(norm[j] > eps)) offending.push_back(j);
  if (!offending.empty())
    throw NearZeroVector(std::move(offending),
                         "inverse_vector: vector norm vanishes at " +
                             std::to_string(offending.size()) + " sample(s)");
  GeomVector out(v.grid(), v.n_phases());
  for (const auto& [e, s] : v.coeffs()) {
    std::vector<double> inv(n);
    for (std::size_t j = 0; j < n; ++j) inv[j] = s[j] / (norm[j] * norm[j]);
    out.set(BasisAxis::from_index(e), std::move(inv));
  }
  return out;
}

/// Left product of a vector with a pure bivector, split into its grade-1 part
/// and the grade-3 remainder.
inline std::pair<GeomVector, Multivector> vector_times_bivector(const GeomVector& v,
                                                                const Multivector& b) {
  if (!(v.grid() == b.grid())) throw GridMismatch("vector_times_bivector: grids differ");
  if (!b.pure_bivector())
    throw Error("vector_times_bivector: operand must be a pure bivector");
  const std::size_t n = v.n_samples();
  Multivector grade3(v.grid());
  std::map<int, std::vector<double>> vec_acc;
  std::map<AxisTriple, std::vector<double>> tri_acc;
  auto vec_at = [&](int axis) -> std::vector<double>& {
    return vec_acc.try_emplace(axis, std::vector<double>(n, 0.0)).first->second;
  };
  for (const auto& [e, ve] : v.coeffs()) {
    for (const auto& [plane, bpq] : b.bivector()) {
      const auto [p, q] = plane;
      if (e == p) {  // sigma_p sigma_p sigma_q = sigma_q
        auto& acc = vec_at(q);
        for (std::size_t j = 0; j < n; ++j) acc[j] += ve[j] * bpq[j];
      } else if (e == q) {  // sigma_q sigma_p sigma_q = -sigma_p
        auto& acc = vec_at(p);
        for (std::size_t j = 0; j < n; ++j) acc[j] -= ve[j] * bpq[j];
      } else {
        AxisTriple key{};
        double sign = 1.0;
        if (e < p) {
          key = {e, p, q};
        } else if (e < q) {
          key = {p, e, q};
          sign = -1.0;
        } else {
          key = {p, q, e};
        }
        auto& acc = tri_acc.try_emplace(key, std::vector<double>(n, 0.0)).first->second;
        for (std::size_t j = 0; j < n; ++j) acc[j] += sign * ve[j] * bpq[j];
      }
    }
  }
  const int max_axis = vec_acc.empty() ? 0 : vec_acc.rbegin()->first;
  GeomVector g1(v.grid(), std::max(v.n_phases(), max_axis / 3 + 1));
  for (auto& [axis, series] : vec_acc) g1.set(BasisAxis::from_index(axis), std::move(series));
  for (auto& [key, series] : tri_acc) grade3.set_trivector(key, std::move(series));
  g1.prune();
  grade3.prune();
  return {std::move(g1), std::move(grade3)};
}

}  // namespace gapower
