#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <map>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "gapower/geompower.hpp"
#include "gapower/multivector.hpp"
#include "gapower/waveform.hpp"

namespace gapower {

enum class CurrentComponent {
  parallel,            // i_p
  quadrature,          // i_q
  fryze,               // i_F
  fryze_complement,    // i_f
  budeanu,             // i_B
  budeanu_complement,  // i_b
  out_of_band          // i_perp
};

inline const std::vector<CurrentComponent>& all_components() {
  static const std::vector<CurrentComponent> order{
      CurrentComponent::parallel,         CurrentComponent::quadrature,
      CurrentComponent::fryze,            CurrentComponent::fryze_complement,
      CurrentComponent::budeanu,          CurrentComponent::budeanu_complement,
      CurrentComponent::out_of_band};
  return order;
}

inline std::string component_key(CurrentComponent c) {
  switch (c) {
    case CurrentComponent::parallel: return "ip";
    case CurrentComponent::quadrature: return "iq";
    case CurrentComponent::fryze: return "iF";
    case CurrentComponent::fryze_complement: return "if";
    case CurrentComponent::budeanu: return "iB";
    case CurrentComponent::budeanu_complement: return "ib";
    case CurrentComponent::out_of_band: return "iperp";
  }
  throw Error("component_key: unknown component");
}

/// Display name as used in the printed norms table, e.g. "i_p".
inline std::string component_display(CurrentComponent c) {
  switch (c) {
    case CurrentComponent::parallel: return "i_p";
    case CurrentComponent::quadrature: return "i_q";
    case CurrentComponent::fryze: return "i_F";
    case CurrentComponent::fryze_complement: return "i_f";
    case CurrentComponent::budeanu: return "i_B";
    case CurrentComponent::budeanu_complement: return "i_b";
    case CurrentComponent::out_of_band: return "i_perp";
  }
  throw Error("component_display: unknown component");
}

struct CurrentDecomposition {
  std::map<CurrentComponent, GeomVector> components;
  std::map<CurrentComponent, double> rms;  // RMS over time of the vector norm
  std::map<CurrentComponent, std::vector<PhaseSignal>> time_domain;
  /// Samples where the voltage norm vanished and the projected series were
  /// patched by interpolation from their neighbours (isolated zeros only).
  std::vector<std::size_t> interpolated_samples;
  /// Largest grade-3 leakage of u * M_q relative to the window's scale.
  double trivector_residual = 0.0;
};

/// Componentwise Hilbert transform of a plain/hat vector. On an analytic
/// layout this rotates every (k, k-hat) plane by -90 degrees and removes dc.
inline GeomVector hilbert_geomvector(const GeomVector& u) {
  if (u.has_breve()) throw Error("hilbert_geomvector: breve axes are not transformable");
  GeomVector out(u.grid(), u.n_phases());
  for (const auto& [idx, series] : u.coeffs())
    out.set(BasisAxis::from_index(idx), hilbert(PhaseSignal(u.grid(), series)));
  out.prune();
  return out;
}

/// Per-phase time-domain projection: sqrt(2) times the coefficient series of
/// the chosen channel. The hat channel is quadrature bookkeeping and is never
/// summed into the phase waveform.
inline std::vector<PhaseSignal> project_time(const GeomVector& v,
                                             Channel channel = Channel::plain) {
  std::vector<PhaseSignal> out;
  out.reserve(static_cast<std::size_t>(v.n_phases()));
  for (int k = 1; k <= v.n_phases(); ++k) {
    const auto* series = v.find(BasisAxis{k, channel}.index());
    if (!series) {
      out.push_back(PhaseSignal::zeros(v.grid()));
      continue;
    }
    std::vector<double> scaled(series->size());
    for (std::size_t j = 0; j < scaled.size(); ++j)
      scaled[j] = std::numbers::sqrt2 * (*series)[j];
    out.emplace_back(v.grid(), std::move(scaled));
  }
  return out;
}

namespace detail {

/// Mark samples whose voltage norm is below 1e-9 of its peak. Isolated marks
/// (short circular runs) are tolerated and later patched; anything larger
/// means the voltage is genuinely not invertible.
inline std::vector<std::size_t> near_zero_mask(const std::vector<double>& norm,
                                               std::vector<bool>& mask) {
  const std::size_t n = norm.size();
  double peak = 0.0;
  for (double v : norm) peak = std::max(peak, v);
  const double eps = 1e-9 * peak;
  mask.assign(n, false);
  std::vector<std::size_t> marked;
  for (std::size_t j = 0; j < n; ++j) {
    if (!(norm[j] > eps)) {
      mask[j] = true;
      marked.push_back(j);
    }
  }
  if (marked.size() == n)
    throw NearZeroVector(std::move(marked), "decompose: voltage norm vanishes everywhere");
  if (marked.size() > n / 16)
    throw NearZeroVector(std::move(marked),
                         "decompose: voltage norm vanishes on too many samples");
  // longest circular run of marked samples
  std::size_t longest = 0, run = 0;
  for (std::size_t j = 0; j < 2 * n; ++j) {
    if (mask[j % n]) {
      ++run;
      longest = std::max(longest, run);
      if (run >= n) break;
    } else {
      run = 0;
    }
  }
  if (longest > 4)
    throw NearZeroVector(std::move(marked),
                         "decompose: voltage norm vanishes on a run of " +
                             std::to_string(longest) + " samples");
  return marked;
}

/// Replace masked samples by interpolation from the nearest valid neighbours
/// (circularly): cubic through two anchors on each side, linear when the
/// window is too crowded.
inline void patch_masked(std::vector<double>& series, const std::vector<bool>& mask) {
  const std::size_t n = series.size();
  auto prev_valid = [&](std::size_t j) {
    do { j = (j + n - 1) % n; } while (mask[j]);
    return j;
  };
  auto next_valid = [&](std::size_t j) {
    do { j = (j + 1) % n; } while (mask[j]);
    return j;
  };
  auto offset = [&](std::size_t from, std::size_t to) {
    // signed circular distance from -> to, in (-n/2, n/2]
    const auto d = static_cast<long long>((to + n - from) % n);
    return static_cast<double>(d > static_cast<long long>(n) / 2
                                   ? d - static_cast<long long>(n)
                                   : d);
  };
  const std::vector<double> snapshot = series;
  for (std::size_t j = 0; j < n; ++j) {
    if (!mask[j]) continue;
    const std::size_t l1 = prev_valid(j), r1 = next_valid(j);
    const std::size_t l2 = prev_valid(l1), r2 = next_valid(r1);
    std::vector<std::pair<double, double>> anchors{{offset(j, l1), snapshot[l1]},
                                                   {offset(j, r1), snapshot[r1]}};
    if (l2 != r1 && l2 != j) anchors.push_back({offset(j, l2), snapshot[l2]});
    if (r2 != l1 && r2 != j && r2 != l2) anchors.push_back({offset(j, r2), snapshot[r2]});
    double value = 0.0;
    for (std::size_t a = 0; a < anchors.size(); ++a) {
      double basis = 1.0;
      for (std::size_t b = 0; b < anchors.size(); ++b) {
        if (a == b) continue;
        basis *= (0.0 - anchors[b].first) / (anchors[a].first - anchors[b].first);
      }
      value += anchors[a].second * basis;
    }
    series[j] = value;
  }
}

}  // namespace detail

/// Decompose the geometric current against the geometric voltage into
/// i_p, i_q, i_F, i_f, i_B, i_b and i_perp, with time-domain reconstructions
/// and RMS norms. Only the in-band power is used for the projection; isolated
/// zeros of the voltage norm are patched by interpolation.
inline CurrentDecomposition decompose(const GeomVector& u, const GeomVector& i) {
  if (u.has_breve()) throw Error("decompose: voltage must not carry breve axes");
  if (!(u.grid() == i.grid())) throw GridMismatch("decompose: grids differ");
  const std::size_t n = u.n_samples();

  const GeomVector i_par = in_band_part(i);
  const GeomVector i_perp = breve_part(i);

  // |u|^2 per sample and the near-zero mask
  std::vector<double> den(n, 0.0);
  for (const auto& [e, s] : u.coeffs())
    for (std::size_t j = 0; j < n; ++j) den[j] += s[j] * s[j];
  std::vector<double> norm(n);
  for (std::size_t j = 0; j < n; ++j) norm[j] = std::sqrt(den[j]);
  std::vector<bool> mask;
  std::vector<std::size_t> patched = detail::near_zero_mask(norm, mask);

  const Multivector m = geometric_product(u, i_par);
  const std::vector<double>& m_p = m.scalar();

  // i_p = u * m_p / |u|^2, patched at masked samples
  GeomVector i_p(u.grid(), std::max(u.n_phases(), i.n_phases()));
  for (const auto& [e, s] : u.coeffs()) {
    std::vector<double> proj(n, 0.0);
    for (std::size_t j = 0; j < n; ++j)
      if (!mask[j]) proj[j] = s[j] * m_p[j] / den[j];
    detail::patch_masked(proj, mask);
    i_p.set(BasisAxis::from_index(e), std::move(proj));
  }
  i_p.prune();
  GeomVector i_q = i_par - i_p;
  i_q.prune();

  // grade-3 leakage of u * M_q; analytically zero, kept as a tripwire
  Multivector m_q_only(u.grid());
  for (const auto& [plane, series] : m.bivector()) m_q_only.set_bivector(plane, series);
  const auto [iq_raw, grade3] = vector_times_bivector(u, m_q_only);
  double tri_peak = 0.0;
  for (const auto& [key, series] : grade3.trivector())
    for (double v : series) tri_peak = std::max(tri_peak, std::abs(v));
  double norm_peak = 0.0, mq_peak = 0.0;
  for (double v : norm) norm_peak = std::max(norm_peak, v);
  const PhaseSignal mq_norm = mv_norm(m_q_only);
  for (double v : mq_norm.samples()) mq_peak = std::max(mq_peak, v);
  const double tri_scale = norm_peak * mq_peak;
  const double residual = tri_scale > 0.0 ? tri_peak / tri_scale : 0.0;
  if (residual > 1e-10)
    throw Error("decompose: grade-3 residual of u*M_q exceeds tolerance (" +
                std::to_string(residual) + ")");

  double ubar2 = 0.0;
  for (double v : den) ubar2 += v;
  ubar2 /= static_cast<double>(n);

  double active_power = 0.0;
  for (double v : m_p) active_power += v;
  active_power /= static_cast<double>(n);

  double reactive_power = 0.0;
  for (int k = 1; k <= u.n_phases(); ++k) {
    auto it = m.bivector().find(quadrature_plane(k));
    if (it == m.bivector().end()) continue;
    double acc = 0.0;
    for (double v : it->second) acc += v;
    reactive_power += acc / static_cast<double>(n);
  }

  GeomVector i_fryze = u * (active_power / ubar2);
  GeomVector i_f = i_p - i_fryze;
  i_f.prune();
  // The Budeanu current lies along the +90 degree rotation of u; under this
  // Hilbert convention (H[sin] = cos) that rotation is -H[u].
  GeomVector i_budeanu = hilbert_geomvector(u) * (-reactive_power / ubar2);
  i_budeanu.prune();
  GeomVector i_b = i_q - i_budeanu;
  i_b.prune();

  CurrentDecomposition out;
  out.interpolated_samples = std::move(patched);
  out.trivector_residual = residual;
  out.components.emplace(CurrentComponent::parallel, std::move(i_p));
  out.components.emplace(CurrentComponent::quadrature, std::move(i_q));
  out.components.emplace(CurrentComponent::fryze, std::move(i_fryze));
  out.components.emplace(CurrentComponent::fryze_complement, std::move(i_f));
  out.components.emplace(CurrentComponent::budeanu, std::move(i_budeanu));
  out.components.emplace(CurrentComponent::budeanu_complement, std::move(i_b));
  out.components.emplace(CurrentComponent::out_of_band, std::move(i_perp));
  for (const auto& [c, vec] : out.components) {
    out.rms[c] = rms(vec_norm(vec));
    out.time_domain[c] = project_time(
        vec, c == CurrentComponent::out_of_band ? Channel::breve : Channel::plain);
  }
  return out;
}

struct SequenceComponents {
  GeomVector zero;
  GeomVector negative;
  GeomVector positive;
};

/// Symmetrical-component split of a three-phase in-band vector, computed per
/// harmonic on the plain-axis spectra; hat axes are regenerated through the
/// Hilbert transform.
inline SequenceComponents sequence_split(const GeomVector& v) {
  if (v.n_phases() != 3) throw Error("sequence_split: expects exactly three phases");
  if (v.has_breve()) throw Error("sequence_split: expects an in-band vector");
  const SamplingGrid& grid = v.grid();

  std::array<HarmonicSeries, 3> spectra{HarmonicSeries(grid.omega), HarmonicSeries(grid.omega),
                                        HarmonicSeries(grid.omega)};
  for (int k = 0; k < 3; ++k) {
    const auto* series = v.find(BasisAxis{k + 1, Channel::plain}.index());
    if (series) spectra[k] = spectrum(PhaseSignal(grid, *series));
  }

  std::set<int> orders;
  for (const auto& s : spectra)
    for (const auto& [h, ab] : s.terms()) orders.insert(h);

  // cos-referenced phasor: a*cos + b*sin  <->  a - j b
  const std::complex<double> alpha = std::polar(1.0, 2.0 * std::numbers::pi / 3.0);
  std::array<HarmonicSeries, 3> zero_s{HarmonicSeries(grid.omega), HarmonicSeries(grid.omega),
                                       HarmonicSeries(grid.omega)};
  auto neg_s = zero_s, pos_s = zero_s;
  for (int h : orders) {
    std::array<std::complex<double>, 3> x;
    for (int k = 0; k < 3; ++k) {
      const auto ab = spectra[k].term(h);
      x[k] = {ab[0], -ab[1]};
    }
    const std::complex<double> z = (x[0] + x[1] + x[2]) / 3.0;
    const std::complex<double> p = (x[0] + alpha * x[1] + alpha * alpha * x[2]) / 3.0;
    const std::complex<double> m = (x[0] + alpha * alpha * x[1] + alpha * x[2]) / 3.0;
    const std::array<std::complex<double>, 3> rot_pos{1.0, alpha * alpha, alpha};
    const std::array<std::complex<double>, 3> rot_neg{1.0, alpha, alpha * alpha};
    for (int k = 0; k < 3; ++k) {
      auto put = [&](HarmonicSeries& dst, std::complex<double> ph) {
        // dc and Nyquist bins carry no quadrature on the grid
        if (h == 0 || static_cast<std::size_t>(h) == grid.n_samples / 2) {
          dst.set_term(h, ph.real(), 0.0);
          return;
        }
        dst.set_term(h, ph.real(), -ph.imag());
      };
      put(zero_s[k], z);
      put(pos_s[k], p * rot_pos[static_cast<std::size_t>(k)]);
      put(neg_s[k], m * rot_neg[static_cast<std::size_t>(k)]);
    }
  }

  auto build = [&](const std::array<HarmonicSeries, 3>& per_phase) {
    GeomVector out(grid, 3);
    for (int k = 0; k < 3; ++k) {
      PhaseSignal plain = sample_series(per_phase[static_cast<std::size_t>(k)], grid);
      out.set({k + 1, Channel::plain}, plain);
      out.set({k + 1, Channel::hat}, hilbert(plain));
    }
    out.prune();
    return out;
  };
  return {build(zero_s), build(neg_s), build(pos_s)};
}

}  // namespace gapower
