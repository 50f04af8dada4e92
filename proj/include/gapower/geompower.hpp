#pragma once

#include <cmath>
#include <cstddef>
#include <map>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "gapower/multivector.hpp"
#include "gapower/waveform.hpp"

namespace gapower {

/// Instantaneous geometric power of one analysis window, split into the
/// scalar part m_p, the in-band quadrature planes m_q, and the planes that
/// touch an out-of-band (breve) axis, m_perp. p_classic is the plain
/// sum_k u_k(t) i_k(t) kept for cross-checking.
struct GeomPowerTrace {
  SamplingGrid grid;
  int n_phases = 1;
  PhaseSignal m_p;
  std::map<AxisPair, std::vector<double>> m_q;
  std::map<AxisPair, std::vector<double>> m_perp;
  PhaseSignal p_classic;
};

struct PowerSummary {
  double active_power = 0.0;    // P = mean of m_p, W
  double reactive_power = 0.0;  // Q: summed mean of the (k, k-hat) planes, var
  double rms_u = 0.0;           // RMS over time of |u|
  double rms_i = 0.0;           // RMS over time of |i|
  std::map<AxisPair, double> mq_mean;
};

inline constexpr double inv_sqrt2 = std::numbers::sqrt2 / 2.0;

namespace detail {
inline void check_phases(const std::vector<PhaseSignal>& phases) {
  if (phases.empty()) throw Error("need at least one phase");
  for (const auto& p : phases)
    if (!(p.grid() == phases.front().grid()))
      throw GridMismatch("phase signals live on different grids");
}
}  // namespace detail

/// Geometric voltage: per phase k, u_k/sqrt(2) on the plain axis and
/// H[u_k]/sqrt(2) on the hat axis.
inline GeomVector build_voltage(const std::vector<PhaseSignal>& phases) {
  detail::check_phases(phases);
  GeomVector u(phases.front().grid(), static_cast<int>(phases.size()));
  for (std::size_t k = 0; k < phases.size(); ++k) {
    const int phase = static_cast<int>(k) + 1;
    u.set({phase, Channel::plain}, phases[k] * inv_sqrt2);
    u.set({phase, Channel::hat}, hilbert(phases[k]) * inv_sqrt2);
  }
  u.prune();
  return u;
}

/// Geometric current. In linear mode the layout matches build_voltage and any
/// current energy outside the voltage support beyond the support threshold is
/// an error. In nonlinear mode each phase is band-split: the in-band part and
/// its Hilbert companion go to the plain/hat axes, the out-of-band part to
/// the breve axis.
inline GeomVector build_current(const std::vector<PhaseSignal>& phases,
                                const HarmonicSupport& support, bool nonlinear) {
  detail::check_phases(phases);
  GeomVector i(phases.front().grid(), static_cast<int>(phases.size()));
  if (!nonlinear) {
    double total_sq = 0.0, out_sq = 0.0;
    for (const auto& p : phases) {
      const auto [par, perp] = band_split(p, support);
      const double r_tot = rms(p), r_out = rms(perp);
      total_sq += r_tot * r_tot;
      out_sq += r_out * r_out;
    }
    const double ratio = total_sq > 0.0 ? std::sqrt(out_sq / total_sq) : 0.0;
    if (ratio > support.threshold)
      throw OutOfBandInLinearMode(
          ratio, "build_current: out-of-band current in linear mode (relative RMS " +
                     std::to_string(ratio) + ")");
    for (std::size_t k = 0; k < phases.size(); ++k) {
      const int phase = static_cast<int>(k) + 1;
      i.set({phase, Channel::plain}, phases[k] * inv_sqrt2);
      i.set({phase, Channel::hat}, hilbert(phases[k]) * inv_sqrt2);
    }
  } else {
    for (std::size_t k = 0; k < phases.size(); ++k) {
      const int phase = static_cast<int>(k) + 1;
      const auto [par, perp] = band_split(phases[k], support);
      i.set({phase, Channel::plain}, par * inv_sqrt2);
      i.set({phase, Channel::hat}, hilbert(par) * inv_sqrt2);
      i.set({phase, Channel::breve}, perp * inv_sqrt2);
    }
  }
  i.prune();
  return i;
}

/// M = u i, partitioned by grade and band. The voltage may not carry breve
/// axes; current breve axes feed m_perp only.
inline GeomPowerTrace instantaneous_power(const GeomVector& u, const GeomVector& i) {
  if (u.has_breve()) throw Error("instantaneous_power: voltage cannot carry breve axes");
  if (!(u.grid() == i.grid())) throw GridMismatch("instantaneous_power: grids differ");
  const std::size_t n = u.n_samples();
  Multivector m = geometric_product(u, i);

  GeomPowerTrace trace{u.grid(),
                       std::max(u.n_phases(), i.n_phases()),
                       PhaseSignal(u.grid(), m.scalar()),
                       {},
                       {},
                       PhaseSignal::zeros(u.grid())};

  auto touches_breve = [](const AxisPair& p) {
    return BasisAxis::from_index(p.first).channel == Channel::breve ||
           BasisAxis::from_index(p.second).channel == Channel::breve;
  };
  for (const auto& [plane, series] : m.bivector()) {
    if (touches_breve(plane))
      trace.m_perp.emplace(plane, series);
    else
      trace.m_q.emplace(plane, series);
  }

  // p(t) = sum_k u_k i_k from the raw per-phase waveforms; the geometric
  // coefficients carry 1/sqrt(2) each, hence the factor 2.
  std::vector<double> p_classic(n, 0.0);
  for (int k = 1; k <= trace.n_phases; ++k) {
    const auto* up = u.find(BasisAxis{k, Channel::plain}.index());
    if (!up) continue;
    const auto* ip = i.find(BasisAxis{k, Channel::plain}.index());
    const auto* ib = i.find(BasisAxis{k, Channel::breve}.index());
    for (std::size_t j = 0; j < n; ++j) {
      const double ik = (ip ? (*ip)[j] : 0.0) + (ib ? (*ib)[j] : 0.0);
      p_classic[j] += 2.0 * (*up)[j] * ik;
    }
  }
  trace.p_classic = PhaseSignal(u.grid(), std::move(p_classic));
  return trace;
}

/// Same split through the symmetrized/antisymmetrized products
/// (u i + i u)/2 and (u i - i u)/2; a cross-check path for the direct one.
inline std::pair<PhaseSignal, Multivector> commutator_power(const GeomVector& u,
                                                            const GeomVector& i) {
  Multivector ui = geometric_product(u, i);
  Multivector iu = geometric_product(i, u);
  Multivector sym = (ui + iu) * 0.5;
  Multivector anti = (ui - iu) * 0.5;
  std::fill(anti.scalar().begin(), anti.scalar().end(), 0.0);
  anti.prune();
  return {PhaseSignal(u.grid(), sym.scalar()), std::move(anti)};
}

inline PowerSummary summarize(const GeomPowerTrace& trace, const GeomVector& u,
                              const GeomVector& i) {
  PowerSummary s;
  s.active_power = mean(trace.m_p);
  for (const auto& [plane, series] : trace.m_q)
    s.mq_mean[plane] = mean(PhaseSignal(trace.grid, series));
  for (int k = 1; k <= trace.n_phases; ++k) {
    auto it = s.mq_mean.find(quadrature_plane(k));
    if (it != s.mq_mean.end()) s.reactive_power += it->second;
  }
  s.rms_u = rms(vec_norm(u));
  s.rms_i = rms(vec_norm(i));
  return s;
}

enum class LoadTag { inductive, capacitive, resistive };

/// Per-phase tag from the sign of the averaged (k, k-hat) plane of m_q.
inline std::map<int, LoadTag> classify_load(const GeomPowerTrace& trace) {
  // scale: RMS apparent power of the window
  const std::size_t n = trace.grid.n_samples;
  std::vector<double> sq(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) sq[j] = trace.m_p[j] * trace.m_p[j];
  for (const auto& [plane, series] : trace.m_q)
    for (std::size_t j = 0; j < n; ++j) sq[j] += series[j] * series[j];
  for (const auto& [plane, series] : trace.m_perp)
    for (std::size_t j = 0; j < n; ++j) sq[j] += series[j] * series[j];
  double acc = 0.0;
  for (double v : sq) acc += v;
  const double scale = std::sqrt(acc / static_cast<double>(n));
  const double tol = 1e-9 * scale;

  std::map<int, LoadTag> out;
  for (int k = 1; k <= trace.n_phases; ++k) {
    double avg = 0.0;
    auto it = trace.m_q.find(quadrature_plane(k));
    if (it != trace.m_q.end()) avg = mean(PhaseSignal(trace.grid, it->second));
    out[k] = avg > tol ? LoadTag::inductive : (avg < -tol ? LoadTag::capacitive : LoadTag::resistive);
  }
  return out;
}

/// One circuit branch with its reference-direction sign.
struct PowerBranch {
  GeomVector voltage;
  GeomVector current;
  double orientation = 1.0;
};

/// Signed sum of branch powers; the residual is ~0 for a consistent circuit.
inline Multivector tellegen_sum(const std::vector<PowerBranch>& branches) {
  if (branches.empty()) throw Error("tellegen_sum: need at least one branch");
  Multivector acc(branches.front().voltage.grid());
  for (const auto& b : branches)
    acc += geometric_product(b.voltage, b.current) * b.orientation;
  return acc;
}

}  // namespace gapower
