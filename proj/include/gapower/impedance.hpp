#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <set>
#include <string>
#include <vector>

#include "gapower/multivector.hpp"
#include "gapower/waveform.hpp"

namespace gapower {

/// Per-sample instantaneous resistance/reactance of one phase's analytic
/// plane. Samples whose current norm vanishes are flagged, not interpolated;
/// r and x are zero there.
struct ImpedanceTrace {
  SamplingGrid grid;
  std::vector<double> resistance;
  std::vector<double> reactance;
  std::set<std::size_t> singular;
};

/// Z_k = u_k * i_k^{-1} restricted to the (sigma_k, sigma_k-hat) plane,
/// computed directly from the analytic pairs:
///   r = (u i + H[u] H[i]) / (i^2 + H[i]^2)
///   x = (u H[i] - H[u] i) / (i^2 + H[i]^2)
inline ImpedanceTrace instantaneous_impedance(const PhaseSignal& u_plain,
                                              const PhaseSignal& u_hat,
                                              const PhaseSignal& i_plain,
                                              const PhaseSignal& i_hat) {
  const SamplingGrid& grid = u_plain.grid();
  if (!(u_hat.grid() == grid) || !(i_plain.grid() == grid) || !(i_hat.grid() == grid))
    throw GridMismatch("instantaneous_impedance: grids differ");
  const std::size_t n = grid.n_samples;

  std::vector<double> d(n);
  double peak = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    d[j] = i_plain[j] * i_plain[j] + i_hat[j] * i_hat[j];
    peak = std::max(peak, d[j]);
  }
  const double eps = 1e-9 * peak;

  ImpedanceTrace trace{grid, std::vector<double>(n, 0.0), std::vector<double>(n, 0.0), {}};
  for (std::size_t j = 0; j < n; ++j) {
    if (!(d[j] > eps)) {
      trace.singular.insert(j);
      continue;
    }
    trace.resistance[j] = (u_plain[j] * i_plain[j] + u_hat[j] * i_hat[j]) / d[j];
    trace.reactance[j] = (u_plain[j] * i_hat[j] - u_hat[j] * i_plain[j]) / d[j];
  }
  if (trace.singular.size() == n)
    throw AllSingular("instantaneous_impedance: current norm vanishes everywhere");
  return trace;
}

/// Convenience overload pulling phase k's plain/hat pairs out of the built
/// geometric vectors (breve axes are out of band and take no part).
inline ImpedanceTrace phase_impedance(const GeomVector& u, const GeomVector& i, int phase) {
  if (phase < 1 || phase > std::max(u.n_phases(), i.n_phases()))
    throw Error("phase_impedance: phase " + std::to_string(phase) + " out of range");
  auto pick = [](const GeomVector& v, int k, Channel c) {
    const auto* series = v.find(BasisAxis{k, c}.index());
    return series ? PhaseSignal(v.grid(), *series) : PhaseSignal::zeros(v.grid());
  };
  return instantaneous_impedance(pick(u, phase, Channel::plain), pick(u, phase, Channel::hat),
                                 pick(i, phase, Channel::plain), pick(i, phase, Channel::hat));
}

}  // namespace gapower
