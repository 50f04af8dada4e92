#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "gapower/errors.hpp"
#include "gapower/waveform.hpp"

// Fixture circuits and the complex-phasor steady-state oracle. This header
// deliberately knows nothing about the geometric kernel so that the two
// computation routes stay independent.

namespace gapower {

struct SeriesRLC {
  double resistance = 0.0;               // ohm
  double inductance = 0.0;               // henry, 0 = absent
  std::optional<double> capacitance{};   // farad, > 0 when present

  void validate() const {
    if (resistance < 0.0 || inductance < 0.0) throw Error("SeriesRLC: negative element");
    if (capacitance && !(*capacitance > 0.0))
      throw Error("SeriesRLC: capacitance must be > 0 when present");
    if (resistance == 0.0 && inductance == 0.0 && !capacitance)
      throw Error("SeriesRLC: at least one element required");
  }
};

/// Complex series impedance at harmonic order h.
inline std::complex<double> rlc_impedance(const SeriesRLC& circ, int h, double omega) {
  double reactance = static_cast<double>(h) * omega * circ.inductance;
  if (circ.capacitance) reactance -= 1.0 / (static_cast<double>(h) * omega * *circ.capacitance);
  return {circ.resistance, reactance};
}

/// Steady-state current of a series RLC load, solved per harmonic with plain
/// complex division. Cos-referenced phasors: a*cos + b*sin <-> a - j b.
inline HarmonicSeries solve_rlc(const SeriesRLC& circ, const HarmonicSeries& voltage) {
  circ.validate();
  HarmonicSeries current(voltage.omega());
  for (const auto& [h, ab] : voltage.terms()) {
    if (h == 0) {
      if (circ.capacitance)
        throw DcWithCapacitor("solve_rlc: dc voltage across a series capacitor");
      throw Error("solve_rlc: dc voltage orders are not supported");
    }
    const std::complex<double> v{ab[0], -ab[1]};
    const std::complex<double> z = rlc_impedance(circ, h, voltage.omega());
    if (std::abs(z) == 0.0)
      throw Error("solve_rlc: zero impedance at order " + std::to_string(h));
    const std::complex<double> i = v / z;
    current.set_term(h, i.real(), -i.imag());
  }
  return current;
}

struct ElementVoltages {
  HarmonicSeries v_resistor;
  HarmonicSeries v_inductor;
  HarmonicSeries v_capacitor;
};

/// Voltage drop across each series element for a given current; the three
/// drops sum back to the supply by construction.
inline ElementVoltages per_element_voltages(const SeriesRLC& circ, const HarmonicSeries& current) {
  circ.validate();
  const double omega = current.omega();
  ElementVoltages out{HarmonicSeries(omega), HarmonicSeries(omega), HarmonicSeries(omega)};
  for (const auto& [h, ab] : current.terms()) {
    const std::complex<double> i{ab[0], -ab[1]};
    auto put = [&](HarmonicSeries& dst, std::complex<double> v) {
      dst.set_term(h, v.real(), -v.imag());
    };
    put(out.v_resistor, i * circ.resistance);
    if (h > 0) {
      const std::complex<double> jw{0.0, static_cast<double>(h) * omega};
      put(out.v_inductor, i * jw * circ.inductance);
      if (circ.capacitance) put(out.v_capacitor, i / (jw * *circ.capacitance));
    }
  }
  return out;
}

struct ScenarioMeta {
  double active_power = 0.0;            // W
  double reactive_power = 0.0;          // var
  std::map<std::string, double> rms;    // expected decomposition norms, A
};

struct Scenario {
  std::string name;
  SamplingGrid grid;
  std::vector<HarmonicSeries> voltage;
  std::vector<HarmonicSeries> current;
  ScenarioMeta meta;
  std::optional<SeriesRLC> circuit;
};

/// Single-phase RLC benchmark. Supply 100*sqrt(2)*(sin t + sin 3t);
/// variant 'a' uses C = 2/3 F, variant 'b' uses C = 2/7 F.
inline Scenario example1(char variant, std::size_t n_samples = 4096) {
  if (variant != 'a' && variant != 'b') throw UnknownName("example1: variant must be a or b");
  const double amplitude = 100.0 * std::numbers::sqrt2;
  SamplingGrid grid(1.0, n_samples);
  HarmonicSeries supply(1.0);
  supply.set_term(1, 0.0, amplitude);
  supply.set_term(3, 0.0, amplitude);
  SeriesRLC circuit{1.0, 0.5, variant == 'a' ? 2.0 / 3.0 : 2.0 / 7.0};

  Scenario s{std::string("ex1") + variant, grid, {supply}, {solve_rlc(circuit, supply)},
             {}, circuit};
  s.meta.active_power = 10000.0;
  s.meta.reactive_power = 0.0;
  if (variant == 'a') {
    s.meta.rms = {{"ip", 100.00}, {"iq", 0.00},  {"iF", 70.71}, {"if", 70.71},
                  {"iB", 0.00},   {"ib", 0.00},  {"i", 100.00}};
  } else {
    s.meta.rms = {{"ip", 82.45},  {"iq", 56.56}, {"iF", 70.71}, {"if", 42.42},
                  {"iB", 0.00},   {"ib", 56.56}, {"i", 100.00}};
  }
  return s;
}

/// Balanced three-phase sinusoidal supply feeding a conductance G on phase 1
/// only; phases 2 and 3 draw no current.
inline Scenario example2(double voltage_rms = 230.0, double conductance = 1.0,
                         double omega = 1.0, std::size_t n_samples = 4096) {
  if (!(voltage_rms > 0.0) || !(conductance > 0.0))
    throw Error("example2: voltage and conductance must be > 0");
  SamplingGrid grid(omega, n_samples);
  const double amp = std::numbers::sqrt2 * voltage_rms;
  const double third = 2.0 * std::numbers::pi / 3.0;

  std::vector<HarmonicSeries> voltage;
  for (int k = 0; k < 3; ++k) {
    // cos(w t - shift) = cos(shift) cos + sin(shift) sin
    const double shift = k == 0 ? 0.0 : (k == 1 ? third : -third);
    HarmonicSeries s(omega);
    s.set_term(1, amp * std::cos(shift), amp * std::sin(shift));
    voltage.push_back(std::move(s));
  }
  std::vector<HarmonicSeries> current{HarmonicSeries(omega), HarmonicSeries(omega),
                                      HarmonicSeries(omega)};
  current[0].set_term(1, conductance * amp, 0.0);

  Scenario s{"ex2", grid, std::move(voltage), std::move(current), {}, {}};
  const double p = conductance * voltage_rms * voltage_rms;
  const double i_total = conductance * voltage_rms;
  s.meta.active_power = p;
  s.meta.reactive_power = 0.0;
  s.meta.rms = {{"ip", i_total / std::sqrt(3.0)},
                {"iq", i_total * std::sqrt(2.0 / 3.0)},
                {"iF", i_total / std::sqrt(3.0)},
                {"if", 0.0},
                {"iB", 0.0},
                {"ib", i_total * std::sqrt(2.0 / 3.0)},
                {"i", i_total}};
  return s;
}

/// Sample all scenario series onto its grid.
inline WaveformSet materialize(const Scenario& s) {
  WaveformSet out{s.grid, {}, {}};
  for (const auto& series : s.voltage) out.voltage.push_back(sample_series(series, s.grid));
  for (const auto& series : s.current) out.current.push_back(sample_series(series, s.grid));
  return out;
}

}  // namespace gapower
