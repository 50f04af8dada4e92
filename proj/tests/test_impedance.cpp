#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdlib>
#include <numbers>
#include <random>
#include <vector>

#include <gapower/geompower.hpp>
#include <gapower/impedance.hpp>
#include <gapower/scenarios.hpp>

#include "support/corpus.hpp"

using namespace gapower;
using Catch::Matchers::WithinAbs;

namespace {

struct BuiltPair {
  GeomVector u;
  GeomVector i;
};

BuiltPair build(const Scenario& s) {
  const WaveformSet waves = materialize(s);
  return {build_voltage(waves.voltage),
          build_current(waves.current, support_of(s.voltage, 1e-6), false)};
}

bool near_singular(const ImpedanceTrace& trace, std::size_t j, std::size_t guard = 2) {
  const std::size_t n = trace.grid.n_samples;
  for (std::size_t s : trace.singular) {
    const std::size_t d = j > s ? j - s : s - j;
    if (std::min(d, n - d) <= guard) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("worked circuit impedances", "[impedance]") {
  SECTION("circuit a: resistive trace with genuine singularities") {
    const auto [u, i] = build(example1('a'));
    const ImpedanceTrace z = phase_impedance(u, i, 1);
    // d ~ 1 + sin 2t vanishes at 3pi/4 and 7pi/4, hit exactly at N = 4096
    CHECK(z.singular.contains(1536));
    CHECK(z.singular.contains(3584));
    for (std::size_t j = 0; j < z.grid.n_samples; j += 3) {
      if (near_singular(z, j)) continue;
      const double t = z.grid.time(j);
      const double expected = 1.0 + std::cos(2 * t) / (1.0 + std::sin(2 * t));
      REQUIRE_THAT(z.resistance[j], WithinAbs(expected, 1e-9 * std::max(1.0, std::abs(expected))));
      REQUIRE_THAT(z.reactance[j], WithinAbs(0.0, 1e-9));
    }
  }
  SECTION("circuit b: resistance and reactance traces") {
    const auto [u, i] = build(example1('b'));
    const ImpedanceTrace z = phase_impedance(u, i, 1);
    CHECK(z.singular.empty());  // 5 + 3 sin 2t never vanishes
    for (std::size_t j = 0; j < z.grid.n_samples; j += 3) {
      const double t = z.grid.time(j);
      const double den = 5.0 + 3.0 * std::sin(2 * t);
      REQUIRE_THAT(z.resistance[j], WithinAbs(1.0 + 5.0 * std::cos(2 * t) / den, 1e-9 * 3.0));
      REQUIRE_THAT(z.reactance[j], WithinAbs(-4.0 * std::sin(2 * t) / den, 1e-9 * 3.0));
    }
  }
}

TEST_CASE("pure resistor under any excitation", "[impedance]") {
  const SamplingGrid grid(1.0, 512);
  HarmonicSeries supply(1.0);
  supply.set_term(1, 3.0, 1.0);
  supply.set_term(4, 0.5, -0.25);
  supply.set_term(9, 0.1, 0.9);
  const PhaseSignal u_t = sample_series(supply, grid);
  const double r_load = 7.5;
  const WaveformSet waves{grid, {u_t}, {u_t * (1.0 / r_load)}};
  const GeomVector u = build_voltage(waves.voltage);
  const GeomVector i = build_current(waves.current, support_of({supply}, 1e-6), false);
  const ImpedanceTrace z = phase_impedance(u, i, 1);
  for (std::size_t j = 0; j < grid.n_samples; ++j) {
    if (near_singular(z, j)) continue;
    REQUIRE_THAT(z.resistance[j], WithinAbs(r_load, 1e-9 * r_load));
    REQUIRE_THAT(z.reactance[j], WithinAbs(0.0, 1e-9 * r_load));
  }
}

TEST_CASE("single-harmonic loads give the phasor impedance", "[impedance]") {
  std::mt19937 rng(2024);
  std::uniform_real_distribution<double> rr(0.2, 10.0), rl(0.0, 2.0), rc(0.1, 5.0);
  const SamplingGrid grid(1.0, 256);
  for (int trial = 0; trial < 25; ++trial) {
    SeriesRLC circ{rr(rng), rl(rng), {}};
    if (trial % 2 == 0) circ.capacitance = rc(rng);
    HarmonicSeries supply(1.0);
    supply.set_term(1, 10.0, 5.0);
    const HarmonicSeries current = solve_rlc(circ, supply);
    const WaveformSet waves{grid, {sample_series(supply, grid)},
                            {sample_series(current, grid)}};
    const GeomVector u = build_voltage(waves.voltage);
    const GeomVector i = build_current(waves.current, support_of({supply}, 1e-6), false);
    const ImpedanceTrace z = phase_impedance(u, i, 1);
    const auto zc = rlc_impedance(circ, 1, 1.0);
    for (std::size_t j = 0; j < grid.n_samples; j += 5) {
      REQUIRE_THAT(z.resistance[j], WithinAbs(zc.real(), 1e-9 * std::abs(zc)));
      REQUIRE_THAT(z.reactance[j], WithinAbs(zc.imag(), 1e-9 * std::abs(zc)));
    }
    // reactance sign matches the load tag
    const auto tag = classify_load(instantaneous_power(u, i)).at(1);
    if (zc.imag() > 1e-9)
      CHECK(tag == LoadTag::inductive);
    else if (zc.imag() < -1e-9)
      CHECK(tag == LoadTag::capacitive);
  }
}

TEST_CASE("impedance reconstructs the voltage pair", "[impedance]") {
  const auto [u, i] = build(example1('b', 1024));
  const ImpedanceTrace z = phase_impedance(u, i, 1);
  const auto& up = *u.find(BasisAxis{1, Channel::plain}.index());
  const auto& uh = *u.find(BasisAxis{1, Channel::hat}.index());
  const auto& ip = *i.find(BasisAxis{1, Channel::plain}.index());
  const auto& ih = *i.find(BasisAxis{1, Channel::hat}.index());
  const double scale = testsupport::max_abs(up);
  for (std::size_t j = 0; j < z.grid.n_samples; ++j) {
    if (near_singular(z, j)) continue;
    // (r + x sigma) acting on the current pair
    REQUIRE_THAT(z.resistance[j] * ip[j] + z.reactance[j] * ih[j],
                 WithinAbs(up[j], 1e-9 * scale));
    REQUIRE_THAT(z.resistance[j] * ih[j] - z.reactance[j] * ip[j],
                 WithinAbs(uh[j], 1e-9 * scale));
  }
}

TEST_CASE("direct computation agrees with the multivector kernel", "[impedance]") {
  const auto [u, i] = build(example1('b', 512));
  const ImpedanceTrace z = phase_impedance(u, i, 1);
  const Multivector kernel = geometric_product(u, inverse_vector(i));
  const AxisPair plane = quadrature_plane(1);
  for (std::size_t j = 0; j < z.grid.n_samples; j += 3) {
    REQUIRE_THAT(z.resistance[j], WithinAbs(kernel.scalar()[j], 1e-12 * 10.0));
    REQUIRE_THAT(z.reactance[j], WithinAbs(kernel.bivector().at(plane)[j], 1e-12 * 10.0));
  }
}

TEST_CASE("zero current is fully singular", "[impedance]") {
  const SamplingGrid grid(1.0, 64);
  const PhaseSignal z = PhaseSignal::zeros(grid);
  HarmonicSeries supply(1.0);
  supply.set_term(1, 1.0, 0.0);
  const PhaseSignal u_t = sample_series(supply, grid);
  CHECK_THROWS_AS(instantaneous_impedance(u_t, hilbert(u_t), z, z), AllSingular);
  CHECK_THROWS_AS(
      instantaneous_impedance(u_t, hilbert(u_t), z, PhaseSignal(SamplingGrid(1.0, 128),
                                                                std::vector<double>(128, 0.0))),
      GridMismatch);
}
