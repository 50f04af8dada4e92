#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <gapower/waveform.hpp>

#include "support/corpus.hpp"

using namespace gapower;
using Catch::Matchers::WithinAbs;

namespace {

PhaseSignal sine(const SamplingGrid& grid, int order, double amp = 1.0) {
  HarmonicSeries s(grid.omega);
  s.set_term(order, 0.0, amp);
  return sample_series(s, grid);
}

PhaseSignal cosine(const SamplingGrid& grid, int order, double amp = 1.0) {
  HarmonicSeries s(grid.omega);
  s.set_term(order, amp, 0.0);
  return sample_series(s, grid);
}

}  // namespace

TEST_CASE("sampling grid validation", "[waveform]") {
  CHECK_NOTHROW(SamplingGrid(1.0, 4));
  CHECK_THROWS_AS(SamplingGrid(0.0, 16), Error);
  CHECK_THROWS_AS(SamplingGrid(-1.0, 16), Error);
  CHECK_THROWS_AS(SamplingGrid(1.0, 2), Error);
  CHECK_THROWS_AS(SamplingGrid(1.0, 15), Error);
  const SamplingGrid g(2.0, 8);
  CHECK_THAT(g.period(), WithinAbs(std::numbers::pi, 1e-15));
  CHECK_THAT(g.time(4), WithinAbs(std::numbers::pi / 2.0, 1e-15));
}

TEST_CASE("phase signals combine only on identical grids", "[waveform]") {
  const SamplingGrid a(1.0, 8), b(1.0, 16), c(2.0, 8);
  const PhaseSignal x = sine(a, 1), y = sine(a, 2);
  CHECK_NOTHROW(x + y);
  CHECK_THROWS_AS(x + sine(b, 1), GridMismatch);
  CHECK_THROWS_AS(x - sine(c, 1), GridMismatch);
  CHECK_THROWS_AS(PhaseSignal(a, std::vector<double>(4, 0.0)), Error);
  CHECK_THROWS_AS(PhaseSignal(a, std::vector<double>(8, std::nan(""))), Error);
}

TEST_CASE("sample_series basics", "[waveform]") {
  SECTION("sin at quarter points") {
    const SamplingGrid grid(1.0, 4);
    const PhaseSignal s = sine(grid, 1);
    const std::vector<double> expected{0.0, 1.0, 0.0, -1.0};
    for (std::size_t j = 0; j < 4; ++j) CHECK_THAT(s[j], WithinAbs(expected[j], 1e-15));
  }
  SECTION("dc term") {
    const SamplingGrid grid(3.0, 10);
    HarmonicSeries s(3.0);
    s.set_term(0, 5.0, 0.0);
    const PhaseSignal x = sample_series(s, grid);
    for (std::size_t j = 0; j < x.size(); ++j) CHECK(x[j] == 5.0);
  }
  SECTION("the two-harmonic supply waveform") {
    const SamplingGrid grid(1.0, 4096);
    const double amp = 100.0 * std::numbers::sqrt2;
    HarmonicSeries s(1.0);
    s.set_term(1, 0.0, amp);
    s.set_term(3, 0.0, amp);
    const PhaseSignal u = sample_series(s, grid);
    for (std::size_t j = 0; j < u.size(); j += 37) {
      const double t = grid.time(j);
      CHECK_THAT(u[j], WithinAbs(amp * (std::sin(t) + std::sin(3 * t)), 1e-9));
    }
  }
  SECTION("aliasing orders are rejected with the offending order") {
    const SamplingGrid grid(1.0, 16);
    HarmonicSeries s(1.0);
    s.set_term(9, 1.0, 0.0);
    try {
      sample_series(s, grid);
      FAIL("expected AliasingOrder");
    } catch (const AliasingOrder& e) {
      CHECK(e.order == 9);
    }
    HarmonicSeries nyq_sin(1.0);
    nyq_sin.set_term(8, 0.0, 1.0);
    CHECK_THROWS_AS(sample_series(nyq_sin, grid), AliasingOrder);
    HarmonicSeries nyq_cos(1.0);
    nyq_cos.set_term(8, 1.0, 0.0);
    CHECK_NOTHROW(sample_series(nyq_cos, grid));
  }
  SECTION("omega mismatch") {
    HarmonicSeries s(2.0);
    s.set_term(1, 1.0, 0.0);
    CHECK_THROWS_AS(sample_series(s, SamplingGrid(1.0, 8)), GridMismatch);
  }
}

TEST_CASE("harmonic series invariants", "[waveform]") {
  HarmonicSeries s(1.0);
  CHECK_THROWS_AS(s.set_term(-1, 1.0, 0.0), Error);
  CHECK_THROWS_AS(s.set_term(0, 1.0, 2.0), Error);
  s.set_term(4, 1.0, 2.0);
  s.set_term(4, 0.0, 0.0);  // removes
  CHECK(s.terms().empty());
}

TEST_CASE("hilbert transform convention", "[waveform]") {
  const SamplingGrid grid(1.0, 256);
  SECTION("H[sin] = cos and H[cos] = -sin per order") {
    for (int h : {1, 2, 3, 7, 50}) {
      const PhaseSignal hs = hilbert(sine(grid, h));
      const PhaseSignal hc = hilbert(cosine(grid, h));
      const PhaseSignal c = cosine(grid, h), s = sine(grid, h);
      for (std::size_t j = 0; j < grid.n_samples; ++j) {
        CHECK_THAT(hs[j], WithinAbs(c[j], 1e-12));
        CHECK_THAT(hc[j], WithinAbs(-s[j], 1e-12));
      }
    }
  }
  SECTION("dc is annihilated") {
    HarmonicSeries s(1.0);
    s.set_term(0, 7.5, 0.0);
    const PhaseSignal h = hilbert(sample_series(s, grid));
    for (std::size_t j = 0; j < h.size(); ++j) CHECK_THAT(h[j], WithinAbs(0.0, 1e-13));
  }
}

TEST_CASE("hilbert properties on random signals", "[waveform]") {
  std::mt19937 rng(1234);
  const SamplingGrid grid(1.0, 512);
  std::uniform_real_distribution<double> coef(-2.0, 2.0);
  std::uniform_int_distribution<int> order(1, 40);
  for (int trial = 0; trial < 25; ++trial) {
    HarmonicSeries spec(1.0);
    spec.set_term(0, coef(rng), 0.0);
    for (int t = 0; t < 8; ++t) spec.set_term(order(rng), coef(rng), coef(rng));
    const PhaseSignal x = sample_series(spec, grid);
    const PhaseSignal hx = hilbert(x);
    const double scale = testsupport::max_abs(x.samples()) + 1.0;

    // involution: H[H[x]] = -(x - mean)
    const PhaseSignal hhx = hilbert(hx);
    const double m = mean(x);
    for (std::size_t j = 0; j < x.size(); ++j)
      REQUIRE_THAT(hhx[j], WithinAbs(-(x[j] - m), 1e-10 * scale));

    // linearity
    const PhaseSignal y = sample_series(spec, grid) * 0.37 + x * 2.0;
    const PhaseSignal lhs = hilbert(y * 1.0);
    const PhaseSignal rhs = hilbert(sample_series(spec, grid)) * 0.37 + hx * 2.0;
    for (std::size_t j = 0; j < x.size(); ++j)
      REQUIRE_THAT(lhs[j], WithinAbs(rhs[j], 1e-12 * scale));

    // Parseval with dc removed
    const double lhs_p = rms(hx) * rms(hx);
    const double rhs_p = rms(x) * rms(x) - m * m;
    REQUIRE_THAT(lhs_p, WithinAbs(rhs_p, 1e-10 * scale * scale));
  }
}

TEST_CASE("spectrum is an exact inverse of sample_series", "[waveform]") {
  SECTION("quarter-point sine") {
    const SamplingGrid grid(1.0, 4);
    const HarmonicSeries s = spectrum(PhaseSignal(grid, {0.0, 1.0, 0.0, -1.0}));
    REQUIRE(s.terms().size() == 1);
    CHECK_THAT(s.term(1)[0], WithinAbs(0.0, 0.0));
    CHECK_THAT(s.term(1)[1], WithinAbs(1.0, 1e-15));
  }
  SECTION("constant") {
    const SamplingGrid grid(1.0, 8);
    const HarmonicSeries s = spectrum(PhaseSignal(grid, std::vector<double>(8, 5.0)));
    REQUIRE(s.terms().size() == 1);
    CHECK(s.term(0)[0] == 5.0);
  }
  SECTION("round trip on random band-limited signals") {
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> coef(-3.0, 3.0);
    for (std::size_t n : {64u, 250u, 512u}) {
      const SamplingGrid grid(2.0, n);
      HarmonicSeries spec(2.0);
      spec.set_term(0, coef(rng), 0.0);
      for (int h = 1; h <= 20; ++h) spec.set_term(h, coef(rng), coef(rng));
      const PhaseSignal x = sample_series(spec, grid);
      const PhaseSignal back = sample_series(spectrum(x), grid);
      const double scale = testsupport::max_abs(x.samples());
      for (std::size_t j = 0; j < n; ++j)
        REQUIRE_THAT(back[j], WithinAbs(x[j], 1e-12 * scale));
    }
  }
}

TEST_CASE("band_split routes energy by voltage support", "[waveform]") {
  const SamplingGrid grid(1.0, 256);
  SECTION("orders {1,3,5} against support {1,3}") {
    HarmonicSeries s(1.0);
    s.set_term(1, 1.0, 2.0);
    s.set_term(3, -1.0, 0.5);
    s.set_term(5, 0.25, 0.25);
    const PhaseSignal i = sample_series(s, grid);
    const auto [par, perp] = band_split(i, HarmonicSupport{{1, 3}, 1e-6});
    const HarmonicSeries spar = spectrum(par), sperp = spectrum(perp);
    CHECK_THAT(spar.term(1)[1], WithinAbs(2.0, 1e-12));
    CHECK_THAT(spar.term(3)[0], WithinAbs(-1.0, 1e-12));
    CHECK_THAT(testsupport::max_abs({spar.term(5)[0], spar.term(5)[1]}), WithinAbs(0.0, 1e-13));
    CHECK_THAT(sperp.term(5)[0], WithinAbs(0.25, 1e-12));
    CHECK_THAT(sperp.term(1)[0], WithinAbs(0.0, 1e-13));
    // orthogonal and exactly recomposing
    CHECK_THAT(mean(par * perp), WithinAbs(0.0, 1e-10));
    const PhaseSignal re = par + perp;
    for (std::size_t j = 0; j < grid.n_samples; ++j) REQUIRE(re[j] == i[j]);
  }
  SECTION("dc goes out of band when 0 is not in the support") {
    HarmonicSeries s(1.0);
    s.set_term(0, 2.0, 0.0);
    s.set_term(1, 0.0, 1.0);
    const PhaseSignal i = sample_series(s, grid);
    const auto [par, perp] = band_split(i, HarmonicSupport{{1}, 1e-6});
    for (std::size_t j = 0; j < grid.n_samples; ++j) REQUIRE_THAT(perp[j], WithinAbs(2.0, 1e-12));
  }
  SECTION("linear load current splits cleanly") {
    HarmonicSeries s(1.0);
    s.set_term(1, 1.0, 1.0);
    const PhaseSignal i = sample_series(s, grid);
    const auto [par, perp] = band_split(i, HarmonicSupport{{1, 3}, 1e-6});
    CHECK_THAT(rms(perp), WithinAbs(0.0, 1e-13));
  }
}

TEST_CASE("support_of applies the relative cutoff", "[waveform]") {
  HarmonicSeries a(1.0), b(1.0);
  a.set_term(1, 100.0, 0.0);
  a.set_term(3, 0.0, 1.0);
  b.set_term(5, 1e-7, 0.0);  // below threshold relative to 100
  const HarmonicSupport s = support_of({a, b}, 1e-6);
  CHECK(s.orders == std::set<int>{1, 3});
  CHECK_THROWS_AS(support_of({a}, 0.0), Error);
  CHECK_THROWS_AS(support_of({a}, 1.0), Error);
}

TEST_CASE("rms and mean", "[waveform]") {
  const SamplingGrid grid(1.0, 1024);
  CHECK_THAT(rms(sine(grid, 1, 100.0 * std::numbers::sqrt2)), WithinAbs(100.0, 1e-10));
  CHECK_THAT(mean(sine(grid, 1)), WithinAbs(0.0, 1e-14));

  // mean of the scalar power trace 1e4*(1 + sin 2t + cos 2t)
  HarmonicSeries mp(1.0);
  mp.set_term(0, 1e4, 0.0);
  mp.set_term(2, 1e4, 1e4);
  CHECK_THAT(mean(sample_series(mp, grid)), WithinAbs(10000.0, 1e-8));
}
