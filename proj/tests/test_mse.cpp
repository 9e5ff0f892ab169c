#include <doctest.h>

#include <array>
#include <cmath>
#include <numbers>
#include <random>

#include "kgwell/boundstates.hpp"
#include "kgwell/errors.hpp"
#include "kgwell/mse.hpp"
#include "oracles.hpp"

using namespace kgwell;
using std::numbers::pi;

namespace {

double rel(cplx a, cplx b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace

TEST_CASE("step coefficients: worked examples") {
  WellConfig free{0.0, 3.0, 1.0};
  auto f = step_coefficients(outside_momentum(0.8, free), free);
  CHECK(std::abs(f.rl) < 1e-15);
  CHECK(std::abs(f.rr) < 1e-15);
  CHECK(std::abs(f.tl - 1.0) < 1e-15);
  CHECK(std::abs(f.tr - 1.0) < 1e-14);

  WellConfig w{5.0, 400.0, 1.0};
  auto s = step_coefficients(outside_momentum(1.0, w), w);
  // mpmath: (1 - q)/(1 + q) with q = -3.443524992833513545
  CHECK(s.rl.real() == doctest::Approx(-1.818489684314952880).epsilon(1e-13));
  CHECK(std::abs(s.rl.imag()) < 1e-15);
  CHECK(std::abs(s.rl) > 1.0);
  CHECK(std::abs(s.rr) > 1.0);

  WellConfig b{1.5, 10.0, 1.0};
  auto bs = step_coefficients(outside_momentum(0.5, b), b);
  CHECK(std::abs(bs.rl) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("step coefficients agree with the direct 2x2 solves") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> P(0.05, 12.0), V(0.0, 40.0), Lr(0.5, 20.0);
  int counts[3] = {0, 0, 0};
  for (int i = 0; i < 3000; ++i) {
    WellConfig w{V(rng), Lr(rng), 1.0};
    const double p = P(rng);
    ModeSolution m;
    StepCoefficients sc;
    try {
      m = outside_momentum(p, w);
      sc = step_coefficients(m, w);
    } catch (const DegenerateChannel&) {
      continue;
    }
    ++counts[static_cast<int>(m.regime)];
    const auto left = oracle::solve_left_step(p, m.q);
    const auto right = oracle::solve_right_step(p, m.q, w.width);
    CHECK(rel(sc.rl, left.r) < 1e-10);
    CHECK(rel(sc.tl, left.t) < 1e-10);
    CHECK(rel(sc.rr, right.r) < 1e-10);
    if (m.regime != Regime::Bound) CHECK(rel(sc.tr, right.t) < 1e-10);
  }
  for (int c : counts) CHECK(c > 100);
}

TEST_CASE("flux balance at a step with real q") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> P(0.05, 12.0), V(0.0, 40.0);
  for (int i = 0; i < 1000; ++i) {
    WellConfig w{V(rng), 2.0, 1.0};
    const double p = P(rng);
    try {
      const auto m = outside_momentum(p, w);
      if (m.regime == Regime::Bound) continue;
      const auto sc = step_coefficients(m, w);
      const double lhs = p * (1.0 - std::norm(sc.rl));
      const double rhs = m.q.real() * std::norm(sc.tl);
      CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(lhs)));
      if (m.regime == Regime::Supercritical) CHECK(std::abs(sc.rl) > 1.0);
      if (m.regime == Regime::OpenChannel) CHECK(std::abs(sc.rl) < 1.0);
    } catch (const DegenerateChannel&) {
    }
  }
}

TEST_CASE("step coefficients: degenerate channels") {
  // E = V0 - mc^2 : q = 0
  WellConfig w{std::sqrt(2.0) + 1.0, 1.0, 1.0};
  CHECK_THROWS_AS(outside_momentum(1.0, w), DegenerateChannel);
  // E = V0/2 gives q = -p in the supercritical regime
  WellConfig h{10.0, 1.0, 1.0};
  const double p = std::sqrt(24.0);
  const auto m = outside_momentum(p, h);
  CHECK(m.regime == Regime::Supercritical);
  CHECK_THROWS_AS(step_coefficients(m, h), DegenerateChannel);
}

TEST_CASE("infinite-well limit of the step coefficients") {
  const double L = 1.0;
  for (int k = 1; k <= 3; ++k) {
    const double p = k * pi / L;
    WellConfig w{1e7, L, 1.0};
    const auto sc = step_coefficients(outside_momentum(p, w), w);
    CHECK(std::abs(sc.rl + 1.0) < 1e-5);
    CHECK(std::abs(sc.rr * sc.rl - 1.0) < 1e-5);
  }
}

TEST_CASE("series factor") {
  CHECK(series_factor(0.0, 0.3, 10) == cplx(1.0));
  CHECK(series_factor(1.0, 1.0, 10) == cplx(11.0));
  CHECK(series_factor(0.5, 0.5, 0) == cplx(1.0));
  const cplx z = std::polar(0.9, 0.4);
  CHECK(rel(series_factor(z, 1.0, kConvergedSeries), 1.0 / (1.0 - z)) < 1e-15);
  // a long truncation approaches the closed form
  CHECK(rel(series_factor(z, 1.0, 2000), 1.0 / (1.0 - z)) < 1e-12);
  // |z| > 1: grows with the order and has no closed form
  CHECK(std::abs(series_factor(1.2, 1.0, 20)) > std::abs(series_factor(1.2, 1.0, 10)));
  CHECK_THROWS_AS(series_factor(1.2, 1.0, kConvergedSeries), DivergentSeries);
  CHECK_THROWS_AS(series_factor(1.0, 1.0, kConvergedSeries), DivergentSeries);
  CHECK_THROWS_AS(series_factor(0.5, 1.0, -5), InvalidConfig);
}

TEST_CASE("mse amplitudes at nmax = 0 are the single-pass terms") {
  WellConfig w{5.0, 10.0, 1.0};
  const auto m = outside_momentum(1.0, w);
  const auto sc = step_coefficients(m, w);
  const auto a = mse_amplitudes(m, w, 1.0, 0.0, 0);
  CHECK(a.A2 == cplx(1.0));
  CHECK(rel(a.B2, sc.rr) < 1e-15);
  CHECK(rel(a.B1, sc.tl * sc.rr) < 1e-15);
  CHECK(rel(a.A3, sc.tr) < 1e-15);
  CHECK(a.A1 == cplx(0.0));
  CHECK(a.B3 == cplx(0.0));
}

namespace {

// Continuity at each step, with the launched wave removed from the component that
// step reflects: alpha e^{ipx} never reached x = 0 and beta e^{-ipx} never reached x = L.
std::array<double, 4> step_residuals(const MseAmplitudes& a, double p, cplx q, double L) {
  const auto left = oracle::matching_residuals(a.B1, a.A2 - a.alpha, a.B2, a.A3, p, q, L);
  const auto right = oracle::matching_residuals(a.B1, a.A2, a.B2 - a.beta, a.A3, p, q, L);
  return {left[0], left[1], right[2], right[3]};
}

}  // namespace

TEST_CASE("converged series satisfies the continuity conditions") {
  std::mt19937_64 rng(17);
  WellConfig w{1.5, 10.0, 1.0};
  const auto win = bound_window(w);
  std::uniform_real_distribution<double> P(win.lo + 1e-3, win.hi - 1e-3);
  std::uniform_real_distribution<double> A(-1.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const double p = P(rng);
    const auto m = outside_momentum(p, w);
    const cplx alpha(A(rng), A(rng)), beta(A(rng), A(rng));
    const auto a = mse_amplitudes(m, w, alpha, beta, kConvergedSeries);
    const double scale = std::abs(a.A2) + std::abs(a.B2) + 1.0;
    for (double r : step_residuals(a, p, m.q, w.width)) CHECK(r < 1e-12 * scale);
  }
}

TEST_CASE("truncated series misses continuity by the next pass only") {
  WellConfig w{5.0, 10.0, 1.0};
  const double p = 1.0;
  const auto m = outside_momentum(p, w);
  const auto sc = step_coefficients(m, w);
  const double z = std::abs(sc.rr * sc.rl);
  for (int n : {0, 3, 10}) {
    CAPTURE(n);
    const auto a = mse_amplitudes(m, w, 1.0, 0.0, n);
    const auto r = step_residuals(a, p, m.q, w.width);
    CHECK(r[0] == doctest::Approx(std::pow(z, n + 1)).epsilon(1e-10));
    const double scale = std::abs(a.A2) * std::abs(std::exp(cplx(0, 1) * m.q * w.width)) * p;
    CHECK(r[2] < 1e-12 * scale);
    CHECK(r[3] < 1e-12 * scale);
  }
}

TEST_CASE("mirror symmetry of the amplitudes") {
  for (double V0 : {1.5, 5.0, 50.0}) {
    WellConfig w{V0, 7.0, 1.0};
    for (double p : {0.3, 1.1, 2.7}) {
      ModeSolution m;
      try {
        m = outside_momentum(p, w);
        (void)step_coefficients(m, w);
      } catch (const DegenerateChannel&) {
        continue;
      }
      const cplx eL = std::polar(1.0, p * w.width);
      const cplx eqL = std::exp(cplx(0.0, 1.0) * m.q * w.width);
      for (int n : {0, 4, 10}) {
        const auto a = mse_amplitudes(m, w, 1.0, 0.0, n);
        const auto b = mse_amplitudes(m, w, 0.0, eL, n);
        CHECK(rel(b.A2, a.B2 / eL) < 1e-12);
        CHECK(rel(b.B2, a.A2 * eL) < 1e-12);
        CHECK(rel(b.B1, a.A3 * eqL) < 1e-10);
        CHECK(rel(b.A3, a.B1 / eqL) < 1e-10);
      }
    }
  }
}

TEST_CASE("causal series order") {
  WellConfig w{5.0, 400.0, 1.0};
  // ceil(1000 / sqrt(2) / 800) + 2
  CHECK(causal_nmax(1000.0, 1.0, w) == 3);
  CHECK(causal_nmax(0.0, 1.0, w) == 2);
  CHECK(causal_nmax(10000.0, 1.0, w) == 11);
}

TEST_CASE("infinite well energies") {
  WellConfig w{0.0, 100.0, 1.0};
  const auto lv = infinite_well_energies(w, 3);
  REQUIRE(lv.size() == 3);
  // E1 = sqrt(1 + (pi/100)^2), E1^NR = 1 + pi^2 / 2e4
  CHECK(lv[0].energy == doctest::Approx(std::sqrt(1.0 + pi * pi / 1e4)).epsilon(1e-15));
  CHECK(lv[0].energy_nr == doctest::Approx(1.0 + pi * pi / 2e4).epsilon(1e-15));
  CHECK(lv[2].p == doctest::Approx(3 * pi / 100));

  WellConfig one{0.0, 1.0, 1.0};
  const auto o = infinite_well_energies(one, 1);
  CHECK(o[0].energy == doctest::Approx(3.296908309475615).epsilon(1e-14));
  CHECK(o[0].energy_nr == doctest::Approx(1.0 + pi * pi / 2).epsilon(1e-14));

  // ultrarelativistic levels are equally spaced by pi c hbar / L
  const auto hi = infinite_well_energies(one, 2000);
  CHECK(hi[1999].energy - hi[1998].energy == doctest::Approx(pi).epsilon(1e-6));
  for (const auto& l : hi) CHECK(l.energy >= 1.0);
  CHECK_THROWS_AS(infinite_well_energies(one, 0), InvalidConfig);
}

TEST_CASE("resonance scan") {
  WellConfig w{50.0, 10.0, 1.0};
  std::vector<double> grid;
  for (int i = 0; i < 8000; ++i) grid.push_back(0.005 + i * 1.6 / 8000);
  const auto scan = resonance_scan(w, grid, 1.0, 0.0, 10);
  REQUIRE(scan.rows.size() == grid.size());
  for (const auto& r : scan.rows) {
    CHECK_FALSE(r.degenerate);
    CHECK(std::isfinite(r.absB1));
  }
  const auto peaks = find_peaks(scan, ScanColumn::B1);
  for (int k = 1; k <= 5; ++k) {
    const double pk = k * pi / w.width;
    const auto best = tallest_peak_in(peaks, pk - 0.5 * pi / w.width, pk + 0.5 * pi / w.width);
    REQUIRE(best.has_value());
    CHECK(std::abs(best->p - pk) < 0.02 * pk);
  }

  // nmax = 0 has no resonant structure beyond a single pass but stays finite
  const auto flat = resonance_scan(w, grid, 1.0, 0.0, 0);
  for (const auto& r : flat.rows) CHECK(std::isfinite(r.absA3));
  CHECK_THROWS_AS(resonance_scan(w, grid, 1.0, 0.0, kConvergedSeries), InvalidConfig);
}

TEST_CASE("resonance scan flags degenerate momenta and keeps going") {
  WellConfig w{10.0, 1.0, 1.0};
  const double p_threshold = std::sqrt(81.0 - 1.0);  // E = V0 - mc^2
  const double p_half = std::sqrt(24.0);             // E = V0 / 2
  std::vector<double> grid{1.0, p_half, 2.0 * p_half / 2.0 + 0.1, p_threshold, 9.5};
  const auto scan = resonance_scan(w, grid, 1.0, 0.0, 10);
  REQUIRE(scan.rows.size() == 5);
  CHECK(scan.rows[1].degenerate);
  CHECK(scan.rows[3].degenerate);
  CHECK_FALSE(scan.rows[0].degenerate);
  CHECK_FALSE(scan.rows[4].degenerate);
  CHECK(scan.rows[4].absA3 > 0.0);
}

TEST_CASE("transmission falls off as 1/V0") {
  const double p = 1.0;
  auto tl_times_V0 = [p](double V0) {
    WellConfig w{V0, 1.0, 1.0};
    return std::abs(step_coefficients(outside_momentum(p, w), w).tl) * V0;
  };
  CHECK(tl_times_V0(400.0) == doctest::Approx(tl_times_V0(200.0)).epsilon(0.05));
  CHECK(tl_times_V0(4000.0) == doctest::Approx(2.0 * p).epsilon(0.01));
}

TEST_CASE("peak finder on synthetic data") {
  ResonanceScan s;
  for (int i = 0; i <= 100; ++i) {
    ResonanceRow r;
    r.p = 0.01 * i;
    r.absB1 = 1.0 - (r.p - 0.503) * (r.p - 0.503);
    s.rows.push_back(r);
  }
  const auto peaks = find_peaks(s, ScanColumn::B1);
  REQUIRE(peaks.size() == 1);
  CHECK(peaks[0].p == doctest::Approx(0.503).epsilon(1e-12));
  CHECK(peaks[0].height == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_FALSE(tallest_peak_in(peaks, 0.6, 1.0).has_value());
}
