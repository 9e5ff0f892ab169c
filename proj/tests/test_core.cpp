#include <doctest.h>

#include <cmath>
#include <random>

#include "kgwell/core.hpp"
#include "kgwell/errors.hpp"

using namespace kgwell;

TEST_CASE("energy follows the positive dispersion branch") {
  CHECK(energy(0.0, 1.0) == doctest::Approx(1.0));
  CHECK(energy(1.0, 1.0) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  CHECK(energy(3.0, 4.0) == doctest::Approx(5.0));
  // hbar does not enter, c does
  UnitSystem u{2.0, 3.0};
  CHECK(energy(1.0, 1.0, u) == doctest::Approx(std::sqrt(9.0 + 81.0)));
  CHECK(group_velocity(1.0, 1.0) == doctest::Approx(1.0 / std::sqrt(2.0)));

  double prev = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double e = energy(0.1 * i, 1.0);
    CHECK(e >= 1.0);
    CHECK(e >= prev);
    prev = e;
  }
}

TEST_CASE("outside momentum: worked examples") {
  // Bound: L=10, V0=1.5, p=0.5 (mpmath: 0.924176371830444789 i)
  auto b = outside_momentum(0.5, WellConfig{1.5, 10.0, 1.0});
  CHECK(b.regime == Regime::Bound);
  CHECK(b.q.real() == 0.0);
  CHECK(b.q.imag() == doctest::Approx(0.924176371830444789).epsilon(1e-14));

  // Supercritical: V0=5, p=1 (mpmath: -3.443524992833513545)
  auto s = outside_momentum(1.0, WellConfig{5.0, 400.0, 1.0});
  CHECK(s.regime == Regime::Supercritical);
  CHECK(s.q.imag() == 0.0);
  CHECK(s.q.real() == doctest::Approx(-3.443524992833513545).epsilon(1e-14));
  // the supercritical wave still carries energy outward
  CHECK(outside_velocity(s, WellConfig{5.0, 400.0, 1.0}) > 0.0);

  // Free space: q = p
  auto f = outside_momentum(0.7, WellConfig{0.0, 1.0, 1.0});
  CHECK(f.regime == Regime::OpenChannel);
  CHECK(f.q.real() == doctest::Approx(0.7).epsilon(1e-15));
}

TEST_CASE("outside momentum squares back to the dispersion relation") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> P(0.01, 20.0), V(0.0, 60.0);
  UnitSystem u{1.3, 0.7};
  for (int i = 0; i < 2000; ++i) {
    WellConfig w{V(rng), 3.0, 1.2};
    const double p = P(rng);
    ModeSolution m;
    try {
      m = outside_momentum(p, w, u);
    } catch (const DegenerateChannel&) {
      continue;
    }
    const double mc2 = w.mass * u.c * u.c;
    const double d = m.energy - w.depth;
    const cplx lhs = u.c * u.c * m.q * m.q;
    const double rhs = d * d - mc2 * mc2;
    CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(d * d)));
    switch (m.regime) {
      case Regime::Bound:
        CHECK(std::abs(d) < mc2);
        CHECK(m.q.imag() > 0.0);
        break;
      case Regime::Supercritical:
        CHECK(d < -mc2);
        CHECK(m.q.real() < 0.0);
        break;
      case Regime::OpenChannel:
        CHECK(d > mc2);
        CHECK(m.q.real() > 0.0);
        break;
    }
  }
}

TEST_CASE("outside momentum is continuous inside a regime") {
  WellConfig w{50.0, 1.0, 1.0};
  cplx prev = outside_momentum(0.1, w).q;
  for (int i = 1; i < 4000; ++i) {
    const double p = 0.1 + 0.01 * i;
    if (w.depth - energy(p, 1.0) < 1.0 + 1e-3) break;
    const cplx q = outside_momentum(p, w).q;
    CHECK(std::abs(q - prev) < 0.05);
    prev = q;
  }
}

TEST_CASE("classification and its errors") {
  CHECK(classify(1.5, 1.5, 1.0) == Regime::Bound);
  CHECK(classify(1.5, 5.0, 1.0) == Regime::Supercritical);
  CHECK(classify(3.0, 1.0, 1.0) == Regime::OpenChannel);
  CHECK_THROWS_AS(classify(1.0, 0.0, 1.0), DegenerateChannel);
  CHECK_THROWS_AS(classify(2.0, 3.0, 1.0), DegenerateChannel);

  // E - V0 = -mc^2 exactly
  const double p = 1.0;
  WellConfig w{std::sqrt(2.0) + 1.0, 1.0, 1.0};
  CHECK_THROWS_AS(outside_momentum(p, w), DegenerateChannel);
  CHECK_THROWS_AS(outside_momentum(0.0, w), OutOfDomain);
  CHECK_THROWS_AS(outside_momentum(-1.0, w), OutOfDomain);

  CHECK(to_string(Regime::Supercritical) == "supercritical");
}

TEST_CASE("configuration validation") {
  CHECK_THROWS_AS((UnitSystem{0.0, 1.0}.validate()), InvalidConfig);
  CHECK_THROWS_AS((UnitSystem{1.0, -1.0}.validate()), InvalidConfig);
  CHECK_THROWS_AS((WellConfig{-1.0, 1.0, 1.0}.validate()), InvalidConfig);
  CHECK_THROWS_AS((WellConfig{1.0, 0.0, 1.0}.validate()), InvalidConfig);
  CHECK_THROWS_AS((WellConfig{1.0, 1.0, 0.0}.validate()), InvalidConfig);
  CHECK_THROWS_AS((WellConfig{NAN, 1.0, 1.0}.validate()), InvalidConfig);
  CHECK_NOTHROW((WellConfig{0.0, 1.0, 1.0}.validate()));

  WellConfig w{5.0, 2.0, 1.0};
  CHECK(w.potential(-0.1) == 5.0);
  CHECK(w.potential(0.0) == 0.0);
  CHECK(w.potential(2.0) == 0.0);
  CHECK(w.potential(2.1) == 5.0);
}
