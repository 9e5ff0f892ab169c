#include "kgwell/core.hpp"

#include <cmath>
#include <string>

#include "kgwell/errors.hpp"

namespace kgwell {

namespace {

// Relative width of the band around |E - V0| = mc^2 treated as degenerate.
constexpr double kDegenerateTol = 1e-12;

}  // namespace

void UnitSystem::validate() const {
  if (!(hbar > 0.0) || !std::isfinite(hbar)) throw InvalidConfig("hbar must be positive");
  if (!(c > 0.0) || !std::isfinite(c)) throw InvalidConfig("c must be positive");
}

void WellConfig::validate() const {
  if (!(width > 0.0) || !std::isfinite(width)) throw InvalidConfig("well width must be positive");
  if (!(mass > 0.0) || !std::isfinite(mass)) throw InvalidConfig("mass must be positive");
  if (!(depth >= 0.0) || !std::isfinite(depth)) throw InvalidConfig("well depth must be >= 0");
}

std::string_view to_string(Regime r) {
  switch (r) {
    case Regime::Bound: return "bound";
    case Regime::Supercritical: return "supercritical";
    case Regime::OpenChannel: return "open";
  }
  return "?";
}

double energy(double p, double mass, const UnitSystem& u) {
  const double pc = p * u.c;
  const double mc2 = mass * u.c * u.c;
  return std::hypot(pc, mc2);
}

double group_velocity(double p, double mass, const UnitSystem& u) {
  return p * u.c * u.c / energy(p, mass, u);
}

Regime classify(double E, double depth, double mass, const UnitSystem& u) {
  const double mc2 = mass * u.c * u.c;
  const double d = E - depth;
  if (std::abs(d * d - mc2 * mc2) < kDegenerateTol * mc2 * mc2) {
    throw DegenerateChannel("|E - V0| = mc^2: outside momentum vanishes (E=" + std::to_string(E) +
                            ", V0=" + std::to_string(depth) + ")");
  }
  if (std::abs(d) < mc2) return Regime::Bound;
  return d < 0.0 ? Regime::Supercritical : Regime::OpenChannel;
}

ModeSolution outside_momentum(double p, const WellConfig& well, const UnitSystem& u) {
  if (!(p > 0.0)) throw OutOfDomain("outside_momentum requires p > 0");
  ModeSolution mode;
  mode.p = p;
  mode.energy = energy(p, well.mass, u);
  mode.regime = classify(mode.energy, well.depth, well.mass, u);

  const double mc2 = well.mass * u.c * u.c;
  const double d = mode.energy - well.depth;
  // (d - mc2)(d + mc2) keeps precision near the threshold better than d^2 - mc2^2.
  const double q2c2 = (d - mc2) * (d + mc2);
  const double mag = std::sqrt(std::abs(q2c2)) / u.c;
  switch (mode.regime) {
    case Regime::Bound: mode.q = cplx(0.0, mag); break;
    case Regime::Supercritical: mode.q = cplx(-mag, 0.0); break;
    case Regime::OpenChannel: mode.q = cplx(mag, 0.0); break;
  }
  return mode;
}

double outside_velocity(const ModeSolution& mode, const WellConfig& well, const UnitSystem& u) {
  return mode.q.real() * u.c * u.c / (mode.energy - well.depth);
}

}  // namespace kgwell
