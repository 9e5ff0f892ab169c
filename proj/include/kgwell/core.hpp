#pragma once

#include <complex>
#include <string_view>

namespace kgwell {

using cplx = std::complex<double>;

/// hbar and c. Natural units (both 1) by default.
struct UnitSystem {
  double hbar = 1.0;
  double c = 1.0;

  void validate() const;
};

/// Square well: V(x) = depth for x < 0 or x > width, 0 inside [0, width].
struct WellConfig {
  double depth = 0.0;
  double width = 1.0;
  double mass = 1.0;

  void validate() const;

  /// Potential energy at x. Points exactly on an edge belong to the well interior.
  double potential(double x) const { return (x < 0.0 || x > width) ? depth : 0.0; }

  double rest_energy(const UnitSystem& u) const { return mass * u.c * u.c; }
};

enum class Regime { Bound, Supercritical, OpenChannel };

std::string_view to_string(Regime r);

/// A positive-energy plane-wave mode with momentum p inside the well and q outside.
struct ModeSolution {
  double p = 0.0;
  double energy = 0.0;
  cplx q;
  Regime regime = Regime::OpenChannel;
};

/// Positive branch of the free dispersion relation, +sqrt(c^2 p^2 + m^2 c^4).
double energy(double p, double mass, const UnitSystem& u = {});

/// Classical velocity p c^2 / E inside the well.
double group_velocity(double p, double mass, const UnitSystem& u = {});

/// Three-way split on |E - V0| versus mc^2. Throws DegenerateChannel on the threshold.
Regime classify(double E, double depth, double mass, const UnitSystem& u = {});

/// Momentum outside the well with the branch picked for outgoing or decaying waves:
/// Im q > 0 when bound, q < 0 when supercritical, q > 0 in the open channel.
ModeSolution outside_momentum(double p, const WellConfig& well, const UnitSystem& u = {});

/// Velocity q c^2 / (E - V0) of the outside wave; only meaningful for real q.
double outside_velocity(const ModeSolution& mode, const WellConfig& well, const UnitSystem& u = {});

}  // namespace kgwell
