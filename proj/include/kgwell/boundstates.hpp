#pragma once

#include <span>
#include <vector>

#include "kgwell/core.hpp"

namespace kgwell {

/// Dimensionless momenta P = pL/(2 hbar), Q = qL/(2 hbar) and the two
/// quantization branches Qa = P tan P (even) and Qb = -P cot P (odd).
struct DimensionlessVars {
  double P = 0.0;
  double Q = 0.0;
  double Qa = 0.0;
  double Qb = 0.0;
};

enum class Parity { Even, Odd };

const char* to_string(Parity parity);

/// One bound state. The outside momentum is q = i*qr.
struct BoundState {
  int k = 0;
  Parity parity = Parity::Even;
  double p = 0.0;
  double energy = 0.0;
  double qr = 0.0;
  /// |(q+p)^2 e^{-ipL/hbar} - (q-p)^2 e^{ipL/hbar}| at the refined root.
  double residual = 0.0;

  double P(const WellConfig& well, const UnitSystem& u = {}) const { return p * well.width / (2.0 * u.hbar); }
};

struct BoundStateTable {
  WellConfig well;
  std::vector<BoundState> states;  // ascending energy
};

/// Momentum window [p_lo, p_hi] where |E(p) - V0| <= mc^2. Empty (p_lo > p_hi) if none.
struct MomentumWindow {
  double lo = 0.0;
  double hi = -1.0;
  bool empty() const { return !(hi > lo); }
};

MomentumWindow bound_window(const WellConfig& well, const UnitSystem& u = {});

/// Q_r(P) = q_r L/(2 hbar) with q_r = sqrt(m^2c^4 - (E(p) - V0)^2)/c.
/// Throws OutOfDomain outside the bound window.
double circle_curve(double P, const WellConfig& well, const UnitSystem& u = {});

/// Matching-condition determinant (q+p)^2 e^{-ipL/hbar} - (q-p)^2 e^{ipL/hbar}.
cplx matching_determinant(double p, cplx q, double width, const UnitSystem& u = {});

/// A2/B2 from the null vector of the reduced 2x2 matching system.
cplx standing_wave_ratio(double p, cplx q);

/// Bracket-and-bisect solver for the tan/cot branches. tol bounds |g| at each root.
BoundStateTable find_bound_states(const WellConfig& well, double tol = 1e-10, const UnitSystem& u = {});

/// min over the sign of |r_l -/+ e^{-ipL/hbar}|; vanishes exactly at bound states.
double mse_bound_state_condition(double p, const WellConfig& well, const UnitSystem& u = {});

struct IntersectionRow {
  double P = 0.0;
  double Qa = 0.0;
  double Qb = 0.0;
  double Qr = 0.0;
};

/// Curve samples for the graphical solution. Points within pole_window of a
/// tan/cot pole, or outside the bound window, are dropped.
std::vector<IntersectionRow> intersection_curves(const WellConfig& well, std::span<const double> P_grid,
                                                 double pole_window, const UnitSystem& u = {});

}  // namespace kgwell
