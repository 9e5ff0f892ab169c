#include "kgwell/boundstates.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "kgwell/errors.hpp"
#include "kgwell/mse.hpp"

namespace kgwell {

namespace {

using std::numbers::pi;

constexpr int kGridPerPi = 10000;
constexpr double kPoleWindow = 1e-3;
constexpr double kBisectTol = 1e-13;

// Distance from P to the nearest pole of tan (odd multiples of pi/2) or cot (multiples of pi).
double distance_to_pole(double P, Parity parity) {
  const double shift = parity == Parity::Even ? pi / 2.0 : 0.0;
  const double r = std::remainder(P - shift, pi);
  return std::abs(r);
}

double branch_value(double P, Parity parity) {
  return parity == Parity::Even ? P * std::tan(P) : -P / std::tan(P);
}

struct Branch {
  const WellConfig& well;
  const UnitSystem& u;
  Parity parity;

  double operator()(double P) const { return branch_value(P, parity) - circle_curve(P, well, u); }
};

double bisect(const Branch& g, double lo, double hi) {
  double glo = g(lo);
  for (int it = 0; it < 200 && hi - lo > kBisectTol; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double gm = g(mid);
    if (gm == 0.0) return mid;
    if ((gm < 0.0) == (glo < 0.0)) {
      lo = mid;
      glo = gm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

const char* to_string(Parity parity) { return parity == Parity::Even ? "even" : "odd"; }

MomentumWindow bound_window(const WellConfig& well, const UnitSystem& u) {
  const double mc2 = well.rest_energy(u);
  const double e_hi = well.depth + mc2;
  const double e_lo = std::max(well.depth - mc2, mc2);
  MomentumWindow w;
  if (e_hi <= mc2) return w;
  auto momentum_at = [&](double E) { return std::sqrt(std::max(0.0, (E - mc2) * (E + mc2))) / u.c; };
  w.lo = momentum_at(e_lo);
  w.hi = momentum_at(e_hi);
  return w;
}

double circle_curve(double P, const WellConfig& well, const UnitSystem& u) {
  const double p = 2.0 * u.hbar * P / well.width;
  const double mc2 = well.rest_energy(u);
  const double d = energy(p, well.mass, u) - well.depth;
  const double arg = (mc2 - d) * (mc2 + d);
  // Rounding at the window edges may leave arg a few ulps below zero.
  if (arg < -1e-12 * mc2 * mc2) throw OutOfDomain("circle_curve: (E - V0)^2 > m^2c^4 at P=" + std::to_string(P));
  return std::sqrt(std::max(arg, 0.0)) / u.c * well.width / (2.0 * u.hbar);
}

cplx matching_determinant(double p, cplx q, double width, const UnitSystem& u) {
  const cplx phase = std::polar(1.0, p * width / u.hbar);
  return (q + p) * (q + p) * std::conj(phase) - (q - p) * (q - p) * phase;
}

cplx standing_wave_ratio(double p, cplx q) { return -(q - p) / (q + p); }

BoundStateTable find_bound_states(const WellConfig& well, double tol, const UnitSystem& u) {
  well.validate();
  u.validate();
  if (!(tol > 0.0)) throw InvalidConfig("find_bound_states: tol must be positive");

  BoundStateTable table{well, {}};
  const MomentumWindow window = bound_window(well, u);
  if (window.empty()) return table;

  const double scale = well.width / (2.0 * u.hbar);
  const double P_lo = window.lo * scale;
  const double P_hi = window.hi * scale;
  const double step = pi / kGridPerPi;
  const auto n_steps = static_cast<long>(std::ceil((P_hi - P_lo) / step));

  for (Parity parity : {Parity::Even, Parity::Odd}) {
    const Branch g{well, u, parity};
    bool have_prev = false;
    double prev_P = 0.0;
    double prev_g = 0.0;
    for (long i = 0; i <= n_steps; ++i) {
      const double P = std::min(P_lo + static_cast<double>(i) * step, P_hi);
      // P = 0 is a trivial zero of the determinant, not a state.
      if (P <= 0.0 || distance_to_pole(P, parity) < kPoleWindow) {
        have_prev = false;
        continue;
      }
      const double gv = g(P);
      if (have_prev && (gv < 0.0) != (prev_g < 0.0)) {
        const double root = bisect(g, prev_P, P);
        const double residual_g = std::abs(g(root));
        const double p = root / scale;
        const double qr = circle_curve(root, well, u) / scale;
        if (qr > 0.0 && residual_g < tol) {
          BoundState s;
          s.parity = parity;
          s.p = p;
          s.energy = energy(p, well.mass, u);
          s.qr = qr;
          s.residual = std::abs(matching_determinant(p, cplx(0.0, qr), well.width, u));
          table.states.push_back(s);
        }
      }
      have_prev = true;
      prev_P = P;
      prev_g = gv;
    }
  }

  std::sort(table.states.begin(), table.states.end(),
            [](const BoundState& a, const BoundState& b) { return a.p < b.p; });
  for (std::size_t i = 0; i < table.states.size(); ++i) table.states[i].k = static_cast<int>(i) + 1;
  return table;
}

double mse_bound_state_condition(double p, const WellConfig& well, const UnitSystem& u) {
  const ModeSolution mode = outside_momentum(p, well, u);
  const StepCoefficients sc = step_coefficients(mode, well, u);
  const cplx target = std::polar(1.0, -p * well.width / u.hbar);
  return std::min(std::abs(sc.rl - target), std::abs(sc.rl + target));
}

std::vector<IntersectionRow> intersection_curves(const WellConfig& well, std::span<const double> P_grid,
                                                 double pole_window, const UnitSystem& u) {
  const MomentumWindow window = bound_window(well, u);
  const double scale = well.width / (2.0 * u.hbar);
  std::vector<IntersectionRow> rows;
  rows.reserve(P_grid.size());
  for (double P : P_grid) {
    if (!std::isfinite(P) || P < 0.0) continue;
    if (distance_to_pole(P, Parity::Even) < pole_window || distance_to_pole(P, Parity::Odd) < pole_window) continue;
    if (window.empty() || P < window.lo * scale || P > window.hi * scale) continue;
    rows.push_back({P, branch_value(P, Parity::Even), branch_value(P, Parity::Odd), circle_curve(P, well, u)});
  }
  return rows;
}

}  // namespace kgwell
