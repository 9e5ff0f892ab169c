#include "kgwell/mse.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "kgwell/errors.hpp"

namespace kgwell {

StepCoefficients step_coefficients(const ModeSolution& mode, const WellConfig& well, const UnitSystem& u) {
  const double p = mode.p;
  const cplx q = mode.q;
  if (std::abs(q) == 0.0) throw DegenerateChannel("step_coefficients: q = 0");
  if (std::abs(p + q) < 1e-12 * p) {
    throw DegenerateChannel("step_coefficients: p + q = 0 (E = V0/2) at p=" + std::to_string(p));
  }
  const double L = well.width;
  StepCoefficients sc;
  sc.rl = (p - q) / (p + q);
  sc.tl = 2.0 * p / (p + q);
  sc.rr = sc.rl * std::polar(1.0, 2.0 * p * L / u.hbar);
  sc.tr = sc.tl * std::exp(cplx(0.0, 1.0) * (p - q) * L / u.hbar);
  return sc;
}

cplx series_factor(cplx rr, cplx rl, int nmax) {
  const cplx z = rr * rl;
  if (nmax == kConvergedSeries) {
    if (std::abs(z) > 1.0 + 1e-12) throw DivergentSeries("closed-form series requested with |r_r r_l| > 1");
    if (std::abs(1.0 - z) == 0.0) throw DivergentSeries("closed-form series at r_r r_l = 1");
    return 1.0 / (1.0 - z);
  }
  if (nmax < 0) throw InvalidConfig("series order must be >= 0");
  // Horner: 1 + z(1 + z(1 + ...))
  cplx s = 1.0;
  for (int n = 0; n < nmax; ++n) s = 1.0 + z * s;
  return s;
}

MseAmplitudes mse_amplitudes(const ModeSolution& mode, const WellConfig& well, cplx alpha, cplx beta, int nmax,
                             const UnitSystem& u) {
  const StepCoefficients sc = step_coefficients(mode, well, u);
  const cplx S = series_factor(sc.rr, sc.rl, nmax);
  MseAmplitudes a;
  a.nmax = nmax;
  a.alpha = alpha;
  a.beta = beta;
  const cplx right_moving = (alpha + beta * sc.rl) * S;
  const cplx left_moving = (alpha * sc.rr + beta) * S;
  a.A1 = 0.0;
  a.B3 = 0.0;
  a.A2 = right_moving;
  a.B2 = left_moving;
  a.B1 = sc.tl * left_moving;
  a.A3 = sc.tr * right_moving;
  return a;
}

int causal_nmax(double t_max, double p0, const WellConfig& well, const UnitSystem& u) {
  const double v = group_velocity(p0, well.mass, u);
  return static_cast<int>(std::ceil(std::max(t_max, 0.0) * v / (2.0 * well.width))) + 2;
}

std::vector<InfiniteWellLevel> infinite_well_energies(const WellConfig& well, int kmax, const UnitSystem& u) {
  if (kmax < 1) throw InvalidConfig("infinite_well_energies: kmax must be >= 1");
  using std::numbers::pi;
  std::vector<InfiniteWellLevel> levels;
  levels.reserve(static_cast<std::size_t>(kmax));
  const double mc2 = well.rest_energy(u);
  for (int k = 1; k <= kmax; ++k) {
    InfiniteWellLevel lv;
    lv.k = k;
    lv.p = k * pi * u.hbar / well.width;
    lv.energy = energy(lv.p, well.mass, u);
    lv.energy_nr = mc2 + (k * pi * u.hbar) * (k * pi * u.hbar) / (2.0 * well.mass * well.width * well.width);
    levels.push_back(lv);
  }
  return levels;
}

ResonanceScan resonance_scan(const WellConfig& well, std::span<const double> p_grid, cplx alpha, cplx beta,
                             int nmax, const UnitSystem& u) {
  if (nmax < 0) throw InvalidConfig("resonance_scan needs a finite series order");
  ResonanceScan scan;
  scan.depth = well.depth;
  scan.nmax = nmax;
  scan.rows.reserve(p_grid.size());
  for (double p : p_grid) {
    ResonanceRow row;
    row.p = p;
    try {
      const ModeSolution mode = outside_momentum(p, well, u);
      const MseAmplitudes a = mse_amplitudes(mode, well, alpha, beta, nmax, u);
      row.regime = mode.regime;
      row.absA2 = std::abs(a.A2);
      row.absB1 = std::abs(a.B1);
      row.absA3 = std::abs(a.A3);
    } catch (const DegenerateChannel&) {
      row.degenerate = true;
    }
    scan.rows.push_back(row);
  }
  return scan;
}

std::vector<Peak> find_peaks(const ResonanceScan& scan, ScanColumn column) {
  auto value = [column](const ResonanceRow& r) {
    switch (column) {
      case ScanColumn::A2: return r.absA2;
      case ScanColumn::B1: return r.absB1;
      case ScanColumn::A3: return r.absA3;
    }
    return 0.0;
  };
  std::vector<Peak> peaks;
  const auto& rows = scan.rows;
  for (std::size_t i = 1; i + 1 < rows.size(); ++i) {
    const auto& a = rows[i - 1];
    const auto& b = rows[i];
    const auto& c = rows[i + 1];
    if (a.degenerate || b.degenerate || c.degenerate) continue;
    const double ya = value(a), yb = value(b), yc = value(c);
    if (!(yb > ya && yb >= yc)) continue;
    // Parabola through the three samples; grids need not be uniform.
    const double xa = a.p, xb = b.p, xc = c.p;
    const double denom = (xa - xb) * (xa - xc) * (xb - xc);
    const double A = (xc * (yb - ya) + xb * (ya - yc) + xa * (yc - yb)) / denom;
    const double B = (xc * xc * (ya - yb) + xb * xb * (yc - ya) + xa * xa * (yb - yc)) / denom;
    const double C = (xb * xc * (xb - xc) * ya + xc * xa * (xc - xa) * yb + xa * xb * (xa - xb) * yc) / denom;
    Peak pk{xb, yb};
    if (A < 0.0) {
      const double xv = -B / (2.0 * A);
      if (xv > xa && xv < xc) pk = {xv, C - B * B / (4.0 * A)};
    }
    peaks.push_back(pk);
  }
  return peaks;
}

std::optional<Peak> tallest_peak_in(std::span<const Peak> peaks, double lo, double hi) {
  std::optional<Peak> best;
  for (const Peak& pk : peaks) {
    if (pk.p < lo || pk.p > hi) continue;
    if (!best || pk.height > best->height) best = pk;
  }
  return best;
}

}  // namespace kgwell
