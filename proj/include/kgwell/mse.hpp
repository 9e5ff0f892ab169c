#pragma once

#include <optional>
#include <span>
#include <vector>

#include "kgwell/core.hpp"

namespace kgwell {

/// Reflection and transmission amplitudes of the left (x=0) and right (x=L) steps
/// for a unit plane wave travelling inside the well.
struct StepCoefficients {
  cplx tl;
  cplx rl;
  cplx tr;
  cplx rr;
};

/// Series order sentinel: use the closed form 1/(1 - r_r r_l) instead of a finite sum.
inline constexpr int kConvergedSeries = -1;

/// Region amplitudes built from the multiple scattering expansion.
/// Region 1 is x < 0, region 2 the well, region 3 is x > L.
struct MseAmplitudes {
  cplx A1, B1, A2, B2, A3, B3;
  int nmax = 0;
  cplx alpha, beta;
};

/// Throws DegenerateChannel when q = 0 or p + q = 0 (the latter at E = V0/2).
StepCoefficients step_coefficients(const ModeSolution& mode, const WellConfig& well, const UnitSystem& u = {});

/// sum_{n=0}^{nmax} z^n with z = rr*rl; nmax == kConvergedSeries gives 1/(1 - z).
/// The closed form is rejected with DivergentSeries when |z| > 1.
cplx series_factor(cplx rr, cplx rl, int nmax);

MseAmplitudes mse_amplitudes(const ModeSolution& mode, const WellConfig& well, cplx alpha, cplx beta, int nmax,
                             const UnitSystem& u = {});

/// Smallest series order that covers every edge hit up to t_max:
/// ceil(t_max v / (2L)) + 2 with v the group velocity at p0.
int causal_nmax(double t_max, double p0, const WellConfig& well, const UnitSystem& u = {});

struct InfiniteWellLevel {
  int k = 0;
  double p = 0.0;
  double energy = 0.0;
  /// mc^2 + k^2 pi^2 hbar^2 / (2 m L^2)
  double energy_nr = 0.0;
};

std::vector<InfiniteWellLevel> infinite_well_energies(const WellConfig& well, int kmax, const UnitSystem& u = {});

struct ResonanceRow {
  double p = 0.0;
  double absA2 = 0.0;
  double absB1 = 0.0;
  double absA3 = 0.0;
  Regime regime = Regime::Supercritical;
  bool degenerate = false;  // amplitudes undefined; other fields except p are zero
};

struct ResonanceScan {
  double depth = 0.0;
  int nmax = 0;
  std::vector<ResonanceRow> rows;
};

ResonanceScan resonance_scan(const WellConfig& well, std::span<const double> p_grid, cplx alpha, cplx beta,
                             int nmax, const UnitSystem& u = {});

enum class ScanColumn { A2, B1, A3 };

struct Peak {
  double p = 0.0;
  double height = 0.0;
};

/// Interior local maxima of the chosen column, refined by a three-point parabola.
/// Degenerate rows break the scan into independent segments.
std::vector<Peak> find_peaks(const ResonanceScan& scan, ScanColumn column);

/// Tallest peak with lo <= p <= hi, if any.
std::optional<Peak> tallest_peak_in(std::span<const Peak> peaks, double lo, double hi);

}  // namespace kgwell
