#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "kgwell/core.hpp"
#include "kgwell/quadrature.hpp"

namespace kgwell {

/// Gaussian superposition of MSE modes, g(p) = exp(-(p-p0)^2 / 4 sigma_p^2) exp(-i p x0 / hbar).
/// Only positive momenta and positive energies enter the superposition.
struct WavepacketSpec {
  double p0 = 1.0;
  double sigma_p = 0.02;
  double x0 = 0.0;
  cplx alpha = 1.0;
  cplx beta = 0.0;
  int nmax = 10;
  QuadraturePlan quad;

  void validate() const;

  /// Position spread hbar / (2 sigma_p). Should stay well below the well width.
  double sigma_x(const UnitSystem& u = {}) const { return u.hbar / (2.0 * sigma_p); }
};

/// Fraction of the envelope weight |g|^2 that falls inside the quadrature window.
double envelope_mass_fraction(const WavepacketSpec& spec);

struct FieldValue {
  cplx psi;
  cplx dpsi_dt;
};

/// Charge density i hbar/(2mc^2) [psi* psi_t - psi psi_t*] - V/(mc^2) |psi|^2.
double charge_density(cplx psi, cplx dpsi_dt, double potential, double mass, const UnitSystem& u = {});

/// A wavepacket with its per-node MSE amplitudes precomputed. Immutable after
/// construction, so evaluate() can be called concurrently.
class Wavepacket {
 public:
  /// Throws QuadratureUnderflow if the window loses more than 1e-8 of the envelope weight.
  Wavepacket(const WavepacketSpec& spec, const WellConfig& well, const UnitSystem& u = {});

  FieldValue evaluate(double t, double x) const;

  /// Field at every x for one instant; reuses the time phases across points.
  void evaluate_row(double t, std::span<const double> x, std::span<FieldValue> out) const;

  const WavepacketSpec& spec() const { return spec_; }
  const WellConfig& well() const { return well_; }
  const UnitSystem& units() const { return units_; }
  std::size_t node_count() const { return nodes_.size(); }

 private:
  struct Node {
    double p = 0.0;
    double energy = 0.0;
    cplx q;
    bool real_q = true;
    // Quadrature weight and envelope folded into the region amplitudes.
    cplx B1, A2, B2, A3;
  };

  FieldValue sum_nodes(double x, std::span<const cplx> time_phase) const;

  WavepacketSpec spec_;
  WellConfig well_;
  UnitSystem units_;
  std::vector<Node> nodes_;
};

FieldValue evaluate_field(const WavepacketSpec& spec, const WellConfig& well, double t, double x,
                          const UnitSystem& u = {});

/// Total charge of G(0, .) integrated numerically around x0.
double initial_charge(const WavepacketSpec& spec, const WellConfig& well, const UnitSystem& u = {});

/// Copy of spec with alpha and beta rescaled so the t = 0 total charge is 1.
WavepacketSpec normalized(const WavepacketSpec& spec, const WellConfig& well, const UnitSystem& u = {});

struct Snapshot {
  double t = 0.0;
  std::vector<cplx> psi;
  std::vector<cplx> dpsi_dt;
  std::vector<double> rho;
};

struct FieldGrid {
  std::vector<double> x;
  std::vector<Snapshot> snapshots;
};

FieldGrid evolve_grid(const Wavepacket& packet, std::span<const double> x_grid, std::span<const double> t_list,
                      int threads = 1);

struct RegionCharges {
  double total = 0.0;
  double region1 = 0.0;
  double region2 = 0.0;
  double region3 = 0.0;
};

/// Trapezoidal integral of rho over the grid.
double total_charge(const FieldGrid& grid, std::size_t t_index);

/// Trapezoid split by region; each segment goes to the region holding its midpoint.
RegionCharges region_charges(const FieldGrid& grid, std::size_t t_index, const WellConfig& well);

/// Same split for any sampled density.
RegionCharges region_charges(std::span<const double> x, std::span<const double> rho, const WellConfig& well);

/// Charge-weighted mean position.
double charge_centroid(std::span<const double> x, std::span<const double> rho);

std::vector<double> uniform_grid(double lo, double hi, double step);

}  // namespace kgwell
