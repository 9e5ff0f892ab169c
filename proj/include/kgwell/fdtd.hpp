#pragma once

#include <span>
#include <vector>

#include "kgwell/core.hpp"
#include "kgwell/wavepacket.hpp"

namespace kgwell {

/// Lattice x_i = x_left + i dx on [x_left, x_right]; psi is pinned to 0 at both ends.
struct FdtdConfig {
  double dx = 0.05;
  double dt = 0.025;
  double x_left = -1400.0;
  double x_right = 1800.0;
  long n_steps = 0;

  /// c dt / dx must not exceed kCflLimit.
  static constexpr double kCflLimit = 0.5;

  void validate(const WellConfig& well, const UnitSystem& u = {}) const;
  std::size_t size() const;
  double x(std::size_t i) const { return x_left + static_cast<double>(i) * dx; }
  std::vector<double> lattice() const;
};

/// Two consecutive time levels of the field.
struct FdtdState {
  std::vector<cplx> psi_prev;
  std::vector<cplx> psi_curr;
  long step_index = 0;
  /// Time of psi_curr; the run starts at t0.
  double time(const FdtdConfig& cfg, double t0 = 0.0) const { return t0 + static_cast<double>(step_index) * cfg.dt; }
};

/// Explicit three-level scheme for the expanded equation
///   -hbar^2 D_tt psi - 2 i hbar V D_t psi + V^2 psi = -hbar^2 c^2 D_xx psi + m^2 c^4 psi.
class FdtdSolver {
 public:
  FdtdSolver(const WellConfig& well, const FdtdConfig& cfg, const UnitSystem& u = {});

  /// Seeds psi_prev = G(-dt, x_i) and psi_curr = G(0, x_i) from the semi-analytic packet.
  FdtdState init_from_wavepacket(const Wavepacket& packet, int threads = 1) const;

  /// Seeds from arbitrary field values at t = -dt and t = 0.
  FdtdState init_from_fields(std::vector<cplx> at_minus_dt, std::vector<cplx> at_zero) const;

  void step(FdtdState& state) const;

  /// Advances n steps. Throws InstabilityDetected if max|psi| exceeds 1e6 times its starting value.
  void run(FdtdState& state, long n) const;

  /// rho at the current level with the centred time difference (psi^{n+1} - psi^{n-1}) / 2dt
  /// and the potential term evaluated on the time-symmetric product Re[psi^n* (psi^{n+1} + psi^{n-1})] / 2.
  std::vector<double> charge_on_lattice(const FdtdState& state) const;

  /// Discrete charge between the two stored levels; exactly conserved by the scheme.
  double lattice_charge(const FdtdState& state) const;

  std::span<const double> potential() const { return potential_; }
  const FdtdConfig& config() const { return cfg_; }
  const WellConfig& well() const { return well_; }

 private:
  void next_level(const FdtdState& state, std::vector<cplx>& out) const;

  WellConfig well_;
  FdtdConfig cfg_;
  UnitSystem units_;
  std::vector<double> potential_;
  std::vector<double> potential_sq_;
  std::vector<cplx> inv_lead_;  // 1 / coefficient of psi^{n+1}
};

double max_abs(std::span<const cplx> field);

/// Lattice indices of the points in x_grid. Throws InvalidConfig if a point is not on the lattice.
std::vector<std::size_t> lattice_indices(const FdtdConfig& cfg, std::span<const double> x_grid);

struct ConvergenceRow {
  double dx = 0.0;
  double dt = 0.0;
  double l2_error = 0.0;  // relative, psi against the analytic free evolution
  double ratio = 0.0;     // error of the previous (coarser) row over this one; 0 for the first row
};

/// Free-space (V0 = 0) self-convergence study: the packet is evolved to t_final on lattices
/// dx0, dx0/2, ... (levels rows, dt = CFL limit * dx / c) and compared with the semi-analytic field.
/// spec.x0 is ignored; the packet is placed just right of the origin.
std::vector<ConvergenceRow> free_space_convergence(const WavepacketSpec& spec, double mass, double dx0, int levels,
                                                   double t_final, const UnitSystem& u = {});

}  // namespace kgwell
