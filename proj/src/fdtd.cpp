#include "kgwell/fdtd.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "kgwell/errors.hpp"

namespace kgwell {

namespace {

constexpr double kGrowthLimit = 1e6;
constexpr long kGrowthCheckInterval = 100;

}  // namespace

void FdtdConfig::validate(const WellConfig& well, const UnitSystem& u) const {
  if (!(dx > 0.0)) throw InvalidConfig("fdtd dx must be > 0");
  if (!(dt > 0.0)) throw InvalidConfig("fdtd dt must be > 0");
  if (u.c * dt / dx > kCflLimit * (1.0 + 1e-12)) {
    throw InvalidConfig("fdtd CFL violated: c dt / dx = " + std::to_string(u.c * dt / dx));
  }
  if (!(x_left < 0.0 && x_right > well.width)) throw InvalidConfig("fdtd domain must contain the well");
  if (n_steps < 0) throw InvalidConfig("fdtd n_steps must be >= 0");
}

std::size_t FdtdConfig::size() const {
  return static_cast<std::size_t>(std::llround((x_right - x_left) / dx)) + 1;
}

std::vector<double> FdtdConfig::lattice() const {
  std::vector<double> xs(size());
  for (std::size_t i = 0; i < xs.size(); ++i) xs[i] = x(i);
  return xs;
}

FdtdSolver::FdtdSolver(const WellConfig& well, const FdtdConfig& cfg, const UnitSystem& u)
    : well_(well), cfg_(cfg), units_(u) {
  well.validate();
  u.validate();
  cfg.validate(well, u);
  const std::size_t n = cfg.size();
  potential_.resize(n);
  potential_sq_.resize(n);
  inv_lead_.resize(n);
  const double edge_tol = 1e-9 * cfg.dx;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = cfg.x(i);
    // Nodes sitting on an edge see the mean of the two sides.
    if (std::abs(x) < edge_tol || std::abs(x - well.width) < edge_tol) {
      potential_[i] = 0.5 * well.depth;
      potential_sq_[i] = 0.5 * well.depth * well.depth;
    } else {
      potential_[i] = well.potential(x);
      potential_sq_[i] = potential_[i] * potential_[i];
    }
    const double h = u.hbar;
    const cplx lead(-h * h / (cfg.dt * cfg.dt), -h * potential_[i] / cfg.dt);
    inv_lead_[i] = 1.0 / lead;
  }
}

FdtdState FdtdSolver::init_from_wavepacket(const Wavepacket& packet, int threads) const {
  const std::vector<double> xs = cfg_.lattice();
  const double t_list[] = {-cfg_.dt, 0.0};
  const FieldGrid g = evolve_grid(packet, xs, t_list, threads);
  return init_from_fields(g.snapshots[0].psi, g.snapshots[1].psi);
}

FdtdState FdtdSolver::init_from_fields(std::vector<cplx> at_minus_dt, std::vector<cplx> at_zero) const {
  if (at_minus_dt.size() != cfg_.size() || at_zero.size() != cfg_.size()) {
    throw InvalidConfig("fdtd seed fields do not match the lattice size");
  }
  FdtdState s;
  s.psi_prev = std::move(at_minus_dt);
  s.psi_curr = std::move(at_zero);
  s.psi_prev.front() = s.psi_prev.back() = 0.0;
  s.psi_curr.front() = s.psi_curr.back() = 0.0;
  return s;
}

void FdtdSolver::next_level(const FdtdState& state, std::vector<cplx>& out) const {
  const std::size_t n = cfg_.size();
  const double h = units_.hbar;
  const double c2 = units_.c * units_.c;
  const double mc2 = well_.mass * c2;
  const double dt = cfg_.dt;
  const double kx = h * h * c2 / (cfg_.dx * cfg_.dx);
  const double kt = h * h / (dt * dt);
  const auto& cur = state.psi_curr;
  const auto& prev = state.psi_prev;
  out.resize(n);
  out[0] = 0.0;
  out[n - 1] = 0.0;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double V = potential_[i];
    const cplx lap = cur[i + 1] - 2.0 * cur[i] + cur[i - 1];
    // lead*psi^{n+1} = -hbar^2c^2 D_xx psi + (m^2c^4 - V^2) psi - 2 kt psi + (kt - i hbar V/dt) psi^{n-1}
    const cplx rhs = -kx * lap + (mc2 * mc2 - potential_sq_[i]) * cur[i] - 2.0 * kt * cur[i] +
                     cplx(kt, -h * V / dt) * prev[i];
    out[i] = rhs * inv_lead_[i];
  }
}

void FdtdSolver::step(FdtdState& state) const {
  std::vector<cplx> next;
  next_level(state, next);
  state.psi_prev = std::move(state.psi_curr);
  state.psi_curr = std::move(next);
  ++state.step_index;
}

void FdtdSolver::run(FdtdState& state, long n) const {
  const double start = std::max(max_abs(state.psi_curr), 1e-300);
  std::vector<cplx> next;
  for (long k = 0; k < n; ++k) {
    next_level(state, next);
    std::swap(state.psi_prev, state.psi_curr);
    std::swap(state.psi_curr, next);
    ++state.step_index;
    if ((k + 1) % kGrowthCheckInterval == 0 || k + 1 == n) {
      const double now = max_abs(state.psi_curr);
      if (!(now <= kGrowthLimit * start)) {
        throw InstabilityDetected("fdtd field grew by " + std::to_string(now / start) + " after step " +
                                  std::to_string(state.step_index));
      }
    }
  }
}

std::vector<double> FdtdSolver::charge_on_lattice(const FdtdState& state) const {
  std::vector<cplx> next;
  next_level(state, next);
  const double h = units_.hbar;
  const double mc2 = well_.mass * units_.c * units_.c;
  const std::size_t n = cfg_.size();
  std::vector<double> rho(n);
  for (std::size_t i = 0; i < n; ++i) {
    const cplx c = std::conj(state.psi_curr[i]);
    const cplx dpsi = (next[i] - state.psi_prev[i]) / (2.0 * cfg_.dt);
    const double mod2 = 0.5 * (c * (next[i] + state.psi_prev[i])).real();
    rho[i] = -(h / mc2) * (c * dpsi).imag() - well_.potential(cfg_.x(i)) / mc2 * mod2;
  }
  return rho;
}

double FdtdSolver::lattice_charge(const FdtdState& state) const {
  const double h = units_.hbar;
  const double mc2 = well_.mass * units_.c * units_.c;
  double j = 0.0, k = 0.0;
  for (std::size_t i = 0; i < cfg_.size(); ++i) {
    const cplx w = std::conj(state.psi_prev[i]) * state.psi_curr[i];
    j += w.imag();
    k += potential_[i] * w.real();
  }
  return -cfg_.dx / mc2 * (h / cfg_.dt * j + k);
}

double max_abs(std::span<const cplx> field) {
  double m = 0.0;
  for (const cplx& z : field) m = std::max(m, std::abs(z));
  return m;
}

std::vector<std::size_t> lattice_indices(const FdtdConfig& cfg, std::span<const double> x_grid) {
  std::vector<std::size_t> idx;
  idx.reserve(x_grid.size());
  const std::size_t n = cfg.size();
  for (double x : x_grid) {
    const double f = (x - cfg.x_left) / cfg.dx;
    const long i = std::lround(f);
    if (i < 0 || static_cast<std::size_t>(i) >= n || std::abs(f - static_cast<double>(i)) > 1e-6) {
      throw InvalidConfig("output point x=" + std::to_string(x) + " is not a lattice node");
    }
    idx.push_back(static_cast<std::size_t>(i));
  }
  return idx;
}

std::vector<ConvergenceRow> free_space_convergence(const WavepacketSpec& spec, double mass, double dx0, int levels,
                                                   double t_final, const UnitSystem& u) {
  if (levels < 2) throw InvalidConfig("convergence study needs at least two levels");
  // Region 1 only carries waves leaving the well, so the packet has to start to the
  // right of x = 0. Free evolution is translation invariant; x0 is moved accordingly.
  const WellConfig free{0.0, 1.0, mass};
  const double sx = spec.sigma_x(u);
  WavepacketSpec shifted = spec;
  shifted.x0 = 12.0 * sx + 1.0;
  const Wavepacket packet(shifted, free, u);
  const double v = group_velocity(spec.p0, mass, u);
  const double lo = -1.0;
  const double hi = std::ceil(shifted.x0 + v * t_final + 12.0 * sx);

  std::vector<ConvergenceRow> rows;
  double dx = dx0;
  for (int level = 0; level < levels; ++level, dx *= 0.5) {
    FdtdConfig cfg;
    cfg.dx = dx;
    cfg.dt = FdtdConfig::kCflLimit * dx / u.c;
    cfg.x_left = lo;
    cfg.x_right = lo + std::ceil((hi - lo) / dx) * dx;
    const long steps = std::lround(t_final / cfg.dt);
    cfg.n_steps = steps;
    const FdtdSolver solver(free, cfg, u);
    FdtdState state = solver.init_from_wavepacket(packet);
    solver.run(state, steps);

    const std::vector<double> xs = cfg.lattice();
    const double t_list[] = {state.time(cfg)};
    const FieldGrid ref = evolve_grid(packet, xs, t_list);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      num += std::norm(state.psi_curr[i] - ref.snapshots[0].psi[i]);
      den += std::norm(ref.snapshots[0].psi[i]);
    }
    ConvergenceRow row{cfg.dx, cfg.dt, std::sqrt(num / den), 0.0};
    if (!rows.empty()) row.ratio = rows.back().l2_error / row.l2_error;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace kgwell
