#include "kgwell/wavepacket.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <thread>

#include "kgwell/errors.hpp"
#include "kgwell/mse.hpp"

namespace kgwell {

namespace {

constexpr double kEnvelopeLossTol = 1e-8;

int region_of(double x, const WellConfig& well) {
  if (x < 0.0) return 1;
  return x > well.width ? 3 : 2;
}

double trapezoid_segment(double x0, double x1, double f0, double f1) { return 0.5 * (x1 - x0) * (f0 + f1); }

}  // namespace

void WavepacketSpec::validate() const {
  if (!(p0 > 0.0)) throw InvalidConfig("wavepacket p0 must be > 0");
  if (!(sigma_p > 0.0)) throw InvalidConfig("wavepacket sigma_p must be > 0");
  if (nmax < 0) throw InvalidConfig("wavepacket nmax must be >= 0");
  quad.validate();
}

double envelope_mass_fraction(const WavepacketSpec& spec) {
  const double s = std::sqrt(2.0) * spec.sigma_p;
  return 0.5 * (std::erf((spec.quad.p_max - spec.p0) / s) - std::erf((spec.quad.p_min - spec.p0) / s));
}

double charge_density(cplx psi, cplx dpsi_dt, double potential, double mass, const UnitSystem& u) {
  const double mc2 = mass * u.c * u.c;
  return -(u.hbar / mc2) * (std::conj(psi) * dpsi_dt).imag() - potential / mc2 * std::norm(psi);
}

Wavepacket::Wavepacket(const WavepacketSpec& spec, const WellConfig& well, const UnitSystem& u)
    : spec_(spec), well_(well), units_(u) {
  spec.validate();
  well.validate();
  u.validate();
  const double kept = envelope_mass_fraction(spec);
  if (kept < 1.0 - kEnvelopeLossTol) {
    throw QuadratureUnderflow("quadrature window keeps only " + std::to_string(kept) +
                              " of the envelope weight; widen [p_min, p_max]");
  }

  const QuadratureNodes qn = make_nodes(spec.quad);
  nodes_.reserve(qn.x.size());
  for (std::size_t k = 0; k < qn.x.size(); ++k) {
    const double p = qn.x[k];
    const double dp = p - spec.p0;
    const cplx g = std::exp(-dp * dp / (4.0 * spec.sigma_p * spec.sigma_p)) * std::polar(1.0, -p * spec.x0 / u.hbar);
    const cplx wg = qn.w[k] * g;
    const ModeSolution mode = outside_momentum(p, well, u);
    const MseAmplitudes a = mse_amplitudes(mode, well, spec.alpha, spec.beta, spec.nmax, u);
    Node n;
    n.p = p;
    n.energy = mode.energy;
    n.q = mode.q;
    n.real_q = mode.q.imag() == 0.0;
    n.B1 = wg * a.B1;
    n.A2 = wg * a.A2;
    n.B2 = wg * a.B2;
    n.A3 = wg * a.A3;
    nodes_.push_back(n);
  }
}

FieldValue Wavepacket::sum_nodes(double x, std::span<const cplx> time_phase) const {
  const int region = region_of(x, well_);
  const double hbar = units_.hbar;
  cplx psi = 0.0;
  cplx dpsi = 0.0;
  for (std::size_t k = 0; k < nodes_.size(); ++k) {
    const Node& n = nodes_[k];
    cplx spatial;
    switch (region) {
      case 1:
        spatial = n.B1 * (n.real_q ? std::polar(1.0, -n.q.real() * x / hbar) : std::exp(cplx(0.0, -1.0) * n.q * x / hbar));
        break;
      case 2: {
        const cplx e = std::polar(1.0, n.p * x / hbar);
        spatial = n.A2 * e + n.B2 * std::conj(e);
        break;
      }
      default:
        spatial = n.A3 * (n.real_q ? std::polar(1.0, n.q.real() * x / hbar) : std::exp(cplx(0.0, 1.0) * n.q * x / hbar));
        break;
    }
    const cplx term = spatial * time_phase[k];
    psi += term;
    dpsi += cplx(0.0, -n.energy / hbar) * term;
  }
  return {psi, dpsi};
}

FieldValue Wavepacket::evaluate(double t, double x) const {
  std::vector<cplx> phase(nodes_.size());
  for (std::size_t k = 0; k < nodes_.size(); ++k) phase[k] = std::polar(1.0, -nodes_[k].energy * t / units_.hbar);
  return sum_nodes(x, phase);
}

void Wavepacket::evaluate_row(double t, std::span<const double> x, std::span<FieldValue> out) const {
  std::vector<cplx> phase(nodes_.size());
  for (std::size_t k = 0; k < nodes_.size(); ++k) phase[k] = std::polar(1.0, -nodes_[k].energy * t / units_.hbar);
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = sum_nodes(x[i], phase);
}

FieldValue evaluate_field(const WavepacketSpec& spec, const WellConfig& well, double t, double x,
                          const UnitSystem& u) {
  return Wavepacket(spec, well, u).evaluate(t, x);
}

double initial_charge(const WavepacketSpec& spec, const WellConfig& well, const UnitSystem& u) {
  const Wavepacket packet(spec, well, u);
  const double sx = spec.sigma_x(u);
  const double lambda_min = 2.0 * std::numbers::pi * u.hbar / spec.quad.p_max;
  const double step = std::min(sx / 16.0, lambda_min / 16.0);
  const std::vector<double> x = uniform_grid(spec.x0 - 12.0 * sx, spec.x0 + 12.0 * sx, step);
  std::vector<FieldValue> f(x.size());
  packet.evaluate_row(0.0, x, f);
  std::vector<double> rho(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    rho[i] = charge_density(f[i].psi, f[i].dpsi_dt, well.potential(x[i]), well.mass, u);
  }
  return region_charges(x, rho, well).total;
}

WavepacketSpec normalized(const WavepacketSpec& spec, const WellConfig& well, const UnitSystem& u) {
  const double q0 = initial_charge(spec, well, u);
  if (!(q0 > 0.0)) throw Error("wavepacket has non-positive initial charge; cannot normalize");
  WavepacketSpec out = spec;
  const double scale = 1.0 / std::sqrt(q0);
  out.alpha *= scale;
  out.beta *= scale;
  return out;
}

FieldGrid evolve_grid(const Wavepacket& packet, std::span<const double> x_grid, std::span<const double> t_list,
                      int threads) {
  FieldGrid grid;
  grid.x.assign(x_grid.begin(), x_grid.end());
  const std::size_t nx = grid.x.size();
  const int n_threads = std::max(1, std::min<int>(threads, static_cast<int>(std::max<std::size_t>(nx, 1))));
  const WellConfig& well = packet.well();

  for (double t : t_list) {
    Snapshot snap;
    snap.t = t;
    std::vector<FieldValue> f(nx);
    if (n_threads == 1) {
      packet.evaluate_row(t, grid.x, f);
    } else {
      std::vector<std::jthread> pool;
      const std::size_t chunk = (nx + static_cast<std::size_t>(n_threads) - 1) / static_cast<std::size_t>(n_threads);
      for (int w = 0; w < n_threads; ++w) {
        const std::size_t lo = static_cast<std::size_t>(w) * chunk;
        if (lo >= nx) break;
        const std::size_t len = std::min(chunk, nx - lo);
        pool.emplace_back([&, lo, len] {
          packet.evaluate_row(t, std::span<const double>(grid.x).subspan(lo, len),
                              std::span<FieldValue>(f).subspan(lo, len));
        });
      }
    }
    snap.psi.resize(nx);
    snap.dpsi_dt.resize(nx);
    snap.rho.resize(nx);
    for (std::size_t i = 0; i < nx; ++i) {
      snap.psi[i] = f[i].psi;
      snap.dpsi_dt[i] = f[i].dpsi_dt;
      snap.rho[i] = charge_density(f[i].psi, f[i].dpsi_dt, well.potential(grid.x[i]), well.mass, packet.units());
    }
    grid.snapshots.push_back(std::move(snap));
  }
  return grid;
}

double total_charge(const FieldGrid& grid, std::size_t t_index) {
  const auto& rho = grid.snapshots.at(t_index).rho;
  double q = 0.0;
  for (std::size_t i = 0; i + 1 < grid.x.size(); ++i) q += trapezoid_segment(grid.x[i], grid.x[i + 1], rho[i], rho[i + 1]);
  return q;
}

RegionCharges region_charges(std::span<const double> x, std::span<const double> rho, const WellConfig& well) {
  RegionCharges rc;
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    const double seg = trapezoid_segment(x[i], x[i + 1], rho[i], rho[i + 1]);
    switch (region_of(0.5 * (x[i] + x[i + 1]), well)) {
      case 1: rc.region1 += seg; break;
      case 2: rc.region2 += seg; break;
      default: rc.region3 += seg; break;
    }
  }
  rc.total = rc.region1 + rc.region2 + rc.region3;
  return rc;
}

RegionCharges region_charges(const FieldGrid& grid, std::size_t t_index, const WellConfig& well) {
  return region_charges(grid.x, grid.snapshots.at(t_index).rho, well);
}

double charge_centroid(std::span<const double> x, std::span<const double> rho) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    num += trapezoid_segment(x[i], x[i + 1], x[i] * rho[i], x[i + 1] * rho[i + 1]);
    den += trapezoid_segment(x[i], x[i + 1], rho[i], rho[i + 1]);
  }
  return num / den;
}

std::vector<double> uniform_grid(double lo, double hi, double step) {
  if (!(step > 0.0) || !(hi >= lo)) throw InvalidConfig("uniform_grid: need step > 0 and hi >= lo");
  const auto n = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = lo + static_cast<double>(i) * step;
  return x;
}

}  // namespace kgwell
