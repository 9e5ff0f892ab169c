#include "commands.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <iomanip>
#include <json.hpp>
#include <numbers>
#include <ostream>
#include <sstream>

#include "kgwell/boundstates.hpp"
#include "kgwell/csv.hpp"
#include "kgwell/errors.hpp"
#include "kgwell/mse.hpp"

namespace kgwell::cli {

namespace {

namespace fs = std::filesystem;

std::string depth_tag(double v) {
  std::string s = csv::format(v);
  std::replace(s.begin(), s.end(), '.', 'p');
  return s;
}

double abs_centroid(std::span<const double> x, std::span<const double> rho) {
  std::vector<double> a(rho.size());
  std::transform(rho.begin(), rho.end(), a.begin(), [](double v) { return std::abs(v); });
  return charge_centroid(x, a);
}

double trapezoid(std::span<const double> x, std::span<const double> f) {
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < x.size(); ++i) s += 0.5 * (x[i + 1] - x[i]) * (f[i] + f[i + 1]);
  return s;
}

Wavepacket build_packet(const RunConfig& cfg, std::ostream& log) {
  WavepacketSpec spec = cfg.resolved_packet();
  if (cfg.normalize) spec = normalized(spec, cfg.well, cfg.units);
  log << "wavepacket: p0=" << spec.p0 << " sigma_p=" << spec.sigma_p << " x0=" << spec.x0 << " nmax=" << spec.nmax
      << " nodes=" << spec.quad.n_nodes << " |alpha|=" << std::abs(spec.alpha) << '\n';
  if (spec.sigma_x(cfg.units) > 0.25 * cfg.well.width) {
    log << "warning: position spread " << spec.sigma_x(cfg.units) << " is not small against the well width\n";
  }
  return Wavepacket(spec, cfg.well, cfg.units);
}

void write_run(const fs::path& out, const FieldGrid& grid, const WellConfig& well) {
  csv::write_atomic(out / "field.csv", csv::snapshots(grid));
  csv::write_atomic(out / "charge.csv", csv::charge_summary(grid, well));
}

}  // namespace

int cmd_bound_states(const RunConfig& cfg, const Options& opt, std::ostream& log) {
  const BoundStateTable table = find_bound_states(cfg.well, cfg.bound_states.tol, cfg.units);
  csv::write_atomic(opt.out / "bound_states.csv", csv::bound_states(table, cfg.units));

  const MomentumWindow window = bound_window(cfg.well, cfg.units);
  const double scale = cfg.well.width / (2.0 * cfg.units.hbar);
  double P_max = cfg.bound_states.curve_P_max;
  if (!(P_max > 0.0)) P_max = window.empty() ? 0.0 : window.hi * scale;
  std::vector<double> P_grid;
  const int n = cfg.bound_states.curve_points;
  for (int i = 0; i < n; ++i) P_grid.push_back(P_max * i / (n - 1));
  const auto rows = intersection_curves(cfg.well, P_grid, cfg.bound_states.pole_window, cfg.units);
  csv::write_atomic(opt.out / "intersection_curves.csv", csv::intersection_curves(rows));

  log << "bound states: " << table.states.size() << " found for V0=" << cfg.well.depth << '\n';
  for (const BoundState& s : table.states) {
    log << "  k=" << s.k << ' ' << to_string(s.parity) << " p=" << std::setprecision(12) << s.p << " E=" << s.energy
        << '\n';
  }
  return kExitOk;
}

int cmd_scan(const RunConfig& cfg, const Options& opt, std::ostream& log) {
  std::vector<double> depths = cfg.scan.depths;
  if (depths.empty()) depths.push_back(cfg.well.depth);
  std::vector<double> p_grid(static_cast<std::size_t>(cfg.scan.points));
  for (int i = 0; i < cfg.scan.points; ++i) {
    p_grid[static_cast<std::size_t>(i)] = cfg.scan.p_min + (cfg.scan.p_max - cfg.scan.p_min) * i / (cfg.scan.points - 1);
  }

  const double spacing = std::numbers::pi * cfg.units.hbar / cfg.well.width;
  const int kmax = static_cast<int>(cfg.scan.p_max / spacing);
  std::vector<std::vector<std::optional<Peak>>> b1_peaks;
  std::string peaks_csv = "V0,k,p_k,p_peak,absB1\n";

  for (double V0 : depths) {
    WellConfig well = cfg.well;
    well.depth = V0;
    const ResonanceScan scan = resonance_scan(well, p_grid, cfg.scan.alpha, cfg.scan.beta, cfg.scan.nmax, cfg.units);
    const auto flagged = std::count_if(scan.rows.begin(), scan.rows.end(), [](const auto& r) { return r.degenerate; });
    if (flagged > 0) log << "V0=" << V0 << ": " << flagged << " degenerate-channel rows skipped\n";
    csv::write_atomic(opt.out / ("scan_V0_" + depth_tag(V0) + ".csv"), csv::resonance_scan(scan));

    const std::vector<Peak> peaks = find_peaks(scan, ScanColumn::B1);
    std::vector<std::optional<Peak>> per_k;
    for (int k = 1; k <= kmax; ++k) {
      const auto pk = tallest_peak_in(peaks, (k - 0.5) * spacing, (k + 0.5) * spacing);
      per_k.push_back(pk);
      if (pk) {
        peaks_csv += csv::format(V0) + ',' + std::to_string(k) + ',' + csv::format(k * spacing) + ',' +
                     csv::format(pk->p) + ',' + csv::format(pk->height) + '\n';
      }
    }
    b1_peaks.push_back(std::move(per_k));
  }
  csv::write_atomic(opt.out / "scan_peaks.csv", peaks_csv);

  if (depths.size() > 1) {
    for (int k = 1; k <= kmax; ++k) {
      bool all = true, decreasing = true;
      for (std::size_t d = 0; d < depths.size(); ++d) all = all && b1_peaks[d][static_cast<std::size_t>(k - 1)];
      if (!all) continue;
      for (std::size_t d = 1; d < depths.size(); ++d) {
        const bool deeper = depths[d] > depths[d - 1];
        const double h0 = b1_peaks[d - 1][static_cast<std::size_t>(k - 1)]->height;
        const double h1 = b1_peaks[d][static_cast<std::size_t>(k - 1)]->height;
        decreasing = decreasing && (deeper ? h1 < h0 : h1 > h0);
      }
      log << "|B1| peak k=" << k << ": " << (decreasing ? "decreases" : "does not decrease") << " with V0\n";
    }
  }
  return kExitOk;
}

int cmd_evolve(const RunConfig& cfg, const Options& opt, std::ostream& log) {
  const Wavepacket packet = build_packet(cfg, log);
  const std::vector<double> x = cfg.x_grid();
  const FieldGrid grid = evolve_grid(packet, x, cfg.grid.times, opt.threads);
  write_run(opt.out, grid, cfg.well);
  for (std::size_t k = 0; k < grid.snapshots.size(); ++k) {
    const RegionCharges rc = region_charges(grid, k, cfg.well);
    log << "t=" << grid.snapshots[k].t << " Q=" << rc.total << " (" << rc.region1 << ", " << rc.region2 << ", "
        << rc.region3 << ")\n";
  }
  return kExitOk;
}

int cmd_fdtd(const RunConfig& cfg, const Options& opt, std::ostream& log) {
  if (opt.convergence) {
    const auto rows = free_space_convergence(cfg.resolved_packet(), cfg.well.mass, cfg.convergence.dx,
                                             cfg.convergence.levels, cfg.convergence.t_final, cfg.units);
    std::string s = "dx,dt,l2_error,ratio\n";
    for (const auto& r : rows) {
      s += csv::format(r.dx) + ',' + csv::format(r.dt) + ',' + csv::format(r.l2_error) + ',' + csv::format(r.ratio) + '\n';
      log << "dx=" << r.dx << " error=" << r.l2_error << " ratio=" << r.ratio << '\n';
    }
    csv::write_atomic(opt.out / "convergence.csv", s);
  }

  const Wavepacket packet = build_packet(cfg, log);
  const FdtdSolver solver(cfg.well, cfg.fdtd, cfg.units);
  const std::vector<double> x = cfg.x_grid();
  const std::vector<std::size_t> idx = lattice_indices(cfg.fdtd, x);

  std::vector<double> times = cfg.grid.times;
  std::sort(times.begin(), times.end());
  if (times.front() < 0.0) throw InvalidConfig("fdtd snapshot times must be >= 0");

  FdtdState state = solver.init_from_wavepacket(packet, opt.threads);
  const double q0 = solver.lattice_charge(state);
  FieldGrid grid;
  grid.x = x;
  std::string drift = "t,lattice_charge,relative_drift\n";
  for (double t : times) {
    const long target = std::lround(t / cfg.fdtd.dt);
    solver.run(state, target - state.step_index);
    const std::vector<double> rho = solver.charge_on_lattice(state);
    Snapshot snap;
    snap.t = t;
    for (std::size_t i : idx) {
      snap.psi.push_back(state.psi_curr[i]);
      snap.rho.push_back(rho[i]);
    }
    grid.snapshots.push_back(std::move(snap));
    const double q = solver.lattice_charge(state);
    drift += csv::format(t) + ',' + csv::format(q) + ',' + csv::format((q - q0) / q0) + '\n';
    log << "t=" << t << " lattice charge " << q << " drift " << (q - q0) / q0 << '\n';
  }
  write_run(opt.out, grid, cfg.well);
  csv::write_atomic(opt.out / "drift.csv", drift);
  return kExitOk;
}

CompareReport compare_runs(const FieldGrid& a, const FieldGrid& b, const RunConfig::Compare& thresholds) {
  if (a.x.size() != b.x.size() || a.snapshots.size() != b.snapshots.size()) {
    throw InvalidConfig("compare: runs have different grid or snapshot counts");
  }
  for (std::size_t i = 0; i < a.x.size(); ++i) {
    if (std::abs(a.x[i] - b.x[i]) > 1e-9 * std::max(1.0, std::abs(a.x[i]))) throw InvalidConfig("compare: x grids differ");
  }
  CompareReport report;
  report.pass = true;
  for (std::size_t k = 0; k < a.snapshots.size(); ++k) {
    const Snapshot& sa = a.snapshots[k];
    const Snapshot& sb = b.snapshots[k];
    if (std::abs(sa.t - sb.t) > 1e-9 * std::max(1.0, std::abs(sa.t))) throw InvalidConfig("compare: snapshot times differ");
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < a.x.size(); ++i) {
      num += (sa.rho[i] - sb.rho[i]) * (sa.rho[i] - sb.rho[i]);
      den += sa.rho[i] * sa.rho[i];
    }
    SnapshotDiff d;
    d.t = sa.t;
    d.l2_rel = num == 0.0 ? 0.0 : std::sqrt(num / den);
    d.centroid_diff = num == 0.0 ? 0.0 : std::abs(abs_centroid(a.x, sa.rho) - abs_centroid(b.x, sb.rho));
    d.charge_diff = std::abs(trapezoid(a.x, sa.rho) - trapezoid(b.x, sb.rho));
    report.pass = report.pass && d.l2_rel <= thresholds.l2_max && d.centroid_diff <= thresholds.centroid_max &&
                  d.charge_diff <= thresholds.charge_max;
    report.snapshots.push_back(d);
  }
  return report;
}

std::string to_json(const CompareReport& report) {
  nlohmann::json j;
  j["snapshots"] = nlohmann::json::array();
  for (const auto& d : report.snapshots) {
    j["snapshots"].push_back({{"t", d.t}, {"l2_rel", d.l2_rel}, {"centroid_diff", d.centroid_diff},
                              {"charge_diff", d.charge_diff}});
  }
  j["pass"] = report.pass;
  return j.dump(2) + '\n';
}

int cmd_compare(const fs::path& run_a, const fs::path& run_b, const RunConfig::Compare& thresholds,
                const Options& opt, std::ostream& out, std::ostream& log) {
  const FieldGrid a = csv::read_snapshots(run_a / "field.csv");
  const FieldGrid b = csv::read_snapshots(run_b / "field.csv");
  const CompareReport report = compare_runs(a, b, thresholds);
  const std::string json = to_json(report);
  csv::write_atomic(opt.out / "compare.json", json);
  out << json;
  log << "compare: " << (report.pass ? "pass" : "FAIL") << '\n';
  return report.pass ? kExitOk : kExitFailure;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& log) {
  CLI::App app{"Klein-Gordon square-well simulator"};
  app.require_subcommand(1);

  Options opt;
  std::string config_path;
  std::string out_dir = "out";
  bool seedless = false;
  auto add_common = [&](CLI::App* sub, bool config_required) {
    auto* c = sub->add_option("--config", config_path, "INI run configuration");
    if (config_required) c->required();
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--threads", opt.threads, "worker threads")->check(CLI::PositiveNumber);
    sub->add_flag("--seedless", seedless, "assert that no random numbers are used (always true)");
  };

  auto* bs = app.add_subcommand("bound-states", "bound states of a shallow well");
  auto* scan = app.add_subcommand("scan", "MSE amplitude resonance scan");
  auto* evolve = app.add_subcommand("evolve", "semi-analytic wavepacket evolution");
  auto* fdtd = app.add_subcommand("fdtd", "finite-difference oracle");
  auto* compare = app.add_subcommand("compare", "compare two runs' charge densities");
  for (auto* sub : {bs, scan, evolve, fdtd}) add_common(sub, true);
  add_common(compare, false);
  fdtd->add_flag("--convergence", opt.convergence, "also write a free-space error-vs-resolution table");
  std::string run_a, run_b;
  compare->add_option("run_a", run_a, "reference run directory")->required();
  compare->add_option("run_b", run_b, "run directory to check")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    log << "error: " << e.what() << '\n';
    return kExitInvalid;
  }
  opt.out = out_dir;

  try {
    RunConfig cfg;
    if (!config_path.empty()) cfg = load_config(config_path);
    if (bs->parsed()) return cmd_bound_states(cfg, opt, log);
    if (scan->parsed()) return cmd_scan(cfg, opt, log);
    if (evolve->parsed()) return cmd_evolve(cfg, opt, log);
    if (fdtd->parsed()) return cmd_fdtd(cfg, opt, log);
    return cmd_compare(run_a, run_b, cfg.compare, opt, out, log);
  } catch (const InvalidConfig& e) {
    log << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace kgwell::cli
