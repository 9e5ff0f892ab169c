#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "kgwell/core.hpp"
#include "kgwell/fdtd.hpp"
#include "kgwell/wavepacket.hpp"

namespace kgwell::cli {

/// Every parameter any subcommand reads. Loaded from a flat INI file with one
/// section per module; absent keys keep the defaults below.
struct RunConfig {
  UnitSystem units;
  WellConfig well;

  struct BoundStates {
    double tol = 1e-10;
    int curve_points = 2000;
    double curve_P_max = 0.0;  // 0: up to the edge of the bound window
    double pole_window = 0.02;
  } bound_states;

  struct Scan {
    std::vector<double> depths;
    double p_min = 0.05;
    double p_max = 10.0;
    int points = 2000;
    int nmax = 10;
    cplx alpha = 1.0;
    cplx beta = 0.0;
  } scan;

  WavepacketSpec packet;
  bool normalize = true;
  bool auto_nmax = false;  // nmax = causal_nmax(last snapshot time)

  struct Quadrature {
    QuadratureRule rule = QuadratureRule::GaussLegendre;
    int nodes = 2048;
    double half_width = 10.0;
    double p_min = 0.0;  // 0: derived from half_width
    double p_max = 0.0;
  } quadrature;

  struct Grid {
    double x_min = -800.0;
    double x_max = 1600.0;
    double dx = 0.5;
    std::vector<double> times{0.0};
  } grid;

  FdtdConfig fdtd;
  struct Convergence {
    double dx = 0.2;
    int levels = 3;
    double t_final = 100.0;
  } convergence;

  struct Compare {
    double l2_max = 0.05;
    double centroid_max = 5.0;
    double charge_max = 0.02;
  } compare;

  /// Quadrature plan and nmax resolved into the packet spec.
  WavepacketSpec resolved_packet() const;
  std::vector<double> x_grid() const;
};

/// Parses and validates. Unknown sections or keys, malformed values and
/// violated physical invariants raise InvalidConfig.
RunConfig load_config(const std::filesystem::path& path);
RunConfig parse_config(const std::string& text);

}  // namespace kgwell::cli
