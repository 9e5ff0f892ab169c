#include "config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "kgwell/errors.hpp"
#include "kgwell/mse.hpp"

namespace kgwell::cli {

namespace {

namespace pt = boost::property_tree;

const std::map<std::string, std::set<std::string>>& schema() {
  static const std::map<std::string, std::set<std::string>> s{
      {"units", {"hbar", "c"}},
      {"well", {"depth", "width", "mass"}},
      {"bound_states", {"tol", "curve_points", "curve_P_max", "pole_window"}},
      {"scan", {"depths", "p_min", "p_max", "points", "nmax", "alpha_re", "alpha_im", "beta_re", "beta_im"}},
      {"wavepacket",
       {"p0", "sigma_p", "x0", "alpha_re", "alpha_im", "beta_re", "beta_im", "nmax", "normalize"}},
      {"quadrature", {"rule", "nodes", "half_width", "p_min", "p_max"}},
      {"grid", {"x_min", "x_max", "dx", "times"}},
      {"fdtd", {"dx", "dt", "x_left", "x_right"}},
      {"convergence", {"dx", "levels", "t_final"}},
      {"compare", {"l2_max", "centroid_max", "charge_max"}},
  };
  return s;
}

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t");
  const auto e = s.find_last_not_of(" \t");
  return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& raw) {
  const std::string v = trim(raw);
  double out = 0.0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (v.empty() || res.ec != std::errc() || res.ptr != v.data() + v.size()) {
    throw InvalidConfig(key + ": expected a number, got '" + raw + "'");
  }
  return out;
}

int to_int(const std::string& key, const std::string& raw) {
  const double d = to_double(key, raw);
  if (d != static_cast<double>(static_cast<long>(d))) throw InvalidConfig(key + ": expected an integer");
  return static_cast<int>(d);
}

bool to_bool(const std::string& key, const std::string& raw) {
  const std::string v = trim(raw);
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw InvalidConfig(key + ": expected true/false");
}

std::vector<double> to_list(const std::string& key, const std::string& raw) {
  std::vector<double> out;
  std::stringstream ss(raw);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(to_double(key, item));
  if (out.empty()) throw InvalidConfig(key + ": empty list");
  return out;
}

class Reader {
 public:
  explicit Reader(const pt::ptree& tree) : tree_(tree) {}

  template <typename F>
  void get(const std::string& section, const std::string& key, F&& apply) const {
    const auto sec = tree_.get_child_optional(section);
    if (!sec) return;
    const auto val = sec->get_optional<std::string>(key);
    // Trailing "; comment" is allowed after a value.
    if (val) apply(section + "." + key, trim(val->substr(0, val->find(';'))));
  }

 private:
  const pt::ptree& tree_;
};

void validate(const RunConfig& cfg) {
  cfg.units.validate();
  cfg.well.validate();
  if (!(cfg.bound_states.tol > 0.0)) throw InvalidConfig("bound_states.tol must be > 0");
  if (cfg.bound_states.curve_points < 2) throw InvalidConfig("bound_states.curve_points must be >= 2");
  if (!(cfg.bound_states.pole_window >= 0.0)) throw InvalidConfig("bound_states.pole_window must be >= 0");
  if (!(cfg.scan.p_min > 0.0 && cfg.scan.p_max > cfg.scan.p_min)) throw InvalidConfig("scan: need 0 < p_min < p_max");
  if (cfg.scan.points < 3) throw InvalidConfig("scan.points must be >= 3");
  if (cfg.scan.nmax < 0) throw InvalidConfig("scan.nmax must be >= 0");
  for (double d : cfg.scan.depths) {
    if (!(d >= 0.0)) throw InvalidConfig("scan.depths must be >= 0");
  }
  if (!(cfg.packet.p0 > 0.0)) throw InvalidConfig("wavepacket.p0 must be > 0");
  if (!(cfg.packet.sigma_p > 0.0)) throw InvalidConfig("wavepacket.sigma_p must be > 0");
  if (!cfg.auto_nmax && cfg.packet.nmax < 0) throw InvalidConfig("wavepacket.nmax must be >= 0");
  if (cfg.quadrature.nodes < 2) throw InvalidConfig("quadrature.nodes must be >= 2");
  if (!(cfg.quadrature.half_width > 0.0)) throw InvalidConfig("quadrature.half_width must be > 0");
  if (!(cfg.grid.dx > 0.0 && cfg.grid.x_max > cfg.grid.x_min)) throw InvalidConfig("grid: need dx > 0 and x_max > x_min");
  for (double t : cfg.grid.times) {
    if (!std::isfinite(t)) throw InvalidConfig("grid.times must be finite");
  }
  if (cfg.convergence.levels < 2) throw InvalidConfig("convergence.levels must be >= 2");
  if (!(cfg.convergence.dx > 0.0 && cfg.convergence.t_final > 0.0)) {
    throw InvalidConfig("convergence: need dx > 0 and t_final > 0");
  }
  cfg.fdtd.validate(cfg.well, cfg.units);
  cfg.resolved_packet().validate();
}

}  // namespace

WavepacketSpec RunConfig::resolved_packet() const {
  WavepacketSpec spec = packet;
  spec.quad = QuadraturePlan::around(packet.p0, packet.sigma_p, quadrature.half_width, quadrature.nodes, quadrature.rule);
  if (quadrature.p_min > 0.0) spec.quad.p_min = quadrature.p_min;
  if (quadrature.p_max > 0.0) spec.quad.p_max = quadrature.p_max;
  if (auto_nmax) {
    const double t_max = grid.times.empty() ? 0.0 : *std::max_element(grid.times.begin(), grid.times.end());
    spec.nmax = causal_nmax(t_max, packet.p0, well, units);
  }
  return spec;
}

std::vector<double> RunConfig::x_grid() const { return uniform_grid(grid.x_min, grid.x_max, grid.dx); }

RunConfig parse_config(const std::string& text) {
  pt::ptree tree;
  try {
    std::istringstream in(text);
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw InvalidConfig(std::string("config parse error: ") + e.what());
  }

  for (const auto& [section, body] : tree) {
    const auto it = schema().find(section);
    if (it == schema().end()) throw InvalidConfig("unknown config section [" + section + "]");
    if (!body.data().empty()) throw InvalidConfig("key '" + section + "' outside any section");
    for (const auto& [key, value] : body) {
      if (!it->second.contains(key)) throw InvalidConfig("unknown key '" + key + "' in [" + section + "]");
    }
  }

  RunConfig cfg;

  const Reader r(tree);
  auto num = [](double& dst) { return [&dst](const std::string& k, const std::string& v) { dst = to_double(k, v); }; };
  auto integer = [](int& dst) { return [&dst](const std::string& k, const std::string& v) { dst = to_int(k, v); }; };

  r.get("units", "hbar", num(cfg.units.hbar));
  r.get("units", "c", num(cfg.units.c));
  r.get("well", "depth", num(cfg.well.depth));
  r.get("well", "width", num(cfg.well.width));
  r.get("well", "mass", num(cfg.well.mass));

  r.get("bound_states", "tol", num(cfg.bound_states.tol));
  r.get("bound_states", "curve_points", integer(cfg.bound_states.curve_points));
  r.get("bound_states", "curve_P_max", num(cfg.bound_states.curve_P_max));
  r.get("bound_states", "pole_window", num(cfg.bound_states.pole_window));

  double re = 1.0, im = 0.0, bre = 0.0, bim = 0.0;
  r.get("scan", "depths", [&](const std::string& k, const std::string& v) { cfg.scan.depths = to_list(k, v); });
  r.get("scan", "p_min", num(cfg.scan.p_min));
  r.get("scan", "p_max", num(cfg.scan.p_max));
  r.get("scan", "points", integer(cfg.scan.points));
  r.get("scan", "nmax", integer(cfg.scan.nmax));
  r.get("scan", "alpha_re", num(re));
  r.get("scan", "alpha_im", num(im));
  r.get("scan", "beta_re", num(bre));
  r.get("scan", "beta_im", num(bim));
  cfg.scan.alpha = {re, im};
  cfg.scan.beta = {bre, bim};

  re = 1.0, im = 0.0, bre = 0.0, bim = 0.0;
  r.get("wavepacket", "p0", num(cfg.packet.p0));
  r.get("wavepacket", "sigma_p", num(cfg.packet.sigma_p));
  r.get("wavepacket", "x0", num(cfg.packet.x0));
  r.get("wavepacket", "alpha_re", num(re));
  r.get("wavepacket", "alpha_im", num(im));
  r.get("wavepacket", "beta_re", num(bre));
  r.get("wavepacket", "beta_im", num(bim));
  r.get("wavepacket", "nmax", [&](const std::string& k, const std::string& v) {
    if (trim(v) == "auto") cfg.auto_nmax = true;
    else cfg.packet.nmax = to_int(k, v);
  });
  r.get("wavepacket", "normalize", [&](const std::string& k, const std::string& v) { cfg.normalize = to_bool(k, v); });
  cfg.packet.alpha = {re, im};
  cfg.packet.beta = {bre, bim};

  r.get("quadrature", "rule", [&](const std::string&, const std::string& v) { cfg.quadrature.rule = parse_rule(trim(v)); });
  r.get("quadrature", "nodes", integer(cfg.quadrature.nodes));
  r.get("quadrature", "half_width", num(cfg.quadrature.half_width));
  r.get("quadrature", "p_min", num(cfg.quadrature.p_min));
  r.get("quadrature", "p_max", num(cfg.quadrature.p_max));

  r.get("grid", "x_min", num(cfg.grid.x_min));
  r.get("grid", "x_max", num(cfg.grid.x_max));
  r.get("grid", "dx", num(cfg.grid.dx));
  r.get("grid", "times", [&](const std::string& k, const std::string& v) { cfg.grid.times = to_list(k, v); });

  r.get("fdtd", "dx", num(cfg.fdtd.dx));
  r.get("fdtd", "dt", num(cfg.fdtd.dt));
  r.get("fdtd", "x_left", num(cfg.fdtd.x_left));
  r.get("fdtd", "x_right", num(cfg.fdtd.x_right));

  r.get("convergence", "dx", num(cfg.convergence.dx));
  r.get("convergence", "levels", integer(cfg.convergence.levels));
  r.get("convergence", "t_final", num(cfg.convergence.t_final));

  r.get("compare", "l2_max", num(cfg.compare.l2_max));
  r.get("compare", "centroid_max", num(cfg.compare.centroid_max));
  r.get("compare", "charge_max", num(cfg.compare.charge_max));

  validate(cfg);
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidConfig("cannot open config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace kgwell::cli
