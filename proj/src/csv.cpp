#include "kgwell/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "kgwell/errors.hpp"

namespace kgwell::csv {

std::string format(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void write_atomic(const std::filesystem::path& path, std::string_view content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open " + tmp.string() + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw Error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::string bound_states(const BoundStateTable& table, const UnitSystem& u) {
  std::string s(kBoundStateHeader);
  s += '\n';
  for (const BoundState& b : table.states) {
    s += std::to_string(b.k) + ',' + to_string(b.parity) + ',' + format(b.P(table.well, u)) + ',' + format(b.p) +
         ',' + format(b.energy) + ',' + format(b.qr) + ',' + format(b.residual) + '\n';
  }
  return s;
}

std::string intersection_curves(const std::vector<IntersectionRow>& rows) {
  std::string s(kCurveHeader);
  s += '\n';
  for (const auto& r : rows) s += format(r.P) + ',' + format(r.Qa) + ',' + format(r.Qb) + ',' + format(r.Qr) + '\n';
  return s;
}

std::string resonance_scan(const ResonanceScan& scan) {
  std::string s(kScanHeader);
  s += '\n';
  for (const auto& r : scan.rows) {
    if (r.degenerate) continue;
    s += format(r.p) + ',' + format(r.absA2) + ',' + format(r.absB1) + ',' + format(r.absA3) + ',' +
         format(scan.depth) + ',' + std::to_string(scan.nmax) + '\n';
  }
  return s;
}

std::string snapshots(const FieldGrid& grid) {
  std::string s(kSnapshotSchema);
  s += '\n';
  s += kSnapshotHeader;
  s += '\n';
  for (const Snapshot& snap : grid.snapshots) {
    const std::string t = format(snap.t);
    for (std::size_t i = 0; i < grid.x.size(); ++i) {
      s += t + ',' + format(grid.x[i]) + ',' + format(snap.psi[i].real()) + ',' + format(snap.psi[i].imag()) + ',' +
           format(snap.rho[i]) + '\n';
    }
  }
  return s;
}

std::string charge_summary(const FieldGrid& grid, const WellConfig& well) {
  std::string s(kChargeHeader);
  s += '\n';
  for (std::size_t k = 0; k < grid.snapshots.size(); ++k) {
    const RegionCharges rc = region_charges(grid, k, well);
    s += format(grid.snapshots[k].t) + ',' + format(rc.total) + ',' + format(rc.region1) + ',' + format(rc.region2) +
         ',' + format(rc.region3) + '\n';
  }
  return s;
}

namespace {

double parse_double(std::string_view field, const std::filesystem::path& path) {
  double v = 0.0;
  const auto res = std::from_chars(field.data(), field.data() + field.size(), v);
  if (res.ec != std::errc() || res.ptr != field.data() + field.size()) {
    throw InvalidConfig(path.string() + ": bad number '" + std::string(field) + "'");
  }
  return v;
}

}  // namespace

FieldGrid read_snapshots(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidConfig("cannot read " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != kSnapshotSchema) {
    throw InvalidConfig(path.string() + ": expected schema line '" + std::string(kSnapshotSchema) + "'");
  }
  if (!std::getline(in, line) || line != kSnapshotHeader) {
    throw InvalidConfig(path.string() + ": unexpected header");
  }
  FieldGrid grid;
  std::vector<double> x_current;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    double v[5];
    std::size_t start = 0;
    for (int c = 0; c < 5; ++c) {
      const std::size_t end = c < 4 ? line.find(',', start) : line.size();
      if (end == std::string::npos) throw InvalidConfig(path.string() + ": short row");
      v[c] = parse_double(std::string_view(line).substr(start, end - start), path);
      start = end + 1;
    }
    if (grid.snapshots.empty() || grid.snapshots.back().t != v[0]) {
      if (!grid.snapshots.empty()) {
        if (grid.snapshots.size() == 1) grid.x = x_current;
        else if (x_current != grid.x) throw InvalidConfig(path.string() + ": x grid differs between snapshots");
      }
      x_current.clear();
      grid.snapshots.push_back(Snapshot{v[0], {}, {}, {}});
    }
    x_current.push_back(v[1]);
    grid.snapshots.back().psi.emplace_back(v[2], v[3]);
    grid.snapshots.back().rho.push_back(v[4]);
  }
  if (!grid.snapshots.empty()) {
    if (grid.snapshots.size() == 1) grid.x = x_current;
    else if (x_current != grid.x) throw InvalidConfig(path.string() + ": x grid differs between snapshots");
  }
  return grid;
}

}  // namespace kgwell::csv
