#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "config.hpp"

namespace kgwell::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitInvalid = 2;

struct Options {
  std::filesystem::path out = "out";
  int threads = 1;
  bool convergence = false;
};

int cmd_bound_states(const RunConfig& cfg, const Options& opt, std::ostream& log);
int cmd_scan(const RunConfig& cfg, const Options& opt, std::ostream& log);
int cmd_evolve(const RunConfig& cfg, const Options& opt, std::ostream& log);
int cmd_fdtd(const RunConfig& cfg, const Options& opt, std::ostream& log);

struct SnapshotDiff {
  double t = 0.0;
  double l2_rel = 0.0;
  double centroid_diff = 0.0;
  double charge_diff = 0.0;
};

struct CompareReport {
  std::vector<SnapshotDiff> snapshots;
  bool pass = false;
};

/// Reference is run_a. Throws InvalidConfig if the runs do not share x grid and times.
CompareReport compare_runs(const FieldGrid& a, const FieldGrid& b, const RunConfig::Compare& thresholds);
std::string to_json(const CompareReport& report);

/// Reads <run>/field.csv from both directories and writes <out>/compare.json.
int cmd_compare(const std::filesystem::path& run_a, const std::filesystem::path& run_b,
                const RunConfig::Compare& thresholds, const Options& opt, std::ostream& out, std::ostream& log);

/// Entry point shared by the executable and the tests.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& log);

}  // namespace kgwell::cli
