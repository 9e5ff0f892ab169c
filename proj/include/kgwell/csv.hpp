#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "kgwell/boundstates.hpp"
#include "kgwell/mse.hpp"
#include "kgwell/wavepacket.hpp"

namespace kgwell::csv {

/// First line of every snapshot file; readers refuse anything else.
inline constexpr std::string_view kSnapshotSchema = "# kgwell-snapshot v1";
inline constexpr std::string_view kSnapshotHeader = "t,x,re_psi,im_psi,rho";
inline constexpr std::string_view kChargeHeader = "t,total_charge,charge_region1,charge_region2,charge_region3";
inline constexpr std::string_view kBoundStateHeader = "k,parity,P,p,E,qr,residual";
inline constexpr std::string_view kCurveHeader = "P,Qa,Qb,Qr";
inline constexpr std::string_view kScanHeader = "p,absA2,absB1,absA3,V0,nmax";

/// Shortest round-trip representation of a double.
std::string format(double v);

/// Writes to a sibling temporary and renames over the target.
void write_atomic(const std::filesystem::path& path, std::string_view content);

std::string bound_states(const BoundStateTable& table, const UnitSystem& u = {});
std::string intersection_curves(const std::vector<IntersectionRow>& rows);
/// Degenerate rows are omitted.
std::string resonance_scan(const ResonanceScan& scan);

/// One row per (t, x); psi and rho columns taken from each snapshot.
std::string snapshots(const FieldGrid& grid);
std::string charge_summary(const FieldGrid& grid, const WellConfig& well);

/// Parses a snapshot file back into a grid (psi and rho only; dpsi_dt left empty).
/// Throws InvalidConfig on a schema mismatch or an inconsistent layout.
FieldGrid read_snapshots(const std::filesystem::path& path);

}  // namespace kgwell::csv
