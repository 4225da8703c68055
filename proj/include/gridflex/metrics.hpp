#pragma once

#include <span>
#include <string>
#include <vector>

namespace gridflex {

/// Deficit statistics in per-unit of rated power.
struct DeficitStats {
    double avg_abs = 0.0;           // mean |offset|
    double net_energy_signed = 0.0; // sum offset * dt, p.u.*h
    double net_energy_abs = 0.0;    // sum |offset| * dt, p.u.*h
    double rms = 0.0;               // sqrt(mean offset^2)
};

/// Means are taken over every interval of the horizon. Throws
/// ValidationError on an empty series.
DeficitStats compute_stats(std::span<const double> offsets_pu, int dt_minutes);

struct RankedEntry {
    std::string name;
    DeficitStats stats;
};

/// Ascending by rms, then net_energy_abs, then name. Needs >= 2 entries.
std::vector<RankedEntry> rank_resources(std::vector<RankedEntry> entries);

/// Header `resource,avg_abs_pu,net_energy_abs_puh,net_energy_signed_puh,rms_pu`,
/// values at 17 significant digits.
std::string stats_table_csv(const std::vector<RankedEntry>& rows);

/// Aligned text table with 4 significant digits.
std::string stats_table_text(const std::string& title, const std::vector<RankedEntry>& rows);

} // namespace gridflex
