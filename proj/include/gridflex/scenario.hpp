#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace gridflex {

enum class ScenarioKind { Intermittency, PeakShaving, EnergyReserve, Custom };

std::string_view to_string(ScenarioKind kind);
/// Accepts "intermittency", "peak-shaving", "energy-reserve".
ScenarioKind parse_scenario_kind(std::string_view text);

/// Net load in per-unit of the resource's rated power, one value per
/// interval of `dt_minutes`. Positive is extra demand, negative is extra
/// generation.
struct NetLoadProfile {
    int dt_minutes = 1;
    std::vector<double> values;
    ScenarioKind kind = ScenarioKind::Custom;

    std::size_t steps() const { return values.size(); }
    int horizon_minutes() const { return dt_minutes * static_cast<int>(values.size()); }
    double horizon_hours() const { return horizon_minutes() / 60.0; }

    bool operator==(const NetLoadProfile&) const = default;
};

inline constexpr int kIntermittencyHorizon = 120;
inline constexpr int kPeakShavingHorizon = 1440;
inline constexpr int kEnergyReserveHorizon = 1200;
inline constexpr double kScenarioMagnitude = 0.5;

/// Piecewise-constant blocks of sign-alternating seeded values. The block
/// length is lcm(5, dt) minutes so every block spans whole intervals; at least
/// two blocks are required.
NetLoadProfile gen_intermittency(std::uint64_t seed, int dt_minutes = 1);

/// Length of one intermittency block for a given interval.
int intermittency_block_minutes(int dt_minutes);

/// Duck curve: raised-cosine generation trough centred at 12:00 (8 h wide)
/// and raised-cosine demand peak centred at 19:00 (6 h wide). Sampled at the
/// start of each interval; dt must divide 60 so both peaks are sampled.
NetLoadProfile gen_peak_shaving(int dt_minutes = 1);

/// Closed-form duck curve value at a given minute of the day.
double peak_shaving_value(double minute);

/// +0.5 for 6 h, 0 for 6 h, -0.5 for 6 h, 0 for 2 h. dt must divide 120 so
/// that every step change lands on an interval boundary.
NetLoadProfile gen_energy_reserve(int dt_minutes = 1);

/// Dispatches to one of the generators above; `seed` only matters for
/// intermittency.
NetLoadProfile make_scenario(ScenarioKind kind, int dt_minutes, std::uint64_t seed);

/// Two columns with header `minute,net_pu`; values at 17 significant digits.
std::string profile_to_csv(const NetLoadProfile& profile);
void save_profile_csv(const NetLoadProfile& profile, const std::string& path);

/// Parses the CSV format above. dt is inferred from the index spacing, which
/// must be a uniform positive integer. A single row is read with dt = 1.
NetLoadProfile profile_from_csv(std::string_view text);
NetLoadProfile load_profile_csv(const std::string& path);

/// Throws ValidationError unless dt > 0, values are non-empty and finite.
void require_valid(const NetLoadProfile& profile);

} // namespace gridflex
