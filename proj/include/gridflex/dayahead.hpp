#pragma once

// Horizon-coupled peak-shaving schedule: minimise the sum of squared deficits
// over the whole day subject to commitment, start-up, ramping and
// deficit-sign constraints. Solved exactly on a discretised power grid by
// dynamic programming; a brute-force enumerator over the same grid serves as
// the oracle.

#include "gridflex/dispatch.hpp"

#include <optional>
#include <string>
#include <vector>

namespace gridflex {

/// Admissible deficit at one interval. Each branch pins one end at zero, so
/// the deficit can only take the sign of the uncovered net load and never
/// exceed it.
struct DeficitBounds {
    double lo = 0.0;
    double hi = 0.0;
    bool contains(double offset) const { return lo <= offset && offset <= hi; }
};

DeficitBounds deficit_bounds(ResourceRole role, double baseline_mw, double net_mw);

inline constexpr int kDefaultPowerLevels = 257;
inline constexpr int kDefaultSocLevels = 33;
inline constexpr int kDefaultDayAheadDt = 15;

struct ScheduleProblem {
    ResourceSpec spec;
    NetLoadProfile profile;
    Baseline baseline; // MW per interval; empty for storage
    int power_levels = kDefaultPowerLevels;
    bool soc_enforced = false;
    int soc_levels = kDefaultSocLevels;
    double initial_soc_fraction = 0.5;
    std::optional<DispatchState> initial;

    int dt_minutes() const { return profile.dt_minutes; }
    std::size_t steps() const { return profile.steps(); }
};

ScheduleProblem make_schedule_problem(const ResourceSpec& spec, const NetLoadProfile& profile,
                                      BaselinePolicy policy = BaselinePolicy::Auto,
                                      int power_levels = kDefaultPowerLevels,
                                      std::span<const double> baseline_series = {});

/// Throws ValidationError on a malformed problem (N < 2, baseline length,
/// SoC on a non-storage resource, off-grid initial OFF count, ...).
void validate(const ScheduleProblem& problem);

/// Online power levels, ascending: N uniform points on [p_min, p_max]; for
/// storage mirrored onto [-p_max, -p_min] as well. Duplicates removed.
std::vector<double> power_grid(const ResourceSpec& spec, int levels);

/// Initial state with the power snapped to the nearest grid level (ties to
/// the lower level). Shared by the solver and the oracle.
DispatchState grid_initial_state(const ScheduleProblem& problem, const std::vector<double>& grid);

enum class Execution { Serial, Parallel };

struct DpOptions {
    Execution execution = Execution::Parallel;
    // Test hook: forbids holding the same power level between intervals.
    bool inject_fault = false;
};

/// Exact optimum over the grid. An infeasible problem returns a trajectory
/// with feasible == false and no steps.
Trajectory solve_dayahead_dp(const ScheduleProblem& problem, const DpOptions& options = {});

inline constexpr std::size_t kOracleMaxSteps = 10;
inline constexpr int kOracleMaxLevels = 8;

/// Enumerates every status/power sequence on the same grid, checking each
/// interval against the constraint replay in audit.hpp. Rejects instances
/// beyond kOracleMaxSteps / kOracleMaxLevels.
Trajectory brute_force_oracle(const ScheduleProblem& problem);

} // namespace gridflex
