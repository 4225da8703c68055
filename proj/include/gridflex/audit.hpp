#pragma once

// Independent replay of the dispatch constraints. Nothing here calls into the
// solvers: feasibility is re-derived from the inequalities themselves.

#include "gridflex/dayahead.hpp"
#include "gridflex/dispatch.hpp"

#include <string>
#include <vector>

namespace gridflex {

/// Checks one interval against the commitment, box, ramp and start-up
/// constraints. `off_minutes` is OFF_t: consecutive offline minutes ending at
/// the previous interval. Returns one message per violated constraint.
///
/// For storage the box applies to |p|; the ramp inequalities apply to the
/// signed power while the unit stays online and to |p| across a commitment
/// change.
std::vector<std::string> check_transition(const ResourceSpec& spec, double p_prev, int u_prev,
                                          int off_minutes, double p, int u, int dt_minutes);

struct AuditOptions {
    bool check_deficit_bounds = false;   // day-ahead trajectories only
    double balance_tolerance = 1e-9;     // fraction of rated power
    double soc_tolerance = 1e-9;         // fraction of energy capacity
};

struct AuditReport {
    std::size_t steps_checked = 0;
    std::vector<std::string> violations;
    bool ok() const { return violations.empty(); }
};

/// Replays the whole trajectory from its initial state, including the OFF
/// recursion OFF_t = (1 - u_{t-1}) (OFF_{t-1} + dt).
AuditReport audit_trajectory(const ResourceSpec& spec, const Trajectory& trajectory,
                             const AuditOptions& options = {});

struct OptimalityReport {
    std::size_t steps_checked = 0;
    std::size_t points_evaluated = 0;
    double worst_gap = 0.0; // largest (chosen - best grid) offset^2, MW^2
    std::vector<std::string> violations;
    bool ok() const { return violations.empty(); }
};

/// Grid search over every feasible power of every interval of a real-time
/// trajectory at `resolution` x rated power. Fails an interval if some grid
/// point beats the chosen deficit^2 by more than `tolerance` x rated^2.
OptimalityReport audit_realtime_optimality(const ResourceSpec& spec, const Trajectory& trajectory,
                                           double resolution = 1e-6, double tolerance = 1e-9,
                                           Execution execution = Execution::Parallel);

} // namespace gridflex
