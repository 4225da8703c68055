#pragma once

// Per-interval deficit minimisation: each interval is solved on its own,
// with no knowledge of later net load.

#include "gridflex/dispatch.hpp"
#include "gridflex/storage.hpp"

#include <optional>
#include <vector>

namespace gridflex {

struct PowerInterval {
    double lo = 0.0;
    double hi = 0.0;
    bool empty() const { return lo > hi; }
};

/// Powers reachable in the next interval from `state`.
///
/// Online generators and loads may move by dt*r inside [p_min, p_max]. A unit
/// can only shut down from p_prev <= p_min and only start up at exactly
/// p_min, once it has been offline for at least its start-up time: that is
/// what the pair of ramp inequalities
///     P_t - P_{t-1} <= dt*r*u_{t-1} + P_min*(u_t - u_{t-1})
///     P_{t-1} - P_t <= dt*r*u_t     + P_min*(u_{t-1} - u_t)
/// admits at a commitment change.
///
/// Storage power is signed; online it lives in [-p_max, -p_min] or
/// [p_min, p_max], the ramp applies to the signed value, and the start-up and
/// shut-down rules apply to the magnitude.
struct FeasibleSet {
    bool off_allowed = false;
    std::vector<PowerInterval> on; // non-empty, ascending
};

FeasibleSet feasible_power_set(const ResourceSpec& spec, const DispatchState& state,
                               int dt_minutes, const std::optional<PowerLimits>& soc_limits = {});

/// Projects the zero-deficit target onto the feasible set. Staying online
/// wins exact ties against shutting down; among online powers with equal
/// deficit the smaller magnitude wins.
StepResult step_dispatch(const ResourceSpec& spec, const DispatchState& state, double baseline_mw,
                         double net_mw, int dt_minutes,
                         const std::optional<PowerLimits>& soc_limits = {});

struct RealtimeConfig {
    BaselinePolicy baseline_policy = BaselinePolicy::Auto;
    std::vector<double> baseline_series;
    bool soc_enforced = false;
    double initial_soc_fraction = 0.5;
    std::optional<DispatchState> initial; // overrides the default initial state
};

/// Runs step_dispatch over the whole profile, threading the state forward.
Trajectory run_realtime(const ResourceSpec& spec, const NetLoadProfile& profile,
                        const RealtimeConfig& config = {});

} // namespace gridflex
