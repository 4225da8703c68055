#pragma once

// Types shared by the real-time and day-ahead dispatchers.

#include "gridflex/catalog.hpp"
#include "gridflex/scenario.hpp"

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace gridflex {

/// Rolling solver state at the start of interval t.
struct DispatchState {
    int t = 0;
    double p_prev = 0.0; // MW
    int u_prev = 1;      // commitment status of the previous interval
    int off_count = 0;   // consecutive offline minutes ending at t-1
    double soc = 0.0;    // MWh, storage only
};

/// How the scheduled counterpart power is chosen: P^L for generators (the
/// load they were already serving), P^GEN for loads. Storage has none.
enum class BaselinePolicy { Auto, Midpoint, Min, Max, Series };

std::string_view to_string(BaselinePolicy policy);
BaselinePolicy parse_baseline_policy(std::string_view text);

/// Per-interval baseline in MW; empty for storage.
using Baseline = std::vector<double>;

/// Auto resolves to Max for variable renewables (they can only curtail) and
/// to Midpoint otherwise. Series values must lie in [p_min, p_max]; a
/// single-value series is held constant.
Baseline make_baseline(const ResourceSpec& spec, BaselinePolicy policy, std::size_t steps,
                       std::span<const double> series = {});

BaselinePolicy resolve_policy(const ResourceSpec& spec, BaselinePolicy policy);

/// One dispatched interval.
struct StepResult {
    double p = 0.0;      // MW; storage is signed, positive discharging
    int u = 0;           // commitment status
    double offset = 0.0; // deficit P^offset, MW
    double offset_pu = 0.0;
};

struct Trajectory {
    std::string resource;
    ResourceRole role = ResourceRole::Generator;
    double rated = 0.0;
    int dt_minutes = 1;
    std::vector<double> net_pu;
    Baseline baseline;
    DispatchState initial;
    std::vector<StepResult> steps;
    std::vector<double> soc; // MWh after each interval; empty when not tracked
    bool soc_enforced = false;
    double objective = 0.0;  // sum of offset^2 (MW^2)
    bool feasible = true;
    std::string solver;

    std::vector<double> offsets_pu() const;
};

double baseline_at(const Baseline& baseline, std::size_t t);

/// Power that zeroes the deficit: baseline + net (generator), baseline - net
/// (load), net (storage). All MW.
double target_power(ResourceRole role, double baseline, double net_mw);

/// Deficit from the role's balance equation:
///   generator: p = baseline + net - offset
///   load:      baseline = p + net - offset
///   storage:   p = net - offset
double balance_offset(ResourceRole role, double p, double baseline, double net_mw);

/// |lhs - rhs| of the balance equation for given (p, offset).
double balance_residual(ResourceRole role, double p, double offset, double baseline,
                        double net_mw);

/// Default initial state: generators and loads online at their first
/// baseline value; storage offline with the start-up time already served.
/// SoC starts at `initial_soc_fraction` of capacity.
DispatchState initial_state(const ResourceSpec& spec, const Baseline& baseline,
                            double initial_soc_fraction = 0.5);

/// Returns the state after dispatching `step`; tracks OFF minutes and, when
/// `track_soc`, integrates SoC (clamped against round-off).
DispatchState advance(const ResourceSpec& spec, const DispatchState& state,
                      const StepResult& step, int dt_minutes, bool track_soc);

} // namespace gridflex
