#include "gridflex/realtime.hpp"

#include "gridflex/error.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/core.h>

namespace gridflex {

namespace {

void push_if_nonempty(std::vector<PowerInterval>& out, PowerInterval iv) {
    if (!iv.empty()) out.push_back(iv);
}

PowerInterval intersect(PowerInterval a, double lo, double hi) {
    return {std::max(a.lo, lo), std::min(a.hi, hi)};
}

// Ramp window endpoints pulled inward until the rounded differences satisfy
// the ramp inequalities exactly.
double ramp_upper(double prev, double step) {
    double hi = prev + step;
    while (hi - prev > step) hi = std::nextafter(hi, -HUGE_VAL);
    return hi;
}

double ramp_lower(double prev, double step) {
    double lo = prev - step;
    while (prev - lo > step) lo = std::nextafter(lo, HUGE_VAL);
    return lo;
}

} // namespace

FeasibleSet feasible_power_set(const ResourceSpec& spec, const DispatchState& state,
                               int dt_minutes, const std::optional<PowerLimits>& soc_limits) {
    FeasibleSet fs;
    const double step = dt_minutes * spec.ramp;
    const bool storage = spec.is_storage();
    const double prev_mag = storage ? std::abs(state.p_prev) : state.p_prev;

    std::vector<PowerInterval> on;
    if (state.u_prev == 1) {
        const double lo = ramp_lower(state.p_prev, step);
        const double hi = ramp_upper(state.p_prev, step);
        if (storage) {
            push_if_nonempty(on, intersect({-spec.p_max, -spec.p_min}, lo, hi));
            if (spec.p_min == 0.0 && !on.empty()) {
                // The two branches touch at 0; merge them.
                PowerInterval pos = intersect({0.0, spec.p_max}, lo, hi);
                if (!pos.empty()) on.back().hi = pos.hi;
            } else {
                push_if_nonempty(on, intersect({spec.p_min, spec.p_max}, lo, hi));
            }
        } else {
            push_if_nonempty(on, intersect({spec.p_min, spec.p_max}, lo, hi));
        }
        // Shut-down: P_{t-1} <= P_min and P_min - dt*r <= P_{t-1}.
        fs.off_allowed = prev_mag <= spec.p_min && prev_mag >= spec.p_min - step;
    } else {
        fs.off_allowed = true;
        if (state.off_count >= spec.startup_minutes) {
            if (storage && spec.p_min > 0.0) on.push_back({-spec.p_min, -spec.p_min});
            on.push_back({spec.p_min, spec.p_min});
        }
    }

    if (soc_limits) {
        // A wind-down admitted at t-1 puts the ramp boundary exactly on the
        // SoC limit at t; keep that endpoint when rounding pushes it a few
        // ulps outside.
        const double margin = 1e-12 * spec.p_max;
        for (auto iv : on) {
            PowerInterval cut = intersect(iv, soc_limits->lo, soc_limits->hi);
            if (cut.empty()) {
                if (iv.lo > soc_limits->hi && iv.lo <= soc_limits->hi + margin) {
                    cut = {iv.lo, iv.lo};
                } else if (iv.hi < soc_limits->lo && iv.hi >= soc_limits->lo - margin) {
                    cut = {iv.hi, iv.hi};
                }
            }
            push_if_nonempty(fs.on, cut);
        }
    } else {
        fs.on = std::move(on);
    }
    return fs;
}

StepResult step_dispatch(const ResourceSpec& spec, const DispatchState& state, double baseline_mw,
                         double net_mw, int dt_minutes,
                         const std::optional<PowerLimits>& soc_limits) {
    const FeasibleSet fs = feasible_power_set(spec, state, dt_minutes, soc_limits);
    const double target = target_power(spec.role, baseline_mw, net_mw);

    bool have = false;
    StepResult best;
    double best_cost = 0.0;
    for (const auto& iv : fs.on) {
        double p = std::clamp(target, iv.lo, iv.hi);
        double offset = balance_offset(spec.role, p, baseline_mw, net_mw);
        double cost = offset * offset;
        if (!have || cost < best_cost || (cost == best_cost && std::abs(p) < std::abs(best.p))) {
            have = true;
            best = {p, 1, offset, 0.0};
            best_cost = cost;
        }
    }
    if (fs.off_allowed) {
        double offset = balance_offset(spec.role, 0.0, baseline_mw, net_mw);
        double cost = offset * offset;
        if (!have || cost < best_cost) {
            have = true;
            best = {0.0, 0, offset, 0.0};
            best_cost = cost;
        }
    }
    if (!have) {
        throw InfeasibleError(fmt::format("'{}' has no feasible power at interval {}", spec.name,
                                          state.t));
    }
    best.offset_pu = best.offset / spec.rated_power();
    return best;
}

Trajectory run_realtime(const ResourceSpec& spec, const NetLoadProfile& profile,
                        const RealtimeConfig& config) {
    require_valid(spec);
    require_valid(profile);
    if (config.soc_enforced && !spec.is_storage()) {
        throw ValidationError(fmt::format("SoC enforcement requested for non-storage '{}'", spec.name));
    }
    const double rated = spec.rated_power();
    const int dt = profile.dt_minutes;

    Trajectory tr;
    tr.resource = spec.name;
    tr.role = spec.role;
    tr.rated = rated;
    tr.dt_minutes = dt;
    tr.net_pu = profile.values;
    tr.baseline = make_baseline(spec, config.baseline_policy, profile.steps(), config.baseline_series);
    tr.initial = config.initial ? *config.initial
                                : initial_state(spec, tr.baseline, config.initial_soc_fraction);
    tr.soc_enforced = config.soc_enforced;
    tr.solver = "realtime";
    tr.steps.reserve(profile.steps());

    DispatchState state = tr.initial;
    for (std::size_t t = 0; t < profile.steps(); ++t) {
        const double net_mw = profile.values[t] * rated;
        const double base = baseline_at(tr.baseline, t);
        std::optional<PowerLimits> limits;
        if (config.soc_enforced) limits = soc_dispatch_limits(state.soc, spec, dt);
        StepResult r = step_dispatch(spec, state, base, net_mw, dt, limits);
        tr.objective += r.offset * r.offset;
        tr.steps.push_back(r);
        state = advance(spec, state, r, dt, config.soc_enforced);
        if (config.soc_enforced) tr.soc.push_back(state.soc);
    }
    return tr;
}

} // namespace gridflex
