#include "gridflex/dispatch.hpp"

#include "gridflex/error.hpp"
#include "gridflex/storage.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/core.h>

namespace gridflex {

std::string_view to_string(BaselinePolicy policy) {
    switch (policy) {
    case BaselinePolicy::Auto: return "auto";
    case BaselinePolicy::Midpoint: return "midpoint";
    case BaselinePolicy::Min: return "min";
    case BaselinePolicy::Max: return "max";
    case BaselinePolicy::Series: return "file";
    }
    return "unknown";
}

BaselinePolicy parse_baseline_policy(std::string_view text) {
    if (text == "auto") return BaselinePolicy::Auto;
    if (text == "midpoint") return BaselinePolicy::Midpoint;
    if (text == "min") return BaselinePolicy::Min;
    if (text == "max") return BaselinePolicy::Max;
    if (text == "file" || text == "series") return BaselinePolicy::Series;
    throw ValidationError(
        fmt::format("unknown baseline policy '{}' (expected auto, midpoint, min, max or file)", text));
}

BaselinePolicy resolve_policy(const ResourceSpec& spec, BaselinePolicy policy) {
    if (policy != BaselinePolicy::Auto) return policy;
    return spec.variable_renewable ? BaselinePolicy::Max : BaselinePolicy::Midpoint;
}

Baseline make_baseline(const ResourceSpec& spec, BaselinePolicy policy, std::size_t steps,
                       std::span<const double> series) {
    if (spec.is_storage()) return {};
    policy = resolve_policy(spec, policy);
    switch (policy) {
    case BaselinePolicy::Midpoint: return Baseline(steps, 0.5 * (spec.p_min + spec.p_max));
    case BaselinePolicy::Min: return Baseline(steps, spec.p_min);
    case BaselinePolicy::Max: return Baseline(steps, spec.p_max);
    case BaselinePolicy::Series: {
        if (series.size() != steps && series.size() != 1) {
            throw ValidationError(fmt::format(
                "baseline series has {} values, profile has {} steps", series.size(), steps));
        }
        Baseline b(steps);
        for (std::size_t t = 0; t < steps; ++t) {
            double v = series.size() == 1 ? series[0] : series[t];
            if (!std::isfinite(v) || v < spec.p_min || v > spec.p_max) {
                throw ValidationError(fmt::format(
                    "baseline value {} at step {} outside [{}, {}] MW", v, t, spec.p_min, spec.p_max));
            }
            b[t] = v;
        }
        return b;
    }
    case BaselinePolicy::Auto: break;
    }
    throw ValidationError("unresolved baseline policy");
}

std::vector<double> Trajectory::offsets_pu() const {
    std::vector<double> out;
    out.reserve(steps.size());
    for (const auto& s : steps) out.push_back(s.offset_pu);
    return out;
}

double baseline_at(const Baseline& baseline, std::size_t t) {
    return baseline.empty() ? 0.0 : baseline[t];
}

double target_power(ResourceRole role, double baseline, double net_mw) {
    switch (role) {
    case ResourceRole::Generator: return baseline + net_mw;
    case ResourceRole::Load: return baseline - net_mw;
    case ResourceRole::Storage: return net_mw;
    }
    return 0.0;
}

double balance_offset(ResourceRole role, double p, double baseline, double net_mw) {
    switch (role) {
    case ResourceRole::Generator: return baseline + net_mw - p;
    case ResourceRole::Load: return p + net_mw - baseline;
    case ResourceRole::Storage: return net_mw - p;
    }
    return 0.0;
}

double balance_residual(ResourceRole role, double p, double offset, double baseline,
                        double net_mw) {
    switch (role) {
    case ResourceRole::Generator: return std::abs(p - (baseline + net_mw - offset));
    case ResourceRole::Load: return std::abs(baseline - (p + net_mw - offset));
    case ResourceRole::Storage: return std::abs(p - (net_mw - offset));
    }
    return 0.0;
}

DispatchState initial_state(const ResourceSpec& spec, const Baseline& baseline,
                            double initial_soc_fraction) {
    DispatchState s;
    s.t = 0;
    if (spec.is_storage()) {
        s.u_prev = 0;
        s.p_prev = 0.0;
        s.off_count = spec.startup_minutes;
        s.soc = initial_soc_fraction * spec.storage->energy_cap;
    } else {
        s.u_prev = 1;
        s.p_prev = baseline.empty() ? 0.5 * (spec.p_min + spec.p_max) : baseline.front();
        s.off_count = 0;
    }
    return s;
}

DispatchState advance(const ResourceSpec& spec, const DispatchState& state,
                      const StepResult& step, int dt_minutes, bool track_soc) {
    DispatchState next = state;
    next.t = state.t + 1;
    if (step.u == 1) {
        next.p_prev = step.p;
        next.u_prev = 1;
        next.off_count = 0;
    } else {
        next.p_prev = 0.0;
        next.u_prev = 0;
        next.off_count = (state.u_prev == 0 ? state.off_count : 0) + dt_minutes;
    }
    if (track_soc && spec.is_storage()) {
        double soc = apply_soc(state.soc, step.p, dt_minutes, spec);
        next.soc = std::clamp(soc, 0.0, spec.storage->energy_cap);
    }
    return next;
}

} // namespace gridflex
