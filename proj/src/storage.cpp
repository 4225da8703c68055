#include "gridflex/storage.hpp"

#include "gridflex/error.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/core.h>

namespace gridflex {

namespace {

const StorageParams& storage_params(const ResourceSpec& spec) {
    if (!spec.is_storage() || !spec.storage) {
        throw ValidationError(fmt::format("'{}' is not a storage resource", spec.name));
    }
    return *spec.storage;
}

// Visits each power level of the fastest wind-down that starts at magnitude
// `p`: p, p - dt*r, ... clipped at p_min, then off. Each step is rounded the
// way the real-time ramp window rounds it (never more than dt*r), so the
// levels are exactly the ones the dispatcher can reach.
template <typename Visit>
void for_each_wind_down_level(double p, const ResourceSpec& spec, int dt_minutes, Visit visit) {
    const double step = dt_minutes * spec.ramp;
    double level = p;
    visit(level);
    while (level > spec.p_min) {
        double next = level - step;
        while (level - next > step) next = std::nextafter(next, HUGE_VAL);
        level = std::max(next, spec.p_min);
        visit(level);
    }
}

} // namespace

double apply_soc(double soc, double p, int dt_minutes, const ResourceSpec& spec) {
    const auto& st = storage_params(spec);
    const double hours = dt_minutes / 60.0;
    if (p > 0.0) return soc - p * hours / st.discharge_eff;
    if (p < 0.0) return soc + (-p) * hours * st.charge_eff;
    return soc;
}

PowerLimits soc_power_limits(double soc, const ResourceSpec& spec, int dt_minutes) {
    const auto& st = storage_params(spec);
    const double per_hour = 60.0 / dt_minutes;
    PowerLimits lim;
    lim.hi = std::min(spec.p_max, std::max(0.0, soc) * st.discharge_eff * per_hour);
    lim.lo = -std::min(spec.p_max, std::max(0.0, st.energy_cap - soc) * per_hour / st.charge_eff);
    return lim;
}

double wind_down_discharge_energy(double p, const ResourceSpec& spec, int dt_minutes) {
    const auto& st = storage_params(spec);
    const double hours = dt_minutes / 60.0;
    double energy = 0.0;
    for_each_wind_down_level(std::abs(p), spec, dt_minutes,
                             [&](double level) { energy += level * hours / st.discharge_eff; });
    return energy;
}

double wind_down_charge_energy(double p, const ResourceSpec& spec, int dt_minutes) {
    const auto& st = storage_params(spec);
    const double hours = dt_minutes / 60.0;
    double energy = 0.0;
    for_each_wind_down_level(std::abs(p), spec, dt_minutes,
                             [&](double level) { energy += level * hours * st.charge_eff; });
    return energy;
}

namespace {

// Largest magnitude in [p_min, p_max] whose wind-down cost fits `budget`;
// -1 when even p_min does not fit `budget + slack`. Cost is non-decreasing in
// the magnitude. The slack only decides whether p_min fits, so it is not
// spent again by the levels above p_min.
template <typename Cost>
double largest_admissible(const ResourceSpec& spec, double budget, double slack, Cost cost) {
    if (cost(spec.p_min) > budget + slack) return -1.0;
    if (cost(spec.p_max) <= budget) return spec.p_max;
    double lo = spec.p_min; // admissible
    double hi = spec.p_max; // not admissible
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (cost(mid) <= budget) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return lo;
}

} // namespace

PowerLimits soc_dispatch_limits(double soc, const ResourceSpec& spec, int dt_minutes) {
    const auto& st = storage_params(spec);
    PowerLimits one_step = soc_power_limits(soc, spec, dt_minutes);
    PowerLimits lim;
    // Round-off slack so that a wind-down admitted earlier can still finish
    // with its p_min interval.
    const double slack = 1e-12 * st.energy_cap;
    double dis = largest_admissible(spec, soc, slack, [&](double m) {
        return wind_down_discharge_energy(m, spec, dt_minutes);
    });
    double chg = largest_admissible(spec, st.energy_cap - soc, slack, [&](double m) {
        return wind_down_charge_energy(m, spec, dt_minutes);
    });
    lim.hi = dis < 0.0 ? 0.0 : std::min(dis, one_step.hi);
    lim.lo = chg < 0.0 ? 0.0 : std::max(-chg, one_step.lo);
    return lim;
}

SocGrid::SocGrid(const ResourceSpec& spec, int levels)
    : cap_(storage_params(spec).energy_cap), levels_(levels) {
    if (levels < 2) {
        throw ValidationError(fmt::format("SoC grid needs at least 2 levels, got {}", levels));
    }
}

double SocGrid::value(int index) const {
    if (index == levels_ - 1) return cap_;
    return cap_ * index / (levels_ - 1);
}

int SocGrid::snap(double soc) const {
    double pos = soc / cap_ * (levels_ - 1);
    int lower = static_cast<int>(std::floor(pos));
    lower = std::clamp(lower, 0, levels_ - 1);
    int upper = std::min(lower + 1, levels_ - 1);
    double dl = std::abs(soc - value(lower));
    double du = std::abs(value(upper) - soc);
    return du < dl ? upper : lower;
}

} // namespace gridflex
