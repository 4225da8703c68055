#include "gridflex/audit.hpp"

#include "gridflex/storage.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/core.h>

namespace gridflex {

std::vector<std::string> check_transition(const ResourceSpec& spec, double p_prev, int u_prev,
                                          int off_minutes, double p, int u, int dt_minutes) {
    std::vector<std::string> v;
    if (u != 0 && u != 1) {
        v.push_back(fmt::format("status u={} is not binary", u));
        return v;
    }
    const bool storage = spec.is_storage();
    const double mag = storage ? std::abs(p) : p;
    if (!(spec.p_min * u <= mag && mag <= spec.p_max * u)) {
        v.push_back(fmt::format("box: P_min*u <= {} <= P_max*u violated (u={}, P=[{}, {}])", p, u,
                                spec.p_min, spec.p_max));
    }
    const double step = dt_minutes * spec.ramp;
    const bool signed_ramp = !storage || (u_prev == 1 && u == 1);
    const double q_prev = signed_ramp ? p_prev : std::abs(p_prev);
    const double q = signed_ramp ? p : std::abs(p);
    if (!(q - q_prev <= step * u_prev + spec.p_min * (u - u_prev))) {
        v.push_back(fmt::format("ramp-up: P_t - P_(t-1) = {} exceeds {}", q - q_prev,
                                step * u_prev + spec.p_min * (u - u_prev)));
    }
    if (!(q_prev - q <= step * u + spec.p_min * (u_prev - u))) {
        v.push_back(fmt::format("ramp-down: P_(t-1) - P_t = {} exceeds {}", q_prev - q,
                                step * u + spec.p_min * (u_prev - u)));
    }
    if (spec.startup_minutes > 0) {
        const double gate = static_cast<double>(off_minutes) / spec.startup_minutes;
        if (!(u - u_prev <= gate)) {
            v.push_back(fmt::format("start-up: restarted after {} offline minutes, needs {}",
                                    off_minutes, spec.startup_minutes));
        }
    }
    return v;
}

AuditReport audit_trajectory(const ResourceSpec& spec, const Trajectory& tr,
                             const AuditOptions& options) {
    AuditReport rep;
    const double rated = spec.rated_power();
    const double tol = options.balance_tolerance * rated;
    const int dt = tr.dt_minutes;
    auto fail = [&](std::size_t t, const std::string& what) {
        rep.violations.push_back(fmt::format("{} step {}: {}", tr.resource, t, what));
    };
    if (tr.steps.size() != tr.net_pu.size()) {
        rep.violations.push_back(fmt::format("{}: {} steps for {} net-load values", tr.resource,
                                             tr.steps.size(), tr.net_pu.size()));
        return rep;
    }

    double p_prev = tr.initial.p_prev;
    int u_prev = tr.initial.u_prev;
    int off = u_prev == 1 ? 0 : tr.initial.off_count; // OFF_t
    double soc_prev = tr.initial.soc;
    for (std::size_t t = 0; t < tr.steps.size(); ++t) {
        const StepResult& s = tr.steps[t];
        for (const auto& msg : check_transition(spec, p_prev, u_prev, off, s.p, s.u, dt)) {
            fail(t, msg);
        }
        if (s.u == 0 && s.p != 0.0) fail(t, fmt::format("offline with P={}", s.p));

        const double net = tr.net_pu[t] * rated;
        const double base = baseline_at(tr.baseline, t);
        const double residual = balance_residual(spec.role, s.p, s.offset, base, net);
        if (!(residual <= tol)) fail(t, fmt::format("balance residual {} MW", residual));
        if (!(std::abs(s.offset_pu * rated - s.offset) <= tol)) {
            fail(t, fmt::format("offset_pu {} inconsistent with offset {} MW", s.offset_pu, s.offset));
        }
        if (options.check_deficit_bounds) {
            const DeficitBounds b = deficit_bounds(spec.role, base, net);
            if (!(s.offset >= b.lo - tol && s.offset <= b.hi + tol)) {
                fail(t, fmt::format("deficit {} outside [{}, {}]", s.offset, b.lo, b.hi));
            }
        }
        if (!tr.soc.empty()) {
            const double cap = spec.storage->energy_cap;
            const double stol = options.soc_tolerance * cap;
            const double soc = tr.soc[t];
            if (!(soc >= -stol && soc <= cap + stol)) {
                fail(t, fmt::format("SoC {} outside [0, {}]", soc, cap));
            }
            if (tr.solver == "realtime") {
                const double expect = apply_soc(soc_prev, s.p, dt, spec);
                if (!(std::abs(expect - soc) <= stol)) {
                    fail(t, fmt::format("SoC {} does not follow dynamics (expected {})", soc, expect));
                }
            }
            soc_prev = soc;
        }
        // OFF_{t+1} = (1 - u_t) (OFF_t + dt)
        off = (1 - s.u) * (off + dt);
        p_prev = s.p;
        u_prev = s.u;
        ++rep.steps_checked;
    }
    return rep;
}

namespace {

struct Segment {
    double lo;
    double hi;
};

// min over k of (sign*p_k + c)^2 with p_k = lo + k*h for k < n, plus p = hi.
double grid_min(const Segment& seg, double h, double sign, double c, Execution execution,
                std::size_t& points) {
    const double width = seg.hi - seg.lo;
    const long n = width > 0.0 ? static_cast<long>(std::floor(width / h)) + 1 : 1;
    double best = std::numeric_limits<double>::infinity();
    if (execution == Execution::Parallel) {
#pragma omp parallel for simd reduction(min : best) schedule(static)
        for (long k = 0; k < n; ++k) {
            double p = std::min(seg.lo + static_cast<double>(k) * h, seg.hi);
            double o = sign * p + c;
            best = std::min(best, o * o);
        }
    } else {
        for (long k = 0; k < n; ++k) {
            double p = std::min(seg.lo + static_cast<double>(k) * h, seg.hi);
            double o = sign * p + c;
            best = std::min(best, o * o);
        }
    }
    double o = sign * seg.hi + c;
    best = std::min(best, o * o);
    points += static_cast<std::size_t>(n) + 1;
    return best;
}

// Online powers admitted by the ramp and box inequalities, derived directly
// from them for u_t = 1.
std::vector<Segment> online_segments(const ResourceSpec& spec, double p_prev, int u_prev,
                                     int off_minutes, int dt) {
    std::vector<Segment> segs;
    if (u_prev == 0 && spec.startup_minutes > 0 &&
        !(1.0 <= static_cast<double>(off_minutes) / spec.startup_minutes)) {
        return segs;
    }
    const double step = dt * spec.ramp;
    auto add = [&](double lo, double hi) {
        if (lo <= hi) segs.push_back({lo, hi});
    };
    if (!spec.is_storage()) {
        // q - p_prev <= step*u_prev + p_min*(1 - u_prev); p_prev - q <= step + p_min*(u_prev - 1)
        double hi = p_prev + (step * u_prev + spec.p_min * (1 - u_prev));
        double lo = p_prev - (step + spec.p_min * (u_prev - 1));
        add(std::max(lo, spec.p_min), std::min(hi, spec.p_max));
    } else if (u_prev == 1) {
        double lo = p_prev - step;
        double hi = p_prev + step;
        add(std::max(lo, -spec.p_max), std::min(hi, -spec.p_min));
        add(std::max(lo, spec.p_min), std::min(hi, spec.p_max));
    } else {
        // magnitude m: m <= p_min, -m <= step - p_min
        double m_hi = std::min(spec.p_min, spec.p_max);
        double m_lo = std::max(spec.p_min, -(step - spec.p_min));
        if (m_lo <= m_hi) {
            add(-m_hi, -m_lo);
            add(m_lo, m_hi);
        }
    }
    return segs;
}

} // namespace

OptimalityReport audit_realtime_optimality(const ResourceSpec& spec, const Trajectory& tr,
                                           double resolution, double tolerance,
                                           Execution execution) {
    OptimalityReport rep;
    const double rated = spec.rated_power();
    const double h = resolution * rated;
    const double tol = tolerance * rated * rated;
    const int dt = tr.dt_minutes;

    double p_prev = tr.initial.p_prev;
    int u_prev = tr.initial.u_prev;
    int off = u_prev == 1 ? 0 : tr.initial.off_count;
    double soc = tr.initial.soc;
    for (std::size_t t = 0; t < tr.steps.size(); ++t) {
        const StepResult& s = tr.steps[t];
        const double net = tr.net_pu[t] * rated;
        const double base = baseline_at(tr.baseline, t);
        double sign = -1.0;
        double c = 0.0;
        switch (spec.role) {
        case ResourceRole::Generator: c = base + net; break;
        case ResourceRole::Load: sign = 1.0; c = net - base; break;
        case ResourceRole::Storage: c = net; break;
        }

        auto segs = online_segments(spec, p_prev, u_prev, off, dt);
        if (tr.soc_enforced) {
            PowerLimits lim = soc_dispatch_limits(soc, spec, dt);
            for (auto& seg : segs) {
                seg.lo = std::max(seg.lo, lim.lo);
                seg.hi = std::min(seg.hi, lim.hi);
            }
            std::erase_if(segs, [](const Segment& g) { return g.lo > g.hi; });
        }
        double best = std::numeric_limits<double>::infinity();
        for (const auto& seg : segs) {
            best = std::min(best, grid_min(seg, h, sign, c, execution, rep.points_evaluated));
        }
        if (check_transition(spec, p_prev, u_prev, off, 0.0, 0, dt).empty()) {
            best = std::min(best, c * c);
            ++rep.points_evaluated;
        }
        const double chosen = s.offset * s.offset;
        const double gap = chosen - best;
        rep.worst_gap = std::max(rep.worst_gap, gap);
        if (gap > tol) {
            rep.violations.push_back(fmt::format(
                "{} step {}: chosen deficit^2 {} but grid point reaches {}", tr.resource, t,
                chosen, best));
        }
        off = (1 - s.u) * (off + dt);
        p_prev = s.p;
        u_prev = s.u;
        if (tr.soc_enforced && !tr.soc.empty()) soc = tr.soc[t];
        ++rep.steps_checked;
    }
    return rep;
}

} // namespace gridflex
