#include "gridflex/dayahead.hpp"

#include "gridflex/error.hpp"
#include "gridflex/storage.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

#include <fmt/core.h>

namespace gridflex {

DeficitBounds deficit_bounds(ResourceRole role, double baseline_mw, double net_mw) {
    switch (role) {
    case ResourceRole::Generator: {
        double s = baseline_mw + net_mw;
        return s < 0.0 ? DeficitBounds{s, 0.0} : DeficitBounds{0.0, s};
    }
    case ResourceRole::Load: {
        double s = baseline_mw - net_mw;
        return s > 0.0 ? DeficitBounds{-s, 0.0} : DeficitBounds{0.0, -s};
    }
    case ResourceRole::Storage: {
        double s = net_mw;
        return s < 0.0 ? DeficitBounds{s, 0.0} : DeficitBounds{0.0, s};
    }
    }
    return {};
}

ScheduleProblem make_schedule_problem(const ResourceSpec& spec, const NetLoadProfile& profile,
                                      BaselinePolicy policy, int power_levels,
                                      std::span<const double> baseline_series) {
    ScheduleProblem p;
    p.spec = spec;
    p.profile = profile;
    p.baseline = make_baseline(spec, policy, profile.steps(), baseline_series);
    p.power_levels = power_levels;
    return p;
}

void validate(const ScheduleProblem& problem) {
    require_valid(problem.spec);
    require_valid(problem.profile);
    if (problem.power_levels < 2) {
        throw ValidationError(fmt::format(
            "power_levels={} cannot represent p_min..p_max distinctly (need at least 2)",
            problem.power_levels));
    }
    if (problem.spec.is_storage()) {
        if (!problem.baseline.empty()) throw ValidationError("storage takes no baseline");
    } else {
        if (problem.baseline.size() != problem.steps()) {
            throw ValidationError(fmt::format("baseline has {} values, profile has {} steps",
                                              problem.baseline.size(), problem.steps()));
        }
        for (double b : problem.baseline) {
            if (!(b >= problem.spec.p_min && b <= problem.spec.p_max)) {
                throw ValidationError(fmt::format("baseline value {} outside [{}, {}] MW", b,
                                                  problem.spec.p_min, problem.spec.p_max));
            }
        }
    }
    if (problem.soc_enforced) {
        if (!problem.spec.is_storage()) {
            throw ValidationError("SoC enforcement requires a storage resource");
        }
        if (problem.soc_levels < 2) {
            throw ValidationError(fmt::format("soc_levels must be >= 2, got {}", problem.soc_levels));
        }
    }
    if (problem.initial) {
        const auto& s = *problem.initial;
        if (s.u_prev != 0 && s.u_prev != 1) throw ValidationError("initial u must be 0 or 1");
        if (s.u_prev == 0 && s.off_count < problem.spec.startup_minutes &&
            s.off_count % problem.dt_minutes() != 0) {
            throw ValidationError(fmt::format(
                "initial off_count={} must be a multiple of dt={} or at least the start-up time",
                s.off_count, problem.dt_minutes()));
        }
    }
}

std::vector<double> power_grid(const ResourceSpec& spec, int levels) {
    std::vector<double> up(levels);
    const double span = spec.p_max - spec.p_min;
    for (int i = 0; i < levels; ++i) {
        up[i] = (i == levels - 1) ? spec.p_max : spec.p_min + span * i / (levels - 1);
    }
    up.erase(std::unique(up.begin(), up.end()), up.end());
    if (!spec.is_storage()) return up;

    std::vector<double> grid;
    grid.reserve(2 * up.size());
    for (auto it = up.rbegin(); it != up.rend(); ++it) {
        if (*it == 0.0) continue;
        grid.push_back(-*it);
    }
    grid.insert(grid.end(), up.begin(), up.end());
    return grid;
}

DispatchState grid_initial_state(const ScheduleProblem& problem, const std::vector<double>& grid) {
    DispatchState s = problem.initial ? *problem.initial
                                      : initial_state(problem.spec, problem.baseline,
                                                      problem.initial_soc_fraction);
    if (s.u_prev == 1) {
        std::size_t best = 0;
        for (std::size_t i = 1; i < grid.size(); ++i) {
            if (std::abs(grid[i] - s.p_prev) < std::abs(grid[best] - s.p_prev)) best = i;
        }
        s.p_prev = grid[best];
        s.off_count = 0;
    } else {
        s.p_prev = 0.0;
    }
    if (problem.soc_enforced) {
        SocGrid sg(problem.spec, problem.soc_levels);
        s.soc = sg.value(sg.snap(s.soc));
    }
    return s;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Grid layout of the DP state: online levels first, then offline counters
// c = 0..Kc where c counts offline intervals (saturating at Kc). Each state is
// paired with a SoC level when SoC is enforced.
struct Layout {
    std::vector<double> levels;
    int n_on = 0;
    int kc = 1;     // saturation count
    int k_gate = 0; // offline intervals needed before a start-up
    int soc_n = 1;

    int n_states() const { return n_on + kc + 1; }
    int off_index(int c) const { return n_on + c; }
    std::size_t cells() const { return static_cast<std::size_t>(n_states()) * soc_n; }
};

struct Transitions {
    std::vector<int> from_lo;       // ramp-feasible predecessor range, per online target
    std::vector<int> from_hi;
    std::vector<char> startup_ok;   // online level reachable from offline
    std::vector<char> shutdown_ok;  // online level from which an offline step is allowed
    std::vector<int> soc_next;      // [level * soc_n + k] -> next SoC index, -1 if out of range
};

Transitions build_transitions(const ScheduleProblem& problem, const Layout& lay,
                              const SocGrid* soc_grid) {
    const auto& spec = problem.spec;
    const double step = problem.dt_minutes() * spec.ramp;
    const bool storage = spec.is_storage();
    const auto& L = lay.levels;
    Transitions tr;
    tr.from_lo.resize(lay.n_on);
    tr.from_hi.resize(lay.n_on);
    tr.startup_ok.resize(lay.n_on);
    tr.shutdown_ok.resize(lay.n_on);
    for (int j = 0; j < lay.n_on; ++j) {
        // L is ascending, so L[j] - L[i] <= step holds on a suffix of i and
        // L[i] - L[j] <= step on a prefix.
        auto first = std::partition_point(L.begin(), L.end(),
                                          [&](double li) { return !(L[j] - li <= step); });
        auto last = std::partition_point(L.begin(), L.end(),
                                         [&](double li) { return li - L[j] <= step; });
        tr.from_lo[j] = static_cast<int>(first - L.begin());
        tr.from_hi[j] = static_cast<int>(last - L.begin()) - 1;
        const double mag = storage ? std::abs(L[j]) : L[j];
        tr.startup_ok[j] = mag <= spec.p_min && -mag <= step - spec.p_min;
        tr.shutdown_ok[j] = mag <= spec.p_min && -mag <= step - spec.p_min;
    }
    if (soc_grid) {
        tr.soc_next.resize(static_cast<std::size_t>(lay.n_on) * lay.soc_n);
        const double cap = spec.storage->energy_cap;
        for (int j = 0; j < lay.n_on; ++j) {
            for (int k = 0; k < lay.soc_n; ++k) {
                double next = apply_soc(soc_grid->value(k), L[j], problem.dt_minutes(), spec);
                tr.soc_next[static_cast<std::size_t>(j) * lay.soc_n + k] =
                    (next < 0.0 || next > cap) ? -1 : soc_grid->snap(next);
            }
        }
    }
    return tr;
}

struct Stage {
    const Layout& lay;
    const Transitions& tr;
    const std::vector<double>& cost_on; // per online level, kInf if outside deficit bounds
    double cost_off;
    const std::vector<double>& prev;
    std::vector<double>& cur;
    std::int32_t* parent;
    bool inject_fault;

    void relax(std::size_t cell, double value, std::int32_t from) const {
        if (value < cur[cell]) {
            cur[cell] = value;
            parent[cell] = from;
        }
    }

    // Pull update of every cell of online target j. Predecessors are visited
    // in ascending state index so ties keep the lowest index.
    void online_target(int j) const {
        const int m = lay.soc_n;
        const double c = cost_on[j];
        if (c == kInf) return;
        auto visit = [&](int pred) {
            for (int k = 0; k < m; ++k) {
                const std::size_t from = static_cast<std::size_t>(pred) * m + k;
                const double v = prev[from];
                if (v == kInf) continue;
                int k_next = k;
                if (!tr.soc_next.empty()) {
                    k_next = tr.soc_next[static_cast<std::size_t>(j) * m + k];
                    if (k_next < 0) continue;
                }
                relax(static_cast<std::size_t>(j) * m + k_next, v + c,
                      static_cast<std::int32_t>(from));
            }
        };
        for (int i = tr.from_lo[j]; i <= tr.from_hi[j]; ++i) {
            if (inject_fault && i == j) continue;
            visit(i);
        }
        if (tr.startup_ok[j]) {
            for (int cnt = lay.k_gate; cnt <= lay.kc; ++cnt) visit(lay.off_index(cnt));
        }
    }

    void offline_target(int cnt) const {
        if (cost_off == kInf || cnt == 0) return;
        const int m = lay.soc_n;
        const std::size_t target = static_cast<std::size_t>(lay.off_index(cnt)) * m;
        auto visit = [&](int pred) {
            for (int k = 0; k < m; ++k) {
                const std::size_t from = static_cast<std::size_t>(pred) * m + k;
                const double v = prev[from];
                if (v == kInf) continue;
                relax(target + k, v + cost_off, static_cast<std::int32_t>(from));
            }
        };
        if (cnt == 1) {
            for (int i = 0; i < lay.n_on; ++i) {
                if (tr.shutdown_ok[i]) visit(i);
            }
        }
        visit(lay.off_index(cnt - 1));
        if (cnt == lay.kc) visit(lay.off_index(cnt));
    }
};

} // namespace

Trajectory solve_dayahead_dp(const ScheduleProblem& problem, const DpOptions& options) {
    validate(problem);
    const auto& spec = problem.spec;
    const int dt = problem.dt_minutes();
    const std::size_t T = problem.steps();
    const double rated = spec.rated_power();

    Layout lay;
    lay.levels = power_grid(spec, problem.power_levels);
    lay.n_on = static_cast<int>(lay.levels.size());
    lay.k_gate = (spec.startup_minutes + dt - 1) / dt;
    lay.kc = std::max(1, lay.k_gate);
    std::optional<SocGrid> soc_grid;
    if (problem.soc_enforced) {
        soc_grid.emplace(spec, problem.soc_levels);
        lay.soc_n = problem.soc_levels;
    }
    const Transitions tr = build_transitions(problem, lay, soc_grid ? &*soc_grid : nullptr);

    Trajectory out;
    out.resource = spec.name;
    out.role = spec.role;
    out.rated = rated;
    out.dt_minutes = dt;
    out.net_pu = problem.profile.values;
    out.baseline = problem.baseline;
    out.initial = grid_initial_state(problem, lay.levels);
    out.soc_enforced = problem.soc_enforced;
    out.solver = "dayahead-dp";

    // Seed layer: only the initial state is reachable, at cost 0.
    std::vector<double> prev(lay.cells(), kInf);
    {
        int state = 0;
        if (out.initial.u_prev == 1) {
            state = static_cast<int>(std::find(lay.levels.begin(), lay.levels.end(),
                                               out.initial.p_prev) -
                                     lay.levels.begin());
        } else {
            int c = out.initial.off_count >= spec.startup_minutes
                        ? lay.kc
                        : std::min(lay.kc, out.initial.off_count / dt);
            state = lay.off_index(c);
        }
        int k = soc_grid ? soc_grid->snap(out.initial.soc) : 0;
        prev[static_cast<std::size_t>(state) * lay.soc_n + k] = 0.0;
    }

    std::vector<std::int32_t> parents(T * lay.cells(), -1);
    std::vector<double> cur(lay.cells());
    std::vector<double> cost_on(lay.n_on);

    for (std::size_t t = 0; t < T; ++t) {
        const double net = problem.profile.values[t] * rated;
        const double base = baseline_at(problem.baseline, t);
        const DeficitBounds bounds = deficit_bounds(spec.role, base, net);
        for (int j = 0; j < lay.n_on; ++j) {
            double off = balance_offset(spec.role, lay.levels[j], base, net);
            cost_on[j] = bounds.contains(off) ? off * off : kInf;
        }
        const double off0 = balance_offset(spec.role, 0.0, base, net);
        const double cost_off = bounds.contains(off0) ? off0 * off0 : kInf;

        std::fill(cur.begin(), cur.end(), kInf);
        Stage stage{lay, tr, cost_on, cost_off, prev, cur, parents.data() + t * lay.cells(),
                    options.inject_fault};
        if (options.execution == Execution::Parallel) {
#pragma omp parallel for schedule(dynamic, 8)
            for (int j = 0; j < lay.n_on; ++j) stage.online_target(j);
        } else {
            for (int j = 0; j < lay.n_on; ++j) stage.online_target(j);
        }
        for (int c = 0; c <= lay.kc; ++c) stage.offline_target(c);
        prev.swap(cur);
    }

    std::size_t best = 0;
    for (std::size_t i = 1; i < prev.size(); ++i) {
        if (prev[i] < prev[best]) best = i;
    }
    if (T == 0 || prev[best] == kInf) {
        out.feasible = false;
        out.objective = kInf;
        return out;
    }
    out.objective = prev[best];

    std::vector<std::size_t> cells(T);
    std::size_t cell = best;
    for (std::size_t t = T; t-- > 0;) {
        cells[t] = cell;
        cell = static_cast<std::size_t>(parents[t * lay.cells() + cell]);
    }
    out.steps.resize(T);
    if (soc_grid) out.soc.resize(T);
    for (std::size_t t = 0; t < T; ++t) {
        const int state = static_cast<int>(cells[t] / lay.soc_n);
        const int k = static_cast<int>(cells[t] % lay.soc_n);
        StepResult& s = out.steps[t];
        s.u = state < lay.n_on ? 1 : 0;
        s.p = s.u ? lay.levels[state] : 0.0;
        s.offset = balance_offset(spec.role, s.p, baseline_at(problem.baseline, t),
                                  problem.profile.values[t] * rated);
        s.offset_pu = s.offset / rated;
        if (soc_grid) out.soc[t] = soc_grid->value(k);
    }
    return out;
}

} // namespace gridflex
