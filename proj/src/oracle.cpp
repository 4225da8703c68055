#include "gridflex/audit.hpp"
#include "gridflex/dayahead.hpp"
#include "gridflex/error.hpp"
#include "gridflex/storage.hpp"

#include <cmath>
#include <limits>

#include <fmt/core.h>

namespace gridflex {

namespace {

struct Enumerator {
    const ScheduleProblem& problem;
    const std::vector<double>& grid;
    const std::optional<SocGrid>& soc_grid;

    std::vector<StepResult> path;
    std::vector<double> soc_path;
    std::vector<StepResult> best_path;
    std::vector<double> best_soc;
    double best = std::numeric_limits<double>::infinity();

    void descend(std::size_t t, double p_prev, int u_prev, int off_minutes, double soc,
                 double partial) {
        const auto& spec = problem.spec;
        const int dt = problem.dt_minutes();
        if (t == problem.steps()) {
            if (partial < best) {
                best = partial;
                best_path = path;
                best_soc = soc_path;
            }
            return;
        }
        const double net = problem.profile.values[t] * spec.rated_power();
        const double base = baseline_at(problem.baseline, t);
        const DeficitBounds bounds = deficit_bounds(spec.role, base, net);
        // OFF_t = (1 - u_{t-1}) (OFF_{t-1} + dt), replayed without saturation.
        auto try_option = [&](double p, int u) {
            if (!check_transition(spec, p_prev, u_prev, off_minutes, p, u, dt).empty()) return;
            const double offset = balance_offset(spec.role, p, base, net);
            if (!bounds.contains(offset)) return;
            double next_soc = soc;
            if (soc_grid) {
                double s = apply_soc(soc, p, dt, spec);
                if (s < 0.0 || s > spec.storage->energy_cap) return;
                next_soc = soc_grid->value(soc_grid->snap(s));
            }
            const double total = partial + offset * offset;
            if (total > best) return;
            path.push_back({p, u, offset, offset / spec.rated_power()});
            soc_path.push_back(next_soc);
            const int next_off = u == 1 ? 0 : (u_prev == 0 ? off_minutes : 0) + dt;
            descend(t + 1, p, u, next_off, next_soc, total);
            path.pop_back();
            soc_path.pop_back();
        };
        for (double level : grid) try_option(level, 1);
        try_option(0.0, 0);
    }
};

} // namespace

Trajectory brute_force_oracle(const ScheduleProblem& problem) {
    validate(problem);
    if (problem.steps() > kOracleMaxSteps || problem.power_levels > kOracleMaxLevels) {
        throw ValidationError(fmt::format(
            "oracle instance too large: T={} (max {}), N={} (max {})", problem.steps(),
            kOracleMaxSteps, problem.power_levels, kOracleMaxLevels));
    }
    const auto& spec = problem.spec;
    const std::vector<double> grid = power_grid(spec, problem.power_levels);
    std::optional<SocGrid> soc_grid;
    if (problem.soc_enforced) soc_grid.emplace(spec, problem.soc_levels);

    Trajectory out;
    out.resource = spec.name;
    out.role = spec.role;
    out.rated = spec.rated_power();
    out.dt_minutes = problem.dt_minutes();
    out.net_pu = problem.profile.values;
    out.baseline = problem.baseline;
    out.initial = grid_initial_state(problem, grid);
    out.soc_enforced = problem.soc_enforced;
    out.solver = "brute-force";

    Enumerator e{problem, grid, soc_grid, {}, {}, {}, {}, std::numeric_limits<double>::infinity()};
    e.descend(0, out.initial.p_prev, out.initial.u_prev,
              out.initial.u_prev == 1 ? 0 : out.initial.off_count, out.initial.soc, 0.0);
    if (e.best_path.size() != problem.steps()) {
        out.feasible = false;
        out.objective = std::numeric_limits<double>::infinity();
        return out;
    }
    out.objective = e.best;
    out.steps = std::move(e.best_path);
    if (soc_grid) out.soc = std::move(e.best_soc);
    return out;
}

} // namespace gridflex
