#include "gridflex/campaign.hpp"

#include "gridflex/audit.hpp"
#include "gridflex/error.hpp"
#include "gridflex/realtime.hpp"

#include <cmath>
#include <random>

#include <fmt/core.h>

namespace gridflex {

namespace {

// Resolution of the real-time optimality audit inside the campaign. The full
// 1e-6 audit over the built-in scenarios lives in the acceptance suite.
constexpr double kCampaignAuditResolution = 1e-5;

class Draw {
public:
    explicit Draw(std::uint64_t seed) : rng_(seed) {}

    double uniform(double lo, double hi) {
        const double u = static_cast<double>(rng_() >> 11) * 0x1.0p-53;
        return lo + (hi - lo) * u;
    }
    int integer(int lo, int hi) { // inclusive
        const auto span = static_cast<std::uint64_t>(hi - lo + 1);
        return lo + static_cast<int>(rng_() % span);
    }
    bool chance(double p) { return uniform(0.0, 1.0) < p; }

private:
    std::mt19937_64 rng_;
};

std::uint64_t instance_seed(std::uint64_t seed, int index) {
    // splitmix64 of (seed, index) so instances are independent of each other.
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (static_cast<std::uint64_t>(index) + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

bool same_steps(const Trajectory& a, const Trajectory& b) {
    if (a.feasible != b.feasible || a.steps.size() != b.steps.size()) return false;
    for (std::size_t i = 0; i < a.steps.size(); ++i) {
        if (a.steps[i].p != b.steps[i].p || a.steps[i].u != b.steps[i].u) return false;
    }
    return a.objective == b.objective || (std::isinf(a.objective) && std::isinf(b.objective));
}

} // namespace

void validate(const CampaignCaps& caps) {
    if (caps.instances < 1) throw ValidationError("instances must be >= 1");
    if (caps.max_steps < 1) {
        throw ValidationError(fmt::format("max_steps must be >= 1, got {}", caps.max_steps));
    }
    if (static_cast<std::size_t>(caps.max_steps) > kOracleMaxSteps) {
        throw ValidationError(fmt::format("max_steps={} exceeds the oracle limit {}",
                                          caps.max_steps, kOracleMaxSteps));
    }
    if (caps.max_levels < 2 || caps.max_levels > kOracleMaxLevels) {
        throw ValidationError(fmt::format("max_levels must lie in [2, {}], got {}",
                                          kOracleMaxLevels, caps.max_levels));
    }
    if (caps.max_startup < 0) {
        throw ValidationError(fmt::format("max_startup must be >= 0, got {}", caps.max_startup));
    }
}

ScheduleProblem random_instance(const CampaignCaps& caps, int index) {
    Draw d(instance_seed(caps.seed, index));

    ResourceSpec spec;
    spec.role = static_cast<ResourceRole>(index % 3);
    spec.name = fmt::format("random-{}", index);
    spec.p_max = d.uniform(0.5, 10.0);
    spec.p_min = d.chance(0.2) ? 0.0 : spec.p_max * d.uniform(0.0, 0.6);
    spec.ramp = spec.p_max * d.uniform(0.05, 1.2);
    spec.startup_minutes = d.integer(0, caps.max_startup);
    if (spec.is_storage()) {
        StorageParams sp;
        sp.charge_eff = d.uniform(0.7, 1.0);
        sp.discharge_eff = d.uniform(0.7, 1.0);
        sp.energy_cap = spec.p_max * d.uniform(0.02, 0.3);
        spec.storage = sp;
    }

    NetLoadProfile profile;
    profile.dt_minutes = d.integer(1, 2);
    const int steps = d.integer(1, caps.max_steps);
    for (int t = 0; t < steps; ++t) {
        profile.values.push_back(d.chance(0.2) ? 0.0 : d.uniform(-0.6, 0.6));
    }

    ScheduleProblem problem;
    problem.spec = spec;
    problem.profile = profile;
    problem.power_levels = d.integer(2, caps.max_levels);
    if (!spec.is_storage()) {
        if (d.chance(0.5)) {
            problem.baseline.assign(steps, d.uniform(spec.p_min, spec.p_max));
        } else {
            for (int t = 0; t < steps; ++t) {
                problem.baseline.push_back(d.uniform(spec.p_min, spec.p_max));
            }
        }
    } else if (d.chance(0.5)) {
        problem.soc_enforced = true;
        problem.soc_levels = d.integer(3, 6);
    }
    problem.initial_soc_fraction = d.uniform(0.0, 1.0);
    if (d.chance(0.5)) {
        DispatchState s;
        s.u_prev = d.chance(0.5) ? 1 : 0;
        if (s.u_prev == 1) {
            s.p_prev = d.uniform(spec.p_min, spec.p_max);
            if (spec.is_storage() && d.chance(0.5)) s.p_prev = -s.p_prev;
        } else {
            s.off_count = profile.dt_minutes * d.integer(0, 3);
        }
        if (spec.storage) s.soc = spec.storage->energy_cap * problem.initial_soc_fraction;
        problem.initial = s;
    }
    return problem;
}

nlohmann::json problem_to_json(const ScheduleProblem& problem) {
    const auto& s = problem.spec;
    nlohmann::json spec = {
        {"role", std::string(to_string(s.role))},
        {"name", s.name},
        {"p_min", s.p_min},
        {"p_max", s.p_max},
        {"ramp", s.ramp},
        {"startup_minutes", s.startup_minutes},
        {"variable_renewable", s.variable_renewable},
    };
    if (s.storage) {
        spec["charge_eff"] = s.storage->charge_eff;
        spec["discharge_eff"] = s.storage->discharge_eff;
        spec["energy_cap"] = s.storage->energy_cap;
    }
    nlohmann::json j = {
        {"spec", spec},
        {"dt_minutes", problem.profile.dt_minutes},
        {"net_pu", problem.profile.values},
        {"baseline", problem.baseline},
        {"power_levels", problem.power_levels},
        {"soc_enforced", problem.soc_enforced},
        {"soc_levels", problem.soc_levels},
        {"initial_soc_fraction", problem.initial_soc_fraction},
    };
    if (problem.initial) {
        const auto& i = *problem.initial;
        j["initial"] = {{"p_prev", i.p_prev},
                        {"u_prev", i.u_prev},
                        {"off_count", i.off_count},
                        {"soc", i.soc}};
    } else {
        j["initial"] = nullptr;
    }
    return j;
}

ScheduleProblem problem_from_json(const nlohmann::json& j) {
    try {
        ScheduleProblem p;
        const auto& s = j.at("spec");
        p.spec.role = parse_role(s.at("role").get<std::string>());
        p.spec.name = s.at("name").get<std::string>();
        p.spec.p_min = s.at("p_min").get<double>();
        p.spec.p_max = s.at("p_max").get<double>();
        p.spec.ramp = s.at("ramp").get<double>();
        p.spec.startup_minutes = s.at("startup_minutes").get<int>();
        p.spec.variable_renewable = s.value("variable_renewable", false);
        if (p.spec.is_storage()) {
            p.spec.storage = StorageParams{s.at("charge_eff").get<double>(),
                                           s.at("discharge_eff").get<double>(),
                                           s.at("energy_cap").get<double>()};
        }
        p.profile.dt_minutes = j.at("dt_minutes").get<int>();
        p.profile.values = j.at("net_pu").get<std::vector<double>>();
        p.baseline = j.at("baseline").get<std::vector<double>>();
        p.power_levels = j.at("power_levels").get<int>();
        p.soc_enforced = j.at("soc_enforced").get<bool>();
        p.soc_levels = j.at("soc_levels").get<int>();
        p.initial_soc_fraction = j.at("initial_soc_fraction").get<double>();
        if (j.contains("initial") && !j.at("initial").is_null()) {
            const auto& i = j.at("initial");
            DispatchState st;
            st.p_prev = i.at("p_prev").get<double>();
            st.u_prev = i.at("u_prev").get<int>();
            st.off_count = i.at("off_count").get<int>();
            st.soc = i.at("soc").get<double>();
            p.initial = st;
        }
        return p;
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(fmt::format("malformed instance: {}", e.what()));
    }
}

InstanceResult check_instance(const ScheduleProblem& problem, int index, bool inject_fault) {
    InstanceResult r;
    r.index = index;

    const Trajectory oracle = brute_force_oracle(problem);
    const Trajectory dp = solve_dayahead_dp(problem, {Execution::Parallel, inject_fault});
    const Trajectory dp_serial = solve_dayahead_dp(problem, {Execution::Serial, inject_fault});

    r.dp_objective = dp.objective;
    r.oracle_objective = oracle.objective;
    r.objectives_equal = dp.feasible == oracle.feasible &&
                         (!dp.feasible || dp.objective == oracle.objective);
    r.serial_parallel_equal = same_steps(dp, dp_serial);

    AuditOptions opts;
    opts.check_deficit_bounds = true;
    for (const Trajectory* tr : {&dp, &oracle}) {
        if (!tr->feasible) continue;
        for (auto& v : audit_trajectory(problem.spec, *tr, opts).violations) {
            r.audit_violations.push_back(fmt::format("{}: {}", tr->solver, v));
        }
    }

    RealtimeConfig rc;
    if (!problem.spec.is_storage()) {
        rc.baseline_policy = BaselinePolicy::Series;
        rc.baseline_series = problem.baseline;
    }
    rc.soc_enforced = problem.soc_enforced;
    rc.initial_soc_fraction = problem.initial_soc_fraction;
    rc.initial = problem.initial;
    try {
        const Trajectory rt = run_realtime(problem.spec, problem.profile, rc);
        for (auto& v : audit_trajectory(problem.spec, rt).violations) {
            r.audit_violations.push_back("realtime: " + v);
        }
        const auto opt = audit_realtime_optimality(problem.spec, rt, kCampaignAuditResolution);
        for (auto& v : opt.violations) r.audit_violations.push_back("realtime optimality: " + v);
    } catch (const InfeasibleError&) {
        // A random initial state may leave no SoC-admissible power at all.
    }
    return r;
}

CampaignReport run_campaign(const CampaignCaps& caps) {
    validate(caps);
    CampaignReport report;
    for (int i = 0; i < caps.instances; ++i) {
        const ScheduleProblem problem = random_instance(caps, i);
        InstanceResult r = check_instance(problem, i, caps.inject_fault);
        ++report.instances;
        if (!std::isfinite(r.oracle_objective)) ++report.infeasible;
        if (std::isfinite(r.dp_objective) && std::isfinite(r.oracle_objective)) {
            report.worst_discrepancy =
                std::max(report.worst_discrepancy, std::abs(r.dp_objective - r.oracle_objective));
        }
        if (!r.ok()) {
            ++report.mismatches;
            report.failing_instances.push_back(problem_to_json(problem));
            report.failures.push_back(std::move(r));
        }
    }
    return report;
}

} // namespace gridflex
