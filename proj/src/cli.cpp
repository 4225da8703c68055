#include "gridflex/cli.hpp"

#include "gridflex/campaign.hpp"
#include "gridflex/catalog.hpp"
#include "gridflex/dayahead.hpp"
#include "gridflex/error.hpp"
#include "gridflex/metrics.hpp"
#include "gridflex/realtime.hpp"
#include "gridflex/scenario.hpp"
#include "csv_util.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <cstdlib>
#include <exception>
#include <fstream>
#include <optional>
#include <ostream>

#include <fmt/core.h>

namespace gridflex::cli {

namespace {

using nlohmann::json;

constexpr std::uint64_t kDefaultSeed = 42;

std::uint64_t default_seed() {
    const char* env = std::getenv("GRIDFLEX_SEED");
    if (env == nullptr || *env == '\0') return kDefaultSeed;
    try {
        std::size_t used = 0;
        const std::string text(env);
        const auto v = std::stoull(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        throw ValidationError(fmt::format("GRIDFLEX_SEED='{}' is not an unsigned integer", env));
    }
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ValidationError(fmt::format("cannot write '{}'", path));
    f << text;
    if (!f) throw ValidationError(fmt::format("error while writing '{}'", path));
}

enum class Mode { Auto, Realtime, DayAhead };

Mode parse_mode(const std::string& text) {
    if (text == "auto") return Mode::Auto;
    if (text == "realtime") return Mode::Realtime;
    if (text == "dayahead") return Mode::DayAhead;
    throw ValidationError(fmt::format("--mode: expected realtime, dayahead or auto, got '{}'", text));
}

const char* mode_name(Mode m) { return m == Mode::DayAhead ? "dayahead" : "realtime"; }

// Settings shared by `run` and `compare`.
struct SolveSettings {
    std::string mode = "auto";
    int dt = 0; // 0 picks the mode's default
    std::uint64_t seed = kDefaultSeed;
    std::string baseline = "auto";
    std::string baseline_file;
    bool soc = false;
    int levels = kDefaultPowerLevels;
    int soc_levels = kDefaultSocLevels;
    double initial_soc = 0.5;
};

struct ScenarioSource {
    std::optional<ScenarioKind> kind;
    std::string profile_path;
};

struct Resolved {
    Mode mode = Mode::Realtime;
    NetLoadProfile profile;
    std::string scenario_label;
};

Resolved resolve_scenario(const ScenarioSource& src, const SolveSettings& s) {
    Resolved r;
    Mode m = parse_mode(s.mode);
    if (m == Mode::Auto) {
        m = src.kind && *src.kind == ScenarioKind::PeakShaving ? Mode::DayAhead : Mode::Realtime;
    }
    r.mode = m;
    if (s.dt < 0) throw ValidationError(fmt::format("--dt: must be positive, got {}", s.dt));
    if (src.kind) {
        const int dt = s.dt > 0 ? s.dt : (m == Mode::DayAhead ? kDefaultDayAheadDt : 1);
        r.profile = make_scenario(*src.kind, dt, s.seed);
        r.scenario_label = std::string(to_string(*src.kind));
    } else {
        r.profile = load_profile_csv(src.profile_path);
        if (s.dt > 0 && s.dt != r.profile.dt_minutes) {
            throw ValidationError(fmt::format("--dt: {} does not match the profile spacing of {} min",
                                              s.dt, r.profile.dt_minutes));
        }
        r.scenario_label = "custom";
    }
    return r;
}

std::vector<double> baseline_series(const SolveSettings& s) {
    if (s.baseline_file.empty()) return {};
    return load_profile_csv(s.baseline_file).values;
}

BaselinePolicy baseline_policy(const SolveSettings& s) {
    if (!s.baseline_file.empty()) {
        if (s.baseline != "auto" && s.baseline != "file" && s.baseline != "series") {
            throw ValidationError("--baseline: --baseline-file needs --baseline file");
        }
        return BaselinePolicy::Series;
    }
    const BaselinePolicy p = parse_baseline_policy(s.baseline);
    if (p == BaselinePolicy::Series) {
        throw ValidationError("--baseline: 'file' needs --baseline-file");
    }
    return p;
}

Trajectory simulate(const ResourceSpec& spec, const Resolved& sc, const SolveSettings& s) {
    const BaselinePolicy policy = baseline_policy(s);
    const std::vector<double> series = baseline_series(s);
    if (s.soc && !spec.is_storage()) {
        throw ValidationError(fmt::format("--soc: '{}' is not a storage resource", spec.name));
    }
    if (!(s.initial_soc >= 0.0 && s.initial_soc <= 1.0)) {
        throw ValidationError(fmt::format("--initial-soc: must lie in [0, 1], got {}", s.initial_soc));
    }
    if (sc.mode == Mode::DayAhead) {
        ScheduleProblem p = make_schedule_problem(spec, sc.profile, policy, s.levels, series);
        p.soc_enforced = s.soc;
        p.soc_levels = s.soc_levels;
        p.initial_soc_fraction = s.initial_soc;
        Trajectory tr = solve_dayahead_dp(p);
        if (!tr.feasible) {
            throw InfeasibleError(fmt::format("no feasible day-ahead schedule for '{}' on {}",
                                              spec.name, sc.scenario_label));
        }
        return tr;
    }
    RealtimeConfig rc;
    rc.baseline_policy = policy;
    rc.baseline_series = series;
    rc.soc_enforced = s.soc;
    rc.initial_soc_fraction = s.initial_soc;
    return run_realtime(spec, sc.profile, rc);
}

json stats_json(const DeficitStats& st) {
    return {{"avg_abs", st.avg_abs},
            {"net_energy_signed", st.net_energy_signed},
            {"net_energy_abs", st.net_energy_abs},
            {"rms", st.rms}};
}

json config_json(const ResourceSpec& spec, const Resolved& sc, const SolveSettings& s,
                 const ScenarioSource& src) {
    json c = {
        {"scenario", sc.scenario_label},
        {"profile_file", src.profile_path.empty() ? json(nullptr) : json(src.profile_path)},
        {"dt_minutes", sc.profile.dt_minutes},
        {"steps", sc.profile.steps()},
        {"seed", s.seed},
        {"baseline_policy", std::string(to_string(resolve_policy(spec, baseline_policy(s))))},
        {"baseline_file", s.baseline_file.empty() ? json(nullptr) : json(s.baseline_file)},
        {"mode", mode_name(sc.mode)},
        {"soc_enforced", s.soc},
        {"initial_soc_fraction", s.initial_soc},
    };
    if (sc.mode == Mode::DayAhead) {
        c["power_levels"] = s.levels;
        if (s.soc) c["soc_levels"] = s.soc_levels;
    }
    return c;
}

void add_solve_options(CLI::App* cmd, SolveSettings& s) {
    cmd->add_option("--mode", s.mode, "realtime | dayahead | auto (dayahead for peak-shaving)")
        ->capture_default_str();
    cmd->add_option("--dt", s.dt, "Interval length in minutes (default 1 realtime, 15 dayahead)");
    cmd->add_option("--seed", s.seed, "Scenario seed (default: GRIDFLEX_SEED or 42)");
    cmd->add_option("--baseline", s.baseline, "auto | midpoint | min | max | file")
        ->capture_default_str();
    cmd->add_option("--baseline-file", s.baseline_file, "CSV baseline in MW (minute,baseline_MW)");
    cmd->add_flag("--soc", s.soc, "Enforce storage state of charge");
    cmd->add_option("--levels", s.levels, "Day-ahead power grid levels")->capture_default_str();
    cmd->add_option("--soc-levels", s.soc_levels, "Day-ahead SoC grid levels")->capture_default_str();
    cmd->add_option("--initial-soc", s.initial_soc, "Initial SoC as a fraction of capacity")
        ->capture_default_str();
}

ResourceSpec pick_resource(const std::string& name, const std::string& file) {
    if (file.empty()) {
        if (name.empty()) throw ValidationError("--resource: required");
        return find_resource(name);
    }
    const auto specs = load_catalog_file(file);
    if (name.empty()) {
        if (specs.size() != 1) {
            throw ValidationError(fmt::format(
                "--resource: '{}' holds {} resources, name one of them", file, specs.size()));
        }
        return specs.front();
    }
    return find_resource(specs, name);
}

ScenarioSource pick_scenario(const std::string& kind, const std::string& profile) {
    if (kind.empty() == profile.empty()) {
        throw ValidationError("--scenario / --profile: give exactly one");
    }
    ScenarioSource src;
    if (!kind.empty()) {
        const ScenarioKind k = parse_scenario_kind(kind);
        if (k == ScenarioKind::Custom) throw ValidationError("--scenario: use --profile for custom data");
        src.kind = k;
    } else {
        src.profile_path = profile;
    }
    return src;
}

// ---------------------------------------------------------------- run

struct RunArgs {
    std::string resource;
    std::string resource_file;
    std::string scenario;
    std::string profile;
    SolveSettings settings;
    std::string out_trajectory = "trajectory.csv";
    std::string out_stats = "stats.json";
};

int cmd_run(const RunArgs& a, std::ostream& out) {
    const ResourceSpec spec = pick_resource(a.resource, a.resource_file);
    const ScenarioSource src = pick_scenario(a.scenario, a.profile);
    const Resolved sc = resolve_scenario(src, a.settings);
    const Trajectory tr = simulate(spec, sc, a.settings);
    const DeficitStats st = compute_stats(tr.offsets_pu(), tr.dt_minutes);

    json j = stats_json(st);
    j["resource"] = spec.name;
    j["role"] = std::string(to_string(spec.role));
    j["rated_MW"] = spec.rated_power();
    j["solver"] = tr.solver;
    j["objective_MW2"] = tr.objective;
    j["horizon_hours"] = sc.profile.horizon_hours();
    j["config"] = config_json(spec, sc, a.settings, src);

    write_text(a.out_trajectory, trajectory_csv(tr));
    write_text(a.out_stats, j.dump(2) + "\n");

    out << fmt::format("{} on {} ({}, dt={} min, {} steps)\n", spec.name, sc.scenario_label,
                       tr.solver, tr.dt_minutes, tr.steps.size());
    out << fmt::format("  avg_abs={:.4g} p.u.  net_energy_abs={:.4g} p.u.h  "
                       "net_energy_signed={:.4g} p.u.h  rms={:.4g} p.u.\n",
                       st.avg_abs, st.net_energy_abs, st.net_energy_signed, st.rms);
    out << fmt::format("  wrote {} and {}\n", a.out_trajectory, a.out_stats);
    return kExitOk;
}

// ---------------------------------------------------------------- compare

struct CompareArgs {
    std::vector<std::string> resources;
    std::string group;
    std::string resource_file;
    std::vector<std::string> scenarios{"intermittency", "peak-shaving", "energy-reserve"};
    SolveSettings settings;
    std::string out_csv = "compare.csv";
    std::string out_txt = "compare.txt";
};

std::vector<ResourceSpec> compare_resources(const CompareArgs& a) {
    std::vector<ResourceSpec> pool =
        a.resource_file.empty() ? builtin_catalog() : load_catalog_file(a.resource_file);
    std::vector<ResourceSpec> out;
    if (!a.group.empty()) {
        if (!a.resources.empty()) throw ValidationError("--resources / --group: give only one");
        std::optional<ResourceRole> role;
        if (a.group == "generators") role = ResourceRole::Generator;
        else if (a.group == "loads") role = ResourceRole::Load;
        else if (a.group == "storage") role = ResourceRole::Storage;
        else if (a.group != "all") {
            throw ValidationError(fmt::format(
                "--group: expected generators, loads, storage or all, got '{}'", a.group));
        }
        for (const auto& s : pool) {
            if (!role || s.role == *role) out.push_back(s);
        }
    } else if (a.resources.empty() && !a.resource_file.empty()) {
        out = pool;
    } else {
        for (const auto& name : a.resources) out.push_back(find_resource(pool, name));
    }
    if (out.size() < 2) {
        throw ValidationError(fmt::format("--resources: compare needs at least 2 resources, got {}",
                                          out.size()));
    }
    return out;
}

int cmd_compare(const CompareArgs& a, std::ostream& out) {
    const std::vector<ResourceSpec> specs = compare_resources(a);
    if (a.scenarios.empty()) throw ValidationError("--scenarios: at least one scenario");
    std::vector<ScenarioSource> sources;
    std::vector<Resolved> resolved;
    for (const auto& k : a.scenarios) {
        sources.push_back(pick_scenario(k, ""));
        resolved.push_back(resolve_scenario(sources.back(), a.settings));
    }

    const std::size_t nr = specs.size();
    const std::size_t jobs = nr * resolved.size();
    std::vector<DeficitStats> stats(jobs);
    std::vector<std::exception_ptr> errors(jobs);
    const long long njobs = static_cast<long long>(jobs);
#pragma omp parallel for schedule(dynamic, 1)
    for (long long k = 0; k < njobs; ++k) {
        const std::size_t i = static_cast<std::size_t>(k);
        try {
            const Trajectory tr = simulate(specs[i % nr], resolved[i / nr], a.settings);
            stats[i] = compute_stats(tr.offsets_pu(), tr.dt_minutes);
        } catch (...) {
            errors[i] = std::current_exception();
        }
    }
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }

    std::string csv = "scenario,mode,dt_minutes,resource,avg_abs_pu,net_energy_abs_puh,"
                      "net_energy_signed_puh,rms_pu,rank\n";
    std::string txt;
    for (std::size_t s = 0; s < resolved.size(); ++s) {
        std::vector<RankedEntry> rows;
        for (std::size_t r = 0; r < nr; ++r) rows.push_back({specs[r].name, stats[s * nr + r]});
        const auto ranked = rank_resources(rows);
        for (const auto& row : rows) {
            std::size_t rank = 0;
            while (ranked[rank].name != row.name) ++rank;
            csv += fmt::format("{},{},{},{},{:.17g},{:.17g},{:.17g},{:.17g},{}\n",
                               resolved[s].scenario_label, mode_name(resolved[s].mode),
                               resolved[s].profile.dt_minutes, detail::quote_csv(row.name),
                               row.stats.avg_abs, row.stats.net_energy_abs,
                               row.stats.net_energy_signed, row.stats.rms, rank + 1);
        }
        txt += stats_table_text(fmt::format("{} ({}, dt={} min)", resolved[s].scenario_label,
                                            mode_name(resolved[s].mode),
                                            resolved[s].profile.dt_minutes),
                                rows);
        txt += "ranking by rms:";
        for (std::size_t i = 0; i < ranked.size(); ++i) {
            txt += fmt::format(" {}. {}", i + 1, ranked[i].name);
        }
        txt += "\n\n";
    }
    write_text(a.out_csv, csv);
    write_text(a.out_txt, txt);
    out << txt;
    return kExitOk;
}

// ---------------------------------------------------------------- oracle-check

struct OracleArgs {
    CampaignCaps caps;
    std::string replay;
    std::string out_report;
};

json failure_json(const InstanceResult& r, const json& instance) {
    auto num = [](double v) { return std::isfinite(v) ? json(v) : json(nullptr); };
    return {{"index", r.index},
            {"dp_objective", num(r.dp_objective)},
            {"oracle_objective", num(r.oracle_objective)},
            {"objectives_equal", r.objectives_equal},
            {"serial_parallel_equal", r.serial_parallel_equal},
            {"audit_violations", r.audit_violations},
            {"instance", instance}};
}

int cmd_oracle_check(const OracleArgs& a, std::ostream& out, std::ostream& err) {
    CampaignReport report;
    if (!a.replay.empty()) {
        json j;
        try {
            j = json::parse(detail::read_file(a.replay));
        } catch (const json::exception& e) {
            throw ValidationError(fmt::format("--replay: {}", e.what()));
        }
        if (j.contains("instance")) j = j.at("instance");
        const ScheduleProblem p = problem_from_json(j);
        InstanceResult r = check_instance(p, 0, a.caps.inject_fault);
        report.instances = 1;
        if (!std::isfinite(r.oracle_objective)) report.infeasible = 1;
        if (std::isfinite(r.dp_objective) && std::isfinite(r.oracle_objective)) {
            report.worst_discrepancy = std::abs(r.dp_objective - r.oracle_objective);
        }
        if (!r.ok()) {
            report.mismatches = 1;
            report.failing_instances.push_back(problem_to_json(p));
            report.failures.push_back(std::move(r));
        }
    } else {
        report = run_campaign(a.caps);
    }

    out << fmt::format("instances: {}\ninfeasible: {}\nmismatches: {}\nworst discrepancy: {:.17g}\n",
                       report.instances, report.infeasible, report.mismatches,
                       report.worst_discrepancy);
    json failures = json::array();
    for (std::size_t i = 0; i < report.failures.size(); ++i) {
        failures.push_back(failure_json(report.failures[i], report.failing_instances[i]));
    }
    if (!a.out_report.empty()) {
        json j = {{"instances", report.instances},
                  {"infeasible", report.infeasible},
                  {"mismatches", report.mismatches},
                  {"worst_discrepancy", report.worst_discrepancy},
                  {"seed", a.caps.seed},
                  {"max_steps", a.caps.max_steps},
                  {"max_levels", a.caps.max_levels},
                  {"max_startup", a.caps.max_startup},
                  {"inject_fault", a.caps.inject_fault},
                  {"failures", failures}};
        write_text(a.out_report, j.dump(2) + "\n");
    }
    if (!report.ok()) {
        err << fmt::format("oracle check failed on {} instance(s)\n", report.mismatches);
        for (const auto& f : failures) err << f.dump() << "\n";
        return kExitOracleMismatch;
    }
    out << "oracle check passed\n";
    return kExitOk;
}

} // namespace

std::string trajectory_csv(const Trajectory& tr) {
    std::string s = "minute,net_pu,power_MW,status,offset_MW,offset_pu,soc_MWh\n";
    const bool has_soc = tr.soc.size() == tr.steps.size() && !tr.soc.empty();
    for (std::size_t t = 0; t < tr.steps.size(); ++t) {
        const auto& st = tr.steps[t];
        s += fmt::format("{},{:.17g},{:.17g},{},{:.17g},{:.17g},", static_cast<long long>(t) * tr.dt_minutes,
                         tr.net_pu[t], st.p, st.u, st.offset, st.offset_pu);
        if (has_soc) s += fmt::format("{:.17g}", tr.soc[t]);
        s += "\n";
    }
    return s;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Flexibility assessment of grid resources: deficit minimisation under "
                 "ramping, start-up and storage constraints",
                 "gridflex"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "gridflex 1.0.0");

    std::uint64_t seed = kDefaultSeed;
    try {
        seed = default_seed();
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << "\n";
        return kExitValidation;
    }

    auto* catalog = app.add_subcommand("catalog", "Built-in resource catalog");
    catalog->require_subcommand(1);
    auto* catalog_list = catalog->add_subcommand("list", "Print the catalog as CSV");
    std::string catalog_out;
    catalog_list->add_option("--out", catalog_out, "Write to a file instead of stdout");

    auto* scenario = app.add_subcommand("scenario", "Net-load scenarios");
    scenario->require_subcommand(1);
    auto* emit = scenario->add_subcommand("emit", "Write a scenario profile as CSV");
    std::string emit_kind;
    int emit_dt = 1;
    std::uint64_t emit_seed = seed;
    std::string emit_out;
    emit->add_option("--kind", emit_kind, "intermittency | peak-shaving | energy-reserve")->required();
    emit->add_option("--dt", emit_dt, "Interval length in minutes")->capture_default_str();
    emit->add_option("--seed", emit_seed, "Seed (intermittency only)");
    emit->add_option("--out", emit_out, "Output file (default stdout)");

    RunArgs run_args;
    run_args.settings.seed = seed;
    auto* run = app.add_subcommand("run", "Dispatch one resource on one scenario");
    run->add_option("--resource", run_args.resource, "Resource name");
    run->add_option("--resource-file", run_args.resource_file, "Catalog CSV with custom resources");
    run->add_option("--scenario", run_args.scenario, "intermittency | peak-shaving | energy-reserve");
    run->add_option("--profile", run_args.profile, "Custom net-load CSV (minute,net_pu)");
    add_solve_options(run, run_args.settings);
    run->add_option("--out-trajectory", run_args.out_trajectory, "Trajectory CSV")
        ->capture_default_str();
    run->add_option("--out-stats", run_args.out_stats, "Stats JSON")->capture_default_str();

    CompareArgs cmp_args;
    cmp_args.settings.seed = seed;
    auto* cmp = app.add_subcommand("compare", "Rank several resources on the scenarios");
    cmp->add_option("--resources", cmp_args.resources, "Comma-separated resource names")
        ->delimiter(',');
    cmp->add_option("--group", cmp_args.group, "generators | loads | storage | all");
    cmp->add_option("--resource-file", cmp_args.resource_file, "Catalog CSV to draw resources from");
    cmp->add_option("--scenarios", cmp_args.scenarios, "Comma-separated scenario kinds")
        ->delimiter(',')
        ->capture_default_str();
    add_solve_options(cmp, cmp_args.settings);
    cmp->add_option("--out-csv", cmp_args.out_csv, "CSV report")->capture_default_str();
    cmp->add_option("--out-txt", cmp_args.out_txt, "Text report")->capture_default_str();

    OracleArgs oc;
    oc.caps.seed = seed;
    auto* oracle = app.add_subcommand("oracle-check", "Cross-check the day-ahead solver");
    oracle->add_option("--instances", oc.caps.instances)->capture_default_str();
    oracle->add_option("--max-steps", oc.caps.max_steps)->capture_default_str();
    oracle->add_option("--max-levels", oc.caps.max_levels)->capture_default_str();
    oracle->add_option("--max-startup", oc.caps.max_startup)->capture_default_str();
    oracle->add_option("--seed", oc.caps.seed, "Campaign seed");
    oracle->add_flag("--inject-fault", oc.caps.inject_fault, "Test hook: break one DP transition");
    oracle->add_option("--replay", oc.replay, "Re-run one serialized instance");
    oracle->add_option("--out", oc.out_report, "Write a JSON report");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitValidation;
    }

    try {
        if (*catalog_list) {
            const std::string csv = catalog_to_csv(builtin_catalog());
            if (catalog_out.empty()) out << csv;
            else write_text(catalog_out, csv);
            return kExitOk;
        }
        if (*emit) {
            const ScenarioKind k = parse_scenario_kind(emit_kind);
            if (k == ScenarioKind::Custom) throw ValidationError("--kind: not a built-in scenario");
            const std::string csv = profile_to_csv(make_scenario(k, emit_dt, emit_seed));
            if (emit_out.empty()) out << csv;
            else write_text(emit_out, csv);
            return kExitOk;
        }
        if (*run) return cmd_run(run_args, out);
        if (*cmp) return cmd_compare(cmp_args, out);
        if (*oracle) {
            validate(oc.caps);
            return cmd_oracle_check(oc, out, err);
        }
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const InfeasibleError& e) {
        err << "infeasible: " << e.what() << "\n";
        return kExitInfeasible;
    }
    return kExitValidation;
}

} // namespace gridflex::cli
