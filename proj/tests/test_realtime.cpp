#include "doctest.h"

#include "gridflex/error.hpp"
#include "gridflex/realtime.hpp"

#include <algorithm>
#include <cmath>
#include <random>

using namespace gridflex;

namespace {

DispatchState online(double p) {
    DispatchState s;
    s.p_prev = p;
    s.u_prev = 1;
    return s;
}

DispatchState offline(int minutes) {
    DispatchState s;
    s.u_prev = 0;
    s.off_count = minutes;
    return s;
}

// Brute-force reference for one generator/load interval: scan every power on
// a fine grid, keep the ones admitted by the ramp pair and box, and return
// the smallest squared deficit (the off option included).
double scan_best_cost(const ResourceSpec& s, const DispatchState& st, double base, double net,
                      int dt, double resolution) {
    auto offset_of = [&](double p) {
        return s.role == ResourceRole::Generator ? base + net - p : p + net - base;
    };
    double best = INFINITY;
    const double r = dt * s.ramp;
    const auto n = static_cast<long>(std::ceil((s.p_max - s.p_min) / resolution));
    for (long i = 0; i <= n; ++i) {
        const double p = std::min(s.p_max, s.p_min + i * resolution);
        const int u = 1;
        bool ok = p - st.p_prev <= r * st.u_prev + s.p_min * (u - st.u_prev) &&
                  st.p_prev - p <= r * u + s.p_min * (st.u_prev - u);
        if (st.u_prev == 0 && st.off_count < s.startup_minutes) ok = false;
        if (ok) best = std::min(best, offset_of(p) * offset_of(p));
    }
    const int u = 0;
    const double p = 0.0;
    bool off_ok = p - st.p_prev <= r * st.u_prev + s.p_min * (u - st.u_prev) &&
                  st.p_prev - p <= r * u + s.p_min * (st.u_prev - u);
    if (off_ok) best = std::min(best, offset_of(0.0) * offset_of(0.0));
    return best;
}

} // namespace

TEST_CASE("feasible set of an online unit is the ramp window inside the box") {
    const auto& ice = find_resource("ICE");
    const auto fs = feasible_power_set(ice, online(10.0), 1);
    REQUIRE(fs.on.size() == 1);
    CHECK(fs.on[0].lo == doctest::Approx(6.4));
    CHECK(fs.on[0].hi == doctest::Approx(13.6));
    CHECK_FALSE(fs.off_allowed); // 10 MW is above p_min: no direct shut-down

    const auto top = feasible_power_set(ice, online(17.0), 1);
    CHECK(top.on[0].hi == 18.0);
    const auto at_min = feasible_power_set(ice, online(1.8), 1);
    CHECK(at_min.on[0].lo == 1.8);
    CHECK(at_min.off_allowed);
}

TEST_CASE("start-up gate") {
    const auto& ice = find_resource("ICE");
    const auto waiting = feasible_power_set(ice, offline(3), 1);
    CHECK(waiting.on.empty());
    CHECK(waiting.off_allowed);

    // The ramp pair with u_{t-1}=0, u_t=1 reads P_t <= P_min and P_t >= P_min:
    // a start-up lands exactly on p_min.
    const auto ready = feasible_power_set(ice, offline(5), 1);
    REQUIRE(ready.on.size() == 1);
    CHECK(ready.on[0].lo == 1.8);
    CHECK(ready.on[0].hi == 1.8);

    // Zero start-up time never blocks.
    const auto& bat = find_resource("Battery");
    CHECK(feasible_power_set(bat, offline(0), 1).on.size() == 2);
}

TEST_CASE("shut-down needs p_prev <= p_min") {
    const auto& ccgt = find_resource("CCGT");
    CHECK_FALSE(feasible_power_set(ccgt, online(241), 1).off_allowed);
    CHECK(feasible_power_set(ccgt, online(240), 1).off_allowed);
}

TEST_CASE("ICE step example") {
    const auto& ice = find_resource("ICE");
    const auto r = step_dispatch(ice, online(9.9), 9.9, 9.0, 1);
    CHECK(r.u == 1);
    CHECK(r.p == doctest::Approx(13.5));
    CHECK(r.offset == doctest::Approx(5.4));
    CHECK(r.offset_pu == doctest::Approx(0.3));
    // Independent scan at 1 kW resolution finds nothing better.
    const double best = scan_best_cost(ice, online(9.9), 9.9, 9.0, 1, 1e-3);
    CHECK(r.offset * r.offset <= best + 1e-9);
}

TEST_CASE("Battery follows net load when the ramp never binds") {
    const auto& bat = find_resource("Battery");
    const auto r = step_dispatch(bat, online(0.0), 0.0, 50.0, 1);
    CHECK(r.p == 50.0);
    CHECK(r.offset == 0.0);
    const auto c = step_dispatch(bat, online(0.0), 0.0, -30.0, 1);
    CHECK(c.p == -30.0);
    CHECK(c.offset == 0.0);
}

TEST_CASE("storage deadband and sign changes") {
    const auto& bat = find_resource("Battery");
    SUBCASE("inside the deadband the off state is strictly better") {
        const auto r = step_dispatch(bat, online(0.1), 0.0, 0.03, 1);
        CHECK(r.u == 0);
        CHECK(r.p == 0.0);
        CHECK(r.offset == doctest::Approx(0.03));
    }
    SUBCASE("equal deficits prefer the smaller magnitude") {
        // Target 0 from a state that cannot shut down: both deadband edges
        // have the same deficit and the same magnitude, the charging edge is
        // listed first.
        const auto r = step_dispatch(bat, online(50.0), 0.0, 0.0, 1);
        CHECK(r.u == 1);
        CHECK(std::abs(r.p) == doctest::Approx(0.1));
    }
    SUBCASE("pumped hydro cannot jump from discharging to charging") {
        const auto& phs = find_resource("Pumped Hydro");
        const auto fs = feasible_power_set(phs, online(100.0), 1);
        REQUIRE(fs.on.size() == 1);
        CHECK(fs.on[0].lo == 100.0);
        CHECK(fs.on[0].hi == 150.0);
        CHECK(fs.off_allowed);
        const auto r = step_dispatch(phs, online(100.0), 0.0, -2000.0, 1);
        CHECK(r.u == 0);
        CHECK(r.offset == -2000.0);
    }
}

TEST_CASE("staying online wins exact ties with shutting down") {
    const auto& pv = find_resource("Solar PV"); // p_min = 0
    const auto r = step_dispatch(pv, online(0.0), 0.0, 0.0, 1);
    CHECK(r.u == 1);
    CHECK(r.offset == 0.0);
}

TEST_CASE("balance equations hold for every role") {
    std::mt19937_64 rng(7);
    auto uni = [&](double lo, double hi) {
        return lo + (hi - lo) * static_cast<double>(rng() >> 11) * 0x1.0p-53;
    };
    for (const auto& spec : builtin_catalog()) {
        for (int k = 0; k < 50; ++k) {
            const double p_prev = uni(spec.p_min, spec.p_max);
            const double base = spec.is_storage() ? 0.0 : uni(spec.p_min, spec.p_max);
            const double net = uni(-0.6, 0.6) * spec.p_max;
            const auto r = step_dispatch(spec, online(p_prev), base, net, 1);
            double residual = 0.0;
            switch (spec.role) {
            case ResourceRole::Generator: residual = r.p - (base + net - r.offset); break;
            case ResourceRole::Load: residual = base - (r.p + net - r.offset); break;
            case ResourceRole::Storage: residual = r.p - (net - r.offset); break;
            }
            CHECK(std::abs(residual) <= 1e-9 * spec.p_max);
            CHECK(r.offset_pu == doctest::Approx(r.offset / spec.p_max));
        }
    }
}

TEST_CASE("step optimality against an independent scan") {
    std::mt19937_64 rng(99);
    auto uni = [&](double lo, double hi) {
        return lo + (hi - lo) * static_cast<double>(rng() >> 11) * 0x1.0p-53;
    };
    for (const char* name : {"ICE", "Refrigeration", "Data Center", "Wind Turbine"}) {
        const auto& spec = find_resource(name);
        const double res = spec.p_max * 1e-5;
        for (int k = 0; k < 20; ++k) {
            CAPTURE(name);
            CAPTURE(k);
            DispatchState st = k % 5 == 0 ? offline(static_cast<int>(rng() % 20))
                                          : online(uni(spec.p_min, spec.p_max));
            const double base = uni(spec.p_min, spec.p_max);
            const double net = uni(-0.5, 0.5) * spec.p_max;
            const auto r = step_dispatch(spec, st, base, net, 1);
            const double best = scan_best_cost(spec, st, base, net, 1, res);
            CHECK(r.offset * r.offset <= best + 1e-9 * spec.p_max * spec.p_max);
        }
    }
}

TEST_CASE("all-zero net load rides the baseline") {
    NetLoadProfile zero;
    zero.values.assign(60, 0.0);
    for (const auto& spec : builtin_catalog()) {
        CAPTURE(spec.name);
        const auto tr = run_realtime(spec, zero);
        for (std::size_t t = 0; t < tr.steps.size(); ++t) {
            CHECK(tr.steps[t].offset == 0.0);
            if (!spec.is_storage()) CHECK(tr.steps[t].p == tr.baseline[t]);
        }
        CHECK(tr.objective == 0.0);
    }
}

static RealtimeConfig midpoint_config() {
    RealtimeConfig cfg;
    cfg.baseline_policy = BaselinePolicy::Midpoint;
    return cfg;
}

TEST_CASE("zero-deficit envelope: reachable targets give zero deficit") {
    std::mt19937_64 rng(5);
    auto uni = [&](double lo, double hi) {
        return lo + (hi - lo) * static_cast<double>(rng() >> 11) * 0x1.0p-53;
    };
    for (const char* name : {"CCGT", "ICE", "Hydropower", "Cement Production", "HVAC"}) {
        const auto& spec = find_resource(name);
        const double base = 0.5 * (spec.p_min + spec.p_max);
        const double sgn = spec.role == ResourceRole::Generator ? 1.0 : -1.0;
        NetLoadProfile prof;
        double target = base;
        for (int t = 0; t < 200; ++t) {
            // Half the ramp keeps the increments clear of the boundary.
            target = std::clamp(target + uni(-0.5, 0.5) * spec.ramp, spec.p_min, spec.p_max);
            prof.values.push_back(sgn * (target - base) / spec.p_max);
        }
        CAPTURE(name);
        const auto tr = run_realtime(spec, prof, midpoint_config());
        for (const auto& s : tr.steps) CHECK(std::abs(s.offset) <= 1e-9 * spec.p_max);
    }
}

TEST_CASE("ICE on the energy-reserve profile matches a clamp replay") {
    const auto& ice = find_resource("ICE");
    const auto prof = gen_energy_reserve(1);
    const auto tr = run_realtime(ice, prof, midpoint_config());
    const double base = 9.9;
    double p = base;
    for (std::size_t t = 0; t < prof.steps(); ++t) {
        const double target = base + prof.values[t] * 18.0;
        p = std::clamp(target, std::max(1.8, p - 3.6), std::min(18.0, p + 3.6));
        CAPTURE(t);
        CHECK(tr.steps[t].p == doctest::Approx(p));
        CHECK(tr.steps[t].u == 1);
    }
    // After the ramp transient the deficit is the part that exceeds p_max.
    CHECK(tr.steps[3].offset == doctest::Approx(0.9));
    CHECK(tr.steps[359].offset == doctest::Approx(0.9));
    CHECK(tr.steps[364].offset == 0.0);
    // Below p_min the shortfall is the other way round.
    CHECK(tr.steps[724].offset == doctest::Approx(-0.9));
    CHECK(tr.steps[1199].offset == 0.0);
}

TEST_CASE("Solar PV curtailment baseline leaves the positive block uncovered") {
    const auto& pv = find_resource("Solar PV");
    const auto tr = run_realtime(pv, gen_energy_reserve(1));
    CHECK(tr.baseline[0] == pv.p_max);
    for (std::size_t t = 0; t < 360; ++t) CHECK(tr.steps[t].offset_pu == doctest::Approx(0.5));
    for (std::size_t t = 360; t < 1200; ++t) CHECK(tr.steps[t].offset == doctest::Approx(0.0));
}

TEST_CASE("run_realtime validation") {
    NetLoadProfile p;
    p.values = {0.1};
    RealtimeConfig cfg;
    cfg.soc_enforced = true;
    CHECK_THROWS_AS(run_realtime(find_resource("ICE"), p, cfg), ValidationError);
    NetLoadProfile empty;
    CHECK_THROWS_AS(run_realtime(find_resource("ICE"), empty), ValidationError);
    RealtimeConfig bad;
    bad.baseline_policy = BaselinePolicy::Series;
    bad.baseline_series = {100.0};
    CHECK_THROWS_AS(run_realtime(find_resource("ICE"), p, bad), ValidationError);
}

TEST_CASE("baseline policies") {
    const auto& ice = find_resource("ICE");
    CHECK(make_baseline(ice, BaselinePolicy::Midpoint, 3) == Baseline{9.9, 9.9, 9.9});
    CHECK(make_baseline(ice, BaselinePolicy::Min, 2) == Baseline{1.8, 1.8});
    CHECK(make_baseline(ice, BaselinePolicy::Max, 1) == Baseline{18.0});
    CHECK(make_baseline(ice, BaselinePolicy::Auto, 1) == Baseline{9.9});
    CHECK(make_baseline(find_resource("Wind Turbine"), BaselinePolicy::Auto, 1) == Baseline{1.3});
    CHECK(make_baseline(find_resource("Battery"), BaselinePolicy::Midpoint, 4).empty());
    const std::vector<double> series{2.0, 3.0};
    CHECK(make_baseline(ice, BaselinePolicy::Series, 2, series) == Baseline{2.0, 3.0});
    CHECK_THROWS_AS(make_baseline(ice, BaselinePolicy::Series, 3, series), ValidationError);
    CHECK(parse_baseline_policy("midpoint") == BaselinePolicy::Midpoint);
    CHECK_THROWS_AS(parse_baseline_policy("median"), ValidationError);
}

TEST_CASE("OFF minutes accumulate across offline intervals") {
    const auto& ice = find_resource("ICE");
    DispatchState s = online(1.8);
    s = advance(ice, s, {0.0, 0, 0.0, 0.0}, 2, false);
    CHECK(s.off_count == 2);
    CHECK(s.u_prev == 0);
    s = advance(ice, s, {0.0, 0, 0.0, 0.0}, 2, false);
    CHECK(s.off_count == 4);
    s = advance(ice, s, {1.8, 1, 0.0, 0.0}, 2, false);
    CHECK(s.off_count == 0);
    CHECK(s.t == 3);
}
