// Serial vs OpenMP timings of the two parallel kernels: the day-ahead DP
// stage sweep and the real-time optimality grid search.

#include "gridflex/audit.hpp"
#include "gridflex/catalog.hpp"
#include "gridflex/dayahead.hpp"
#include "gridflex/realtime.hpp"
#include "gridflex/scenario.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace gridflex;

Execution execution_of(const benchmark::State& state) {
    return state.range(0) == 0 ? Execution::Serial : Execution::Parallel;
}

void BM_DayAheadDp(benchmark::State& state) {
    const auto& spec = find_resource("CCGT");
    const auto profile = gen_peak_shaving(kDefaultDayAheadDt);
    const auto problem = make_schedule_problem(spec, profile, BaselinePolicy::Auto,
                                               static_cast<int>(state.range(1)));
    const DpOptions opts{execution_of(state), false};
    for (auto _ : state) {
        benchmark::DoNotOptimize(solve_dayahead_dp(problem, opts).objective);
    }
    state.SetLabel(state.range(0) == 0 ? "serial" : "parallel");
}
BENCHMARK(BM_DayAheadDp)->ArgsProduct({{0, 1}, {65, 257}})->Unit(benchmark::kMillisecond);

void BM_DayAheadDpSoc(benchmark::State& state) {
    const auto& spec = find_resource("Battery");
    const auto profile = gen_peak_shaving(kDefaultDayAheadDt);
    auto problem = make_schedule_problem(spec, profile, BaselinePolicy::Auto, 65);
    problem.soc_enforced = true;
    problem.soc_levels = 17;
    const DpOptions opts{execution_of(state), false};
    for (auto _ : state) {
        benchmark::DoNotOptimize(solve_dayahead_dp(problem, opts).objective);
    }
    state.SetLabel(state.range(0) == 0 ? "serial" : "parallel");
}
BENCHMARK(BM_DayAheadDpSoc)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_RealtimeAudit(benchmark::State& state) {
    const auto& spec = find_resource("ICE");
    const auto tr = run_realtime(spec, gen_intermittency(7));
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            audit_realtime_optimality(spec, tr, 1e-5, 1e-9, execution_of(state)).points_evaluated);
    }
    state.SetLabel(state.range(0) == 0 ? "serial" : "parallel");
}
BENCHMARK(BM_RealtimeAudit)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_Realtime(benchmark::State& state) {
    const auto& spec = find_resource("Hydropower");
    const auto profile = gen_energy_reserve(1);
    for (auto _ : state) {
        benchmark::DoNotOptimize(run_realtime(spec, profile).objective);
    }
}
BENCHMARK(BM_Realtime)->Unit(benchmark::kMicrosecond);

} // namespace

BENCHMARK_MAIN();
