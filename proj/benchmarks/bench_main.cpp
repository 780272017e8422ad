#include <fronttrack/analysis.hpp>
#include <fronttrack/engine.hpp>
#include <fronttrack/genealogy.hpp>
#include <fronttrack/measures.hpp>
#include <fronttrack/riemann.hpp>

#include <benchmark/benchmark.h>

#include <cmath>
#include <random>

using namespace fronttrack;

namespace {

State pair(double a, double b) {
    State s(2);
    s << a, b;
    return s;
}

StepDatum sine_cells(int cells, double amp) {
    StepDatum d;
    for (int k = 0; k <= cells; ++k) {
        State s(1);
        s << amp * std::sin(2.0 * M_PI * k / cells);
        d.values.push_back(s);
    }
    for (int k = 1; k <= cells; ++k) d.breaks.push_back(static_cast<double>(k) / cells);
    return d;
}

StepDatum psys_cells(int cells, double amp, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-amp, amp);
    StepDatum d;
    for (int k = 0; k <= cells; ++k) d.values.push_back(pair(1.0 + u(rng), u(rng)));
    for (int k = 1; k <= cells; ++k) d.breaks.push_back(static_cast<double>(k) / cells);
    return d;
}

RunParams params(double nu, double horizon) {
    RunParams p;
    p.nu = nu;
    p.horizon = horizon;
    p.ladder = {{0.02, 0.1}, {0.01, 0.05}};
    return p;
}

} // namespace

static void BM_RiemannPSystem(benchmark::State& state) {
    auto model = make_p_system(2.0);
    const State ul = pair(1.0, 0.0);
    const State ur = lax_map(*model, ul, pair(0.04, -0.03)).back();
    for (auto _ : state) benchmark::DoNotOptimize(solve_riemann(*model, ul, ur));
}
BENCHMARK(BM_RiemannPSystem);

static void BM_EngineBurgers(benchmark::State& state) {
    auto model = make_burgers();
    const auto cells = static_cast<int>(state.range(0));
    const StepDatum d = sine_cells(cells, 0.5);
    const RunParams p = params(0.05, 1.0);
    for (auto _ : state) {
        RunLog log = run(*model, p, sample_initial_datum(*model, d, p.nu));
        state.counters["events"] = static_cast<double>(log.events.size());
        benchmark::DoNotOptimize(log);
    }
}
BENCHMARK(BM_EngineBurgers)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);

static void BM_EnginePSystem(benchmark::State& state) {
    auto model = make_p_system(2.0);
    const StepDatum d = psys_cells(static_cast<int>(state.range(0)), 0.01, 7);
    const RunParams p = params(0.02, 1.0);
    for (auto _ : state) {
        RunLog log = run(*model, p, sample_initial_datum(*model, d, p.nu));
        state.counters["events"] = static_cast<double>(log.events.size());
        benchmark::DoNotOptimize(log);
    }
}
BENCHMARK(BM_EnginePSystem)->Arg(10)->Arg(20)->Unit(benchmark::kMillisecond);

static void BM_RegionBalance(benchmark::State& state) {
    auto model = make_burgers();
    const StepDatum d = sine_cells(50, 0.5);
    const RunParams p = params(0.05, 2.0);
    const RunLog log = run(*model, p, sample_initial_datum(*model, d, p.nu));
    const Timeline tl(log);
    const JumpSet js = jump_set(log, 0, 0.02, 0.1);
    const InteractionMeasures im = interaction_measures(log);
    for (auto _ : state) {
        CharRegion region = make_region(tl, *model, 0, 0.2, 1.5, {{0.1, 0.3}, {0.5, 0.9}});
        benchmark::DoNotOptimize(region_balance_check(tl, region, js, im, p.eps_nu(), 1.0));
    }
}
BENCHMARK(BM_RegionBalance)->Unit(benchmark::kMicrosecond);

static void BM_JumpSet(benchmark::State& state) {
    auto model = make_burgers();
    const StepDatum d = sine_cells(200, 0.5);
    const RunParams p = params(0.05, 1.0);
    const RunLog log = run(*model, p, sample_initial_datum(*model, d, p.nu));
    for (auto _ : state) benchmark::DoNotOptimize(jump_set(log, 0, 0.02, 0.1));
}
BENCHMARK(BM_JumpSet)->Unit(benchmark::kMicrosecond);
BENCHMARK_MAIN();
