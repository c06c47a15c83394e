// Microbenchmarks for the hot paths: Newton-Raphson power flow, the
// interior-point transfer-capability solve, and correlated wind scenario
// generation. Run from the repository root so the data/ cases resolve.

#include <benchmark/benchmark.h>

#include <map>

#include "windatc/atc_problem.hpp"
#include "windatc/pdipm.hpp"
#include "windatc/power_flow.hpp"
#include "windatc/study_config.hpp"
#include "windatc/wind_scenarios.hpp"

namespace {

const windatc::grid::PowerNetwork& case9() {
    static windatc::grid::PowerNetwork net = windatc::grid::parse_case("data/case9.case");
    return net;
}

const windatc::grid::PowerNetwork& case39() {
    static windatc::grid::PowerNetwork net = windatc::grid::parse_case("data/ieee39.case");
    return net;
}

void bm_power_flow_case9(benchmark::State& state) {
    const auto& net = case9();
    for (auto _ : state) {
        auto base = windatc::grid::solve_base_power_flow(net, 0.95);
        benchmark::DoNotOptimize(base.total_tie_flow_mw);
    }
}
BENCHMARK(bm_power_flow_case9);

void bm_power_flow_case39(benchmark::State& state) {
    const auto& net = case39();
    for (auto _ : state) {
        auto base = windatc::grid::solve_base_power_flow(net, 0.95);
        benchmark::DoNotOptimize(base.total_tie_flow_mw);
    }
}
BENCHMARK(bm_power_flow_case39);

void bm_atc_solve_case9(benchmark::State& state) {
    const auto& net = case9();
    std::map<int, double> wind{{5, 40.0}, {7, 25.0}};
    auto base = windatc::grid::solve_base_power_flow(net, 0.9);
    for (auto _ : state) {
        windatc::opf::AtcProblem problem(net, wind, 0.9, base);
        auto sol = windatc::opt::solve(problem);
        benchmark::DoNotOptimize(sol.objective);
    }
}
BENCHMARK(bm_atc_solve_case9)->Unit(benchmark::kMillisecond);

void bm_atc_solve_case39(benchmark::State& state) {
    const auto& net = case39();
    std::map<int, double> wind{{16, 80.0}, {21, 60.0}};
    auto base = windatc::grid::solve_base_power_flow(net, 0.9);
    for (auto _ : state) {
        windatc::opf::AtcProblem problem(net, wind, 0.9, base);
        auto sol = windatc::opt::solve(problem);
        benchmark::DoNotOptimize(sol.objective);
    }
}
BENCHMARK(bm_atc_solve_case39)->Unit(benchmark::kMillisecond);

void bm_scenario_generation(benchmark::State& state) {
    using namespace windatc;
    const int n_farms = static_cast<int>(state.range(0));
    study::StudyConfig cfg = study::default_config();
    wind::ForecastMatrix forecast = study::resolve_forecast(cfg, n_farms);
    auto profiles = study::resolve_profiles(cfg, n_farms);
    wind::SpatialCorrelation spatial = wind::build_spatial_correlation(0.5, n_farms);
    unsigned seed = 1;
    for (auto _ : state) {
        auto set = wind::generate_scenarios(forecast, spatial, profiles, seed++);
        benchmark::DoNotOptimize(set.speeds);
    }
}
BENCHMARK(bm_scenario_generation)->Arg(2)->Arg(4)->Arg(8);

}  // namespace

BENCHMARK_MAIN();
