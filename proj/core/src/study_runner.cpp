#include "windatc/study_runner.hpp"

#include <cmath>
#include <cstdio>

#include "windatc/atc_problem.hpp"
#include "windatc/kkt_checker.hpp"

namespace windatc::study {

namespace {

std::string format_value(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

std::string status_name(opt::SolveStatus s) {
    switch (s) {
        case opt::SolveStatus::Converged: return "converged";
        case opt::SolveStatus::IterationLimit: return "iteration_limit";
        case opt::SolveStatus::NumericalFailure: return "numerical_failure";
    }
    return "unknown";
}

/// Linear periodic interpolation of a farms x 24 matrix at fractional hour t
/// (t in [1, 25)).
double interp_row(const Eigen::MatrixXd& m, int row, double t) {
    const int n = static_cast<int>(m.cols());
    double u = std::fmod(t - 1.0, static_cast<double>(n));
    if (u < 0.0) u += n;
    int k = static_cast<int>(std::floor(u));
    double frac = u - k;
    return m(row, k % n) + frac * (m(row, (k + 1) % n) - m(row, k % n));
}

}  // namespace

bool StudyResult::all_converged() const {
    for (const auto& r : rows)
        if (r.status != "converged") return false;
    return true;
}

StudyRunner::StudyRunner(StudyConfig config)
    : cfg_(std::move(config)), net_(grid::parse_case(cfg_.case_path)) {}

const grid::BaseState& StudyRunner::base_state(double hour) {
    auto it = base_cache_.find(hour);
    if (it == base_cache_.end())
        it = base_cache_.emplace(hour, grid::solve_base_power_flow(net_, cfg_.load_at(hour)))
                 .first;
    return it->second;
}

ResultRow StudyRunner::solve_hour(const std::string& study, const std::string& param, double hour,
                                  const std::map<int, double>& wind_mw,
                                  const grid::PowerNetwork* scenario_net) {
    ResultRow row{study, param, hour, 0.0, "numerical_failure", 0};
    try {
        const grid::PowerNetwork& net = scenario_net ? *scenario_net : net_;
        opf::AtcProblem problem(net, wind_mw, cfg_.load_at(hour), base_state(hour));
        opt::PdipmSolution sol = opt::solve(problem, solver_opts_);
        if (!sol.converged()) {
            // A handful of heavily loaded scenarios need a better-centered
            // path and a larger iteration budget; retry those conservatively.
            opt::SolverOptions fallback = solver_opts_;
            fallback.centering_sigma = 0.5;
            fallback.max_iters = std::max(300, solver_opts_.max_iters);
            sol = opt::solve(problem, fallback);
        }
        row.atc_mw = sol.objective * problem.base_mva();
        row.status = status_name(sol.status);
        row.iterations = sol.iterations;
    } catch (const std::exception&) {
        // recorded as numerical_failure; the run continues
    }
    return row;
}

double StudyRunner::baseline_atc_mw(double hour) {
    opf::AtcProblem problem(net_, {}, cfg_.load_at(hour), base_state(hour));
    opt::PdipmSolution sol = opt::solve(problem, solver_opts_);
    if (!sol.converged())
        throw std::runtime_error("baseline ATC solve did not converge at hour " +
                                 format_value(hour));
    return sol.objective * problem.base_mva();
}

StudyResult StudyRunner::run_correlation_sweep() {
    if (cfg_.farms.size() < 2)
        throw ConfigError("correlation sweep needs at least two farms");
    StudyResult result;
    result.name = "correlation_sweep";
    const int nf = static_cast<int>(cfg_.farms.size());
    wind::ForecastMatrix forecast = resolve_forecast(cfg_, nf);
    auto profiles = resolve_profiles(cfg_, nf);

    for (double rho : cfg_.rho_values) {
        // Same seed for every rho: only the correlation varies.
        wind::WindScenarioSet set = wind::generate_scenarios(
            forecast, wind::build_spatial_correlation(rho, nf), profiles, cfg_.seed);
        for (int h = 1; h <= cfg_.n_hours; ++h) {
            std::map<int, double> wind_mw;
            for (int w = 0; w < nf; ++w)
                wind_mw[cfg_.farms[w].bus_id] +=
                    turbine::farm_output(set.speeds(w, h - 1), cfg_.farms[w]);
            result.rows.push_back(
                solve_hour(result.name, format_value(rho), h, wind_mw));
        }
    }
    return result;
}

StudyResult StudyRunner::run_capacity_sweep(const std::vector<double>& capacities_mw) {
    StudyResult result;
    result.name = "capacity_sweep";
    const int nf = static_cast<int>(cfg_.farms.size());
    wind::ForecastMatrix forecast = resolve_forecast(cfg_, nf);
    auto profiles = resolve_profiles(cfg_, nf);
    wind::WindScenarioSet set = wind::generate_scenarios(
        forecast, wind::build_spatial_correlation(cfg_.correlation_rho, nf), profiles,
        cfg_.seed);

    std::vector<double> max_atc;
    for (double cap : capacities_mw) {
        double best = -1e300;
        for (int h = 1; h <= cfg_.n_hours; ++h) {
            std::map<int, double> wind_mw;
            if (cap > 0.0) {
                for (int w = 0; w < nf; ++w) {
                    // Total capacity split equally, realized by scaling the
                    // turbine count.
                    const auto& farm = cfg_.farms[w];
                    int turbines = std::max(
                        1, static_cast<int>(std::lround(cap / nf / farm.curve.rated_power)));
                    turbine::FarmSpec scaled(farm.bus_id, turbines, farm.curve);
                    wind_mw[farm.bus_id] += turbine::farm_output(set.speeds(w, h - 1), scaled);
                }
            }
            ResultRow row = solve_hour(result.name, format_value(cap), h, wind_mw);
            if (row.status == "converged") best = std::max(best, row.atc_mw);
            result.rows.push_back(std::move(row));
        }
        max_atc.push_back(best);
    }

    // Plateau detector: first capacity whose max-hour ATC no further capacity
    // improves by 0.1 MW or more.
    for (size_t i = 0; i < capacities_mw.size(); ++i) {
        bool plateau = true;
        for (size_t j = i + 1; j < capacities_mw.size(); ++j)
            if (max_atc[j] > max_atc[i] + 0.1) plateau = false;
        if (plateau && i + 1 < capacities_mw.size()) {
            result.saturation_capacity_mw = capacities_mw[i];
            break;
        }
    }
    return result;
}

StudyResult StudyRunner::run_location_study(const std::vector<std::pair<int, int>>& locations) {
    StudyResult result;
    result.name = "location_study";
    wind::ForecastMatrix forecast = resolve_forecast(cfg_, 2);
    auto profiles = resolve_profiles(cfg_, 2);
    wind::WindScenarioSet set = wind::generate_scenarios(
        forecast, wind::build_spatial_correlation(cfg_.correlation_rho, 2), profiles, cfg_.seed);

    const turbine::TurbineCurve curve = cfg_.farms.empty()
                                            ? turbine::TurbineCurve(3.0, 13.0, 25.0, 5.0)
                                            : cfg_.farms.front().curve;
    const int turbines = cfg_.farms.empty() ? 60 : cfg_.farms.front().turbine_count;

    for (int h : cfg_.location_hours)
        result.rows.push_back(solve_hour(result.name, "none", h, {}));
    for (const auto& [bus1, bus2] : locations) {
        for (int h : cfg_.location_hours) {
            std::map<int, double> wind_mw;
            wind_mw[bus1] += turbine::farm_output(
                set.speeds(0, h - 1), turbine::FarmSpec(bus1, turbines, curve));
            wind_mw[bus2] += turbine::farm_output(
                set.speeds(1, h - 1), turbine::FarmSpec(bus2, turbines, curve));
            result.rows.push_back(solve_hour(
                result.name, std::to_string(bus1) + "-" + std::to_string(bus2), h, wind_mw));
        }
    }
    return result;
}

StudyResult StudyRunner::run_integration_method_study() {
    StudyResult result;
    result.name = "method_study";
    wind::ForecastMatrix forecast = resolve_forecast(cfg_, 2);
    auto profiles = resolve_profiles(cfg_, 2);
    wind::WindScenarioSet set = wind::generate_scenarios(
        forecast, wind::build_spatial_correlation(cfg_.correlation_rho, 2), profiles, cfg_.seed);

    auto run_scenario = [&](const std::string& name, int bus) {
        // Replace method_replacement_mw of the conventional unit's output and
        // capacity at this bus with two equal wind farms.
        std::vector<grid::Generator> gens = net_.generators();
        bool found = false;
        for (auto& g : gens) {
            if (g.bus_id == bus) {
                if (g.p_set < cfg_.method_replacement_mw ||
                    g.p_max < cfg_.method_replacement_mw)
                    throw ConfigError("generator at bus " + std::to_string(bus) +
                                      " cannot give up " +
                                      format_value(cfg_.method_replacement_mw) + " MW");
                g.p_set -= cfg_.method_replacement_mw;
                g.p_max -= cfg_.method_replacement_mw;
                found = true;
            }
        }
        if (!found)
            throw ConfigError("no generator at replacement bus " + std::to_string(bus));
        grid::PowerNetwork modified(net_.base_mva(), net_.buses(), net_.branches(),
                                    std::move(gens));

        const double farm_cap = cfg_.method_replacement_mw / 2.0;
        const turbine::TurbineCurve curve(3.0, 13.0, 25.0, 5.0);
        const int turbines =
            std::max(1, static_cast<int>(std::lround(farm_cap / curve.rated_power)));
        for (int h : cfg_.method_hours) {
            std::map<int, double> wind_mw;
            for (int w = 0; w < 2; ++w)
                wind_mw[bus] += turbine::farm_output(
                    set.speeds(w, h - 1), turbine::FarmSpec(bus, turbines, curve));
            result.rows.push_back(solve_hour(result.name, name, h, wind_mw, &modified));
        }
    };

    run_scenario("a", cfg_.method_sending_bus);
    run_scenario("b", cfg_.method_receiving_bus);
    return result;
}

StudyResult StudyRunner::run_time_series(int resolution_minutes) {
    if (resolution_minutes <= 0 || (24 * 60) % resolution_minutes != 0)
        throw ConfigError("resolution must divide 24 hours evenly");
    StudyResult result;
    result.name = "time_series";
    const int nf = static_cast<int>(cfg_.farms.size());
    wind::ForecastMatrix forecast = resolve_forecast(cfg_, nf);
    auto profiles = resolve_profiles(cfg_, nf);
    wind::WindScenarioSet set = wind::generate_scenarios(
        forecast, wind::build_spatial_correlation(cfg_.correlation_rho, nf), profiles,
        cfg_.seed);

    const int steps = 24 * 60 / resolution_minutes;
    for (int k = 0; k < steps; ++k) {
        double t = 1.0 + k * resolution_minutes / 60.0;
        std::map<int, double> wind_mw;
        for (int w = 0; w < nf; ++w)
            wind_mw[cfg_.farms[w].bus_id] +=
                turbine::farm_output(interp_row(set.speeds, w, t), cfg_.farms[w]);
        // The load coefficient rides in the param column so the ATC/load
        // anti-correlation can be read off the CSV.
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.6f", cfg_.load_at(t));
        result.rows.push_back(solve_hour(result.name, buf, t, wind_mw));
    }
    return result;
}

std::vector<StudyResult> StudyRunner::run_all() {
    std::vector<StudyResult> out;
    out.push_back(run_correlation_sweep());
    out.push_back(run_capacity_sweep(cfg_.capacities_mw));
    out.push_back(run_location_study(cfg_.location_pairs));
    out.push_back(run_integration_method_study());
    out.push_back(run_time_series(15));
    return out;
}

}  // namespace windatc::study
