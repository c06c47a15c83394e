#pragma once

#include <optional>
#include <string>
#include <vector>

#include "windatc/network.hpp"
#include "windatc/pdipm.hpp"
#include "windatc/power_flow.hpp"
#include "windatc/study_config.hpp"

namespace windatc::study {

struct ResultRow {
    std::string study;
    std::string param;   // swept value: rho, capacity, location pair, method, load coeff
    double hour = 0.0;
    double atc_mw = 0.0;
    std::string status;  // converged | iteration_limit | numerical_failure
    int iterations = 0;
};

struct StudyResult {
    std::string name;
    std::vector<ResultRow> rows;
    std::optional<double> saturation_capacity_mw;  // capacity sweep only

    bool all_converged() const;
};

/// Shared machinery for the experiment families: parses the case once,
/// caches per-hour base states and drives scenario generation + PDIPM.
class StudyRunner {
public:
    explicit StudyRunner(StudyConfig config);

    StudyResult run_correlation_sweep();
    StudyResult run_capacity_sweep(const std::vector<double>& capacities_mw);
    StudyResult run_location_study(const std::vector<std::pair<int, int>>& locations);
    StudyResult run_integration_method_study();
    StudyResult run_time_series(int resolution_minutes);

    std::vector<StudyResult> run_all();

    const StudyConfig& config() const { return cfg_; }
    const grid::PowerNetwork& network() const { return net_; }

    /// No-wind ATC at hour h on the unmodified network (baseline code path).
    double baseline_atc_mw(double hour);

    /// One ATC solve: wind injections (bus -> MW) on an optionally modified
    /// network, measured against the unmodified network's base state.
    ResultRow solve_hour(const std::string& study, const std::string& param, double hour,
                         const std::map<int, double>& wind_mw,
                         const grid::PowerNetwork* scenario_net = nullptr);

    opt::SolverOptions& solver_options() { return solver_opts_; }

private:
    const grid::BaseState& base_state(double hour);

    StudyConfig cfg_;
    grid::PowerNetwork net_;
    opt::SolverOptions solver_opts_;
    std::map<double, grid::BaseState> base_cache_;  // keyed by hour
};

}  // namespace windatc::study
