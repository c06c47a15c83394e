#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "windatc/power_curve.hpp"
#include "windatc/wind_scenarios.hpp"

namespace windatc::study {

class ConfigError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Study configuration: case data, wind farms, scenario statistics and the
/// sweeps. Anything omitted in the JSON file falls back to the built-in
/// defaults (sinusoidal forecast, two-peak load profile, geometric
/// autocorrelation).
struct StudyConfig {
    std::string case_path;
    std::vector<turbine::FarmSpec> farms;

    std::optional<std::string> forecast_csv;
    std::optional<std::string> profiles_csv;
    double default_stddev = 0.05;        // m/s, when no profile file is given
    double default_autocorr_decay = 0.8; // rho_T[k] = decay^(k-1)

    std::vector<double> rho_values = {0.0, 0.3, 0.5, 0.8, 1.0};
    std::vector<double> capacities_mw = {100, 300, 600, 800, 1000};
    std::vector<std::pair<int, int>> location_pairs;  // (farm-1 bus, farm-2 bus)
    std::vector<int> location_hours = {3, 6, 15, 22};
    std::vector<int> method_hours = {1, 4, 10, 14, 19};
    int method_sending_bus = 38;
    int method_receiving_bus = 39;
    double method_replacement_mw = 200.0;

    std::vector<double> load_profile;  // 24 values of b(h); defaulted if empty
    double correlation_rho = 0.5;      // rho used by non-correlation studies
    std::uint64_t seed = 42;
    std::string output_dir = "out";

    int n_hours = 24;

    /// b(t) with t in hours [1, 24], linearly interpolated, periodic.
    double load_at(double t) const;
};

StudyConfig load_config(const std::string& path);

/// Built-in defaults used for any field missing from the file.
StudyConfig default_config();

/// Default forecast for the configured farms (rows) over n_hours columns.
wind::ForecastMatrix default_forecast(int n_farms, int n_hours);

/// Geometric-decay autocorrelation with constant stddev.
wind::TemporalProfile default_profile(int n_hours, double decay, double stddev);

/// Resolve forecast + profiles for the given farm count, reading the
/// configured CSVs when present.
wind::ForecastMatrix resolve_forecast(const StudyConfig& cfg, int n_farms);
std::vector<wind::TemporalProfile> resolve_profiles(const StudyConfig& cfg, int n_farms);

}  // namespace windatc::study
