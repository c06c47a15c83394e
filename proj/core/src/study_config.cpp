#include "windatc/study_config.hpp"

#include <cmath>
#include <fstream>

#include <json.hpp>

namespace windatc::study {

using nlohmann::json;

double StudyConfig::load_at(double t) const {
    const int n = static_cast<int>(load_profile.size());
    // Periodic piecewise-linear interpolation on the hourly grid 1..n.
    double u = std::fmod(t - 1.0, static_cast<double>(n));
    if (u < 0.0) u += n;
    int k = static_cast<int>(std::floor(u));
    double frac = u - k;
    double a = load_profile[k % n];
    double b = load_profile[(k + 1) % n];
    return a + frac * (b - a);
}

StudyConfig default_config() {
    StudyConfig cfg;
    cfg.case_path = "data/ieee39.case";
    turbine::TurbineCurve curve(3.0, 13.0, 25.0, 5.0);
    cfg.farms.emplace_back(16, 60, curve);
    cfg.farms.emplace_back(23, 60, curve);
    cfg.location_pairs = {{16, 4},  {16, 6},  {16, 8},  {16, 25}, {16, 31},
                          {16, 15}, {16, 19}, {16, 21}, {16, 22}, {16, 23}, {16, 35}};
    cfg.load_profile.resize(24);
    for (int h = 1; h <= 24; ++h) {
        double morning = 0.12 * std::exp(-std::pow((h - 11.0) / 3.0, 2));
        double evening = 0.10 * std::exp(-std::pow((h - 20.0) / 2.5, 2));
        cfg.load_profile[h - 1] = 0.80 + morning + evening;
    }
    return cfg;
}

wind::ForecastMatrix default_forecast(int n_farms, int n_hours) {
    Eigen::MatrixXd m(n_farms, n_hours);
    for (int w = 0; w < n_farms; ++w) {
        for (int h = 0; h < n_hours; ++h) {
            double t = 2.0 * M_PI * h / n_hours;
            m(w, h) = 9.5 + 2.5 * std::sin(t + 0.4 * w) + 0.8 * std::sin(2.0 * t + 0.9 * w);
        }
    }
    return wind::ForecastMatrix(std::move(m));
}

wind::TemporalProfile default_profile(int n_hours, double decay, double stddev) {
    Eigen::VectorXd ac(n_hours), sd(n_hours);
    for (int k = 0; k < n_hours; ++k) {
        ac(k) = std::pow(decay, k);
        sd(k) = stddev;
    }
    return wind::TemporalProfile(std::move(ac), std::move(sd));
}

wind::ForecastMatrix resolve_forecast(const StudyConfig& cfg, int n_farms) {
    if (cfg.forecast_csv) {
        wind::ForecastMatrix fm = wind::read_forecast_csv(*cfg.forecast_csv);
        if (fm.values.rows() < n_farms)
            throw ConfigError("forecast file has fewer rows than farms");
        if (fm.values.rows() != n_farms)
            return wind::ForecastMatrix(fm.values.topRows(n_farms));
        return fm;
    }
    return default_forecast(n_farms, cfg.n_hours);
}

std::vector<wind::TemporalProfile> resolve_profiles(const StudyConfig& cfg, int n_farms) {
    if (cfg.profiles_csv) return wind::read_profiles_csv(*cfg.profiles_csv, n_farms);
    std::vector<wind::TemporalProfile> out;
    out.reserve(n_farms);
    for (int w = 0; w < n_farms; ++w)
        out.push_back(default_profile(cfg.n_hours, cfg.default_autocorr_decay,
                                      cfg.default_stddev));
    return out;
}

StudyConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw ConfigError(path + ": " + e.what());
    }

    StudyConfig cfg = default_config();
    try {
        if (j.contains("case")) cfg.case_path = j["case"].get<std::string>();
        if (j.contains("farms")) {
            cfg.farms.clear();
            for (const auto& f : j["farms"]) {
                turbine::TurbineCurve curve(f.value("cut_in", 3.0), f.value("rated_speed", 13.0),
                                            f.value("cut_out", 25.0),
                                            f.value("rated_power_mw", 5.0));
                cfg.farms.emplace_back(f.at("bus").get<int>(), f.value("turbines", 60), curve);
            }
        }
        if (j.contains("forecast_csv")) cfg.forecast_csv = j["forecast_csv"].get<std::string>();
        if (j.contains("profiles_csv")) cfg.profiles_csv = j["profiles_csv"].get<std::string>();
        if (j.contains("stddev")) cfg.default_stddev = j["stddev"].get<double>();
        if (j.contains("autocorr_decay"))
            cfg.default_autocorr_decay = j["autocorr_decay"].get<double>();
        if (j.contains("rho")) cfg.rho_values = j["rho"].get<std::vector<double>>();
        if (j.contains("capacities_mw"))
            cfg.capacities_mw = j["capacities_mw"].get<std::vector<double>>();
        if (j.contains("locations")) {
            cfg.location_pairs.clear();
            for (const auto& p : j["locations"])
                cfg.location_pairs.emplace_back(p.at(0).get<int>(), p.at(1).get<int>());
        }
        if (j.contains("location_hours"))
            cfg.location_hours = j["location_hours"].get<std::vector<int>>();
        if (j.contains("method_hours"))
            cfg.method_hours = j["method_hours"].get<std::vector<int>>();
        if (j.contains("load_profile")) {
            cfg.load_profile = j["load_profile"].get<std::vector<double>>();
            if (cfg.load_profile.size() != 24)
                throw ConfigError(path + ": load_profile must have 24 entries");
        }
        if (j.contains("correlation_rho")) cfg.correlation_rho = j["correlation_rho"].get<double>();
        if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
        if (j.contains("out")) cfg.output_dir = j["out"].get<std::string>();
    } catch (const json::exception& e) {
        throw ConfigError(path + ": " + e.what());
    }

    for (double rho : cfg.rho_values)
        if (rho < 0.0 || rho > 1.0) throw ConfigError(path + ": rho values must be in [0, 1]");
    for (double b : cfg.load_profile)
        if (!(b > 0.0)) throw ConfigError(path + ": load profile must be strictly positive");
    return cfg;
}

}  // namespace windatc::study
