#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "windatc/report.hpp"
#include "windatc/study_config.hpp"
#include "windatc/study_runner.hpp"

using namespace windatc;
using namespace windatc::study;

namespace {

namespace fs = std::filesystem;

std::string write_temp(const std::string& name, const std::string& text) {
    fs::path p = fs::temp_directory_path() / name;
    std::ofstream f(p);
    f << text;
    return p.string();
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p);
    std::ostringstream out;
    out << f.rdbuf();
    return out.str();
}

/// Small, fast configuration on the 9-bus case.
StudyConfig small_config() {
    StudyConfig cfg = default_config();
    cfg.case_path = "data/case9.case";
    cfg.farms.clear();
    turbine::TurbineCurve curve(3.0, 13.0, 25.0, 5.0);
    cfg.farms.emplace_back(5, 10, curve);
    cfg.farms.emplace_back(7, 10, curve);
    cfg.rho_values = {0.0, 1.0};
    cfg.capacities_mw = {0.0, 50.0};
    cfg.location_pairs = {{5, 7}};
    cfg.location_hours = {3, 15};
    cfg.method_hours = {4, 19};
    cfg.method_sending_bus = 2;
    cfg.method_receiving_bus = 3;
    cfg.method_replacement_mw = 60.0;
    std::fill(cfg.load_profile.begin(), cfg.load_profile.end(), 0.9);
    return cfg;
}

}  // namespace

TEST_CASE("default configuration is self-consistent") {
    StudyConfig cfg = default_config();
    CHECK(cfg.case_path == "data/ieee39.case");
    REQUIRE(cfg.farms.size() == 2);
    CHECK(cfg.farms[0].bus_id == 16);
    CHECK(cfg.farms[1].bus_id == 23);
    REQUIRE(cfg.load_profile.size() == 24);
    for (double b : cfg.load_profile) CHECK(b > 0.0);
    // two-peak shape: late-morning and evening maxima above the base level
    CHECK(cfg.load_profile[10] > cfg.load_profile[2]);
    CHECK(cfg.load_profile[19] > cfg.load_profile[23]);
    CHECK(!cfg.location_pairs.empty());
}

TEST_CASE("load coefficient interpolation is periodic and linear") {
    StudyConfig cfg = default_config();
    cfg.load_profile.assign(24, 1.0);
    cfg.load_profile[0] = 0.8;
    cfg.load_profile[1] = 1.2;
    CHECK(cfg.load_at(1.0) == doctest::Approx(0.8));
    CHECK(cfg.load_at(1.5) == doctest::Approx(1.0));
    CHECK(cfg.load_at(2.0) == doctest::Approx(1.2));
    CHECK(cfg.load_at(25.0) == doctest::Approx(0.8));   // wraps to hour 1
    CHECK(cfg.load_at(24.5) == doctest::Approx(0.9));   // midway hour 24 -> 1
}

TEST_CASE("config file overrides and validation") {
    std::string good = write_temp("windatc_cfg_good.json", R"({
        "case": "data/case9.case",
        "farms": [{"bus": 5, "turbines": 12}],
        "rho": [0.2, 0.4],
        "seed": 7,
        "out": "results",
        "correlation_rho": 0.3
    })");
    StudyConfig cfg = load_config(good);
    CHECK(cfg.case_path == "data/case9.case");
    REQUIRE(cfg.farms.size() == 1);
    CHECK(cfg.farms[0].bus_id == 5);
    CHECK(cfg.farms[0].turbine_count == 12);
    CHECK(cfg.rho_values == std::vector<double>{0.2, 0.4});
    CHECK(cfg.seed == 7);
    CHECK(cfg.output_dir == "results");
    CHECK(cfg.correlation_rho == 0.3);
    // untouched fields keep the defaults
    CHECK(cfg.load_profile.size() == 24);
    CHECK(cfg.capacities_mw.size() == 5);

    CHECK_THROWS_AS(load_config("/nonexistent/config.json"), ConfigError);
    CHECK_THROWS_AS(load_config(write_temp("windatc_cfg_syntax.json", "{not json")), ConfigError);
    CHECK_THROWS_AS(load_config(write_temp("windatc_cfg_rho.json", R"({"rho": [0.5, 1.5]})")),
                    ConfigError);
    CHECK_THROWS_AS(
        load_config(write_temp("windatc_cfg_profile.json", R"({"load_profile": [1.0, 1.0]})")),
        ConfigError);
    CHECK_THROWS_AS(
        load_config(write_temp("windatc_cfg_farm.json", R"({"farms": [{"turbines": 3}]})")),
        ConfigError);
}

TEST_CASE("csv and chart emission") {
    fs::path dir = fs::temp_directory_path() / "windatc_report_test";
    fs::remove_all(dir);

    StudyResult r;
    r.name = "demo";
    r.rows.push_back({"demo", "0.5", 1.0, 123.456789, "converged", 9});
    r.rows.push_back({"demo", "0.5", 2.0, 120.0, "numerical_failure", 0});
    r.rows.push_back({"demo", "0.8", 1.0, 130.25, "converged", 11});
    std::vector<std::string> files = emit_outputs(r, dir.string());
    REQUIRE(files.size() == 2);

    std::string csv = slurp(dir / "demo.csv");
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);
    CHECK(line == "study,param,hour,atc_mw,status,iters");
    std::getline(in, line);
    CHECK(line == "demo,0.5,1,123.456789,converged,9");
    std::getline(in, line);
    CHECK(line == "demo,0.5,2,120.000000,numerical_failure,0");
    std::getline(in, line);
    CHECK(line == "demo,0.8,1,130.250000,converged,11");

    std::string svg = slurp(dir / "demo.svg");
    CHECK(svg.find("<svg") != std::string::npos);
    CHECK(svg.find("polyline") != std::string::npos);
    CHECK(svg.find("0.5") != std::string::npos);  // legend labels

    // an empty result produces a header-only CSV and no chart
    StudyResult empty;
    empty.name = "nothing";
    std::vector<std::string> ef = emit_outputs(empty, dir.string());
    CHECK(ef.size() == 1);
    CHECK(slurp(dir / "nothing.csv") == "study,param,hour,atc_mw,status,iters\n");
    CHECK(!fs::exists(dir / "nothing.svg"));
    fs::remove_all(dir);
}

TEST_CASE("all_converged reflects the row statuses") {
    StudyResult r;
    r.rows.push_back({"s", "p", 1.0, 1.0, "converged", 5});
    CHECK(r.all_converged());
    r.rows.push_back({"s", "p", 2.0, 0.0, "iteration_limit", 100});
    CHECK(!r.all_converged());
}

TEST_CASE("time series resolution controls the row count") {
    StudyRunner runner(small_config());
    StudyResult hourly = runner.run_time_series(60);
    CHECK(hourly.rows.size() == 24);
    CHECK(hourly.all_converged());
    CHECK(hourly.rows[0].hour == doctest::Approx(1.0));
    CHECK(hourly.rows[23].hour == doctest::Approx(24.0));
    CHECK_THROWS_AS(runner.run_time_series(7), ConfigError);
    CHECK_THROWS_AS(runner.run_time_series(0), ConfigError);
}

TEST_CASE("location study brackets the no-wind baseline") {
    StudyConfig cfg = small_config();
    StudyRunner runner(cfg);
    StudyResult r = runner.run_location_study(cfg.location_pairs);
    // rows: one "none" row per hour, then one per (pair, hour)
    REQUIRE(r.rows.size() == cfg.location_hours.size() * (1 + cfg.location_pairs.size()));
    CHECK(r.all_converged());
    for (size_t k = 0; k < cfg.location_hours.size(); ++k) {
        const ResultRow& row = r.rows[k];
        CHECK(row.param == "none");
        // the dedicated baseline entry point reproduces the same number
        CHECK(row.atc_mw == doctest::Approx(runner.baseline_atc_mw(row.hour)).epsilon(1e-7));
    }
}

TEST_CASE("correlation sweep is deterministic and exhaustive") {
    StudyConfig cfg = small_config();
    StudyRunner a(cfg), b(cfg);
    StudyResult ra = a.run_correlation_sweep();
    StudyResult rb = b.run_correlation_sweep();
    REQUIRE(ra.rows.size() == cfg.rho_values.size() * 24);
    REQUIRE(ra.rows.size() == rb.rows.size());
    for (size_t i = 0; i < ra.rows.size(); ++i) {
        CHECK(ra.rows[i].atc_mw == rb.rows[i].atc_mw);
        CHECK(ra.rows[i].param == rb.rows[i].param);
    }
    CHECK(ra.all_converged());

    StudyConfig one_farm = cfg;
    one_farm.farms.pop_back();
    StudyRunner c(one_farm);
    CHECK_THROWS_AS(c.run_correlation_sweep(), ConfigError);
}

TEST_CASE("capacity sweep records every attempt and detects saturation") {
    StudyConfig cfg = small_config();
    StudyRunner runner(cfg);
    StudyResult r = runner.run_capacity_sweep({0.0, 40.0, 80.0});
    CHECK(r.rows.size() == 3 * 24);
    CHECK(r.all_converged());
    // a flat sweep saturates immediately
    StudyResult flat = runner.run_capacity_sweep({10.0, 10.0, 10.0});
    REQUIRE(flat.saturation_capacity_mw.has_value());
    CHECK(*flat.saturation_capacity_mw == doctest::Approx(10.0));
}

TEST_CASE("integration method study validates the replacement bus") {
    StudyConfig cfg = small_config();
    StudyRunner runner(cfg);
    StudyResult r = runner.run_integration_method_study();
    CHECK(r.rows.size() == 2 * cfg.method_hours.size());
    CHECK(r.all_converged());

    StudyConfig bad = cfg;
    bad.method_sending_bus = 4;  // no generator there
    StudyRunner rb(bad);
    CHECK_THROWS_AS(rb.run_integration_method_study(), ConfigError);

    StudyConfig greedy = cfg;
    greedy.method_replacement_mw = 5000.0;
    StudyRunner rg(greedy);
    CHECK_THROWS_AS(rg.run_integration_method_study(), ConfigError);
}
