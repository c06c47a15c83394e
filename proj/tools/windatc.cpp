// windatc: batch ATC studies on a two-area network with wind farms.
//
// Exit codes: 0 all solves converged, 1 some solves failed, 2 config/IO error.

#include <cstdio>
#include <iostream>

#include <CLI11.hpp>

#include "windatc/report.hpp"
#include "windatc/study_runner.hpp"

namespace {

using namespace windatc;

struct Cli {
    std::string config_path;
    std::string out_dir;
    std::uint64_t seed = 0;
    bool seed_given = false;
    int resolution = 15;
    bool verbose = false;
};

void print_summary(const study::StudyResult& r, bool verbose) {
    int converged = 0;
    for (const auto& row : r.rows)
        if (row.status == "converged") ++converged;
    std::printf("%s: %d/%zu solves converged\n", r.name.c_str(), converged, r.rows.size());
    if (r.saturation_capacity_mw)
        std::printf("  saturation capacity: %g MW\n", *r.saturation_capacity_mw);
    if (verbose)
        for (const auto& row : r.rows)
            std::printf("  %-18s %-12s h=%-7g atc=%10.3f MW  %s (%d iters)\n",
                        row.study.c_str(), row.param.c_str(), row.hour, row.atc_mw,
                        row.status.c_str(), row.iterations);
}

int emit_and_score(const std::vector<study::StudyResult>& results, const Cli& cli) {
    bool any_rows = false, all_ok = true;
    for (const auto& r : results) {
        print_summary(r, cli.verbose);
        auto files = study::emit_outputs(r, cli.out_dir);
        if (cli.verbose)
            for (const auto& f : files) std::printf("  wrote %s\n", f.c_str());
        any_rows = any_rows || !r.rows.empty();
        all_ok = all_ok && r.all_converged();
    }
    return (any_rows && all_ok) ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"ATC studies for a two-area AC network with wind farms"};
    app.require_subcommand(1);

    Cli cli;
    app.add_option("--config", cli.config_path, "JSON study configuration file");
    app.add_option("--out", cli.out_dir, "output directory for CSV/SVG files");
    app.add_option("--seed", cli.seed, "scenario RNG seed")->each([&](const std::string&) {
        cli.seed_given = true;
    });
    app.add_option("--resolution", cli.resolution,
                   "time-series step in minutes (must divide 24 h)");
    app.add_flag("--verbose", cli.verbose, "print every result row");

    auto* correlation = app.add_subcommand("correlation", "sweep the inter-farm correlation");
    auto* capacity = app.add_subcommand("capacity", "sweep the installed wind capacity");
    auto* location = app.add_subcommand("location", "compare farm connection points");
    auto* method = app.add_subcommand("method", "compare generation-replacement scenarios");
    auto* timeseries = app.add_subcommand("timeseries", "ATC over a 24-hour load profile");
    auto* all = app.add_subcommand("all", "run every study family");
    for (auto* s : {correlation, capacity, location, method, timeseries, all})
        s->fallthrough();  // accept the global flags after the subcommand too

    CLI11_PARSE(app, argc, argv);

    try {
        study::StudyConfig cfg =
            cli.config_path.empty() ? study::default_config() : study::load_config(cli.config_path);
        if (cli.seed_given) cfg.seed = cli.seed;
        if (!cli.out_dir.empty()) cfg.output_dir = cli.out_dir;
        cli.out_dir = cfg.output_dir;

        study::StudyRunner runner(std::move(cfg));
        std::vector<study::StudyResult> results;
        if (correlation->parsed()) {
            results.push_back(runner.run_correlation_sweep());
        } else if (capacity->parsed()) {
            results.push_back(runner.run_capacity_sweep(runner.config().capacities_mw));
        } else if (location->parsed()) {
            results.push_back(runner.run_location_study(runner.config().location_pairs));
        } else if (method->parsed()) {
            results.push_back(runner.run_integration_method_study());
        } else if (timeseries->parsed()) {
            results.push_back(runner.run_time_series(cli.resolution));
        } else if (all->parsed()) {
            results = runner.run_all();
        }
        return emit_and_score(results, cli);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
