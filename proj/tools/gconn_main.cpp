#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "gconn/scenario.hpp"

int main(int argc, char** argv) {
    CLI::App app{"gconn: batch runner for generalized-connection scenarios"};

    std::string scenario_path;
    gconn::RunOverrides overrides;
    std::uint64_t seed = 0;
    std::uint64_t samples = 0;
    unsigned workers = 0;
    std::string out_path;

    app.add_option("--scenario", scenario_path, "scenario JSON file")->required();
    auto* seed_opt = app.add_option("--seed", seed, "override the Monte Carlo seed");
    auto* samples_opt = app.add_option("--samples", samples, "override the Monte Carlo sample count");
    auto* workers_opt = app.add_option("--workers", workers, "override the worker count");
    auto* out_opt = app.add_option("--out", out_path, "report destination (default: scenario's \"out\", else stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    if (*seed_opt) overrides.seed = seed;
    if (*samples_opt) overrides.samples = samples;
    if (*workers_opt) overrides.workers = workers;
    if (*out_opt) overrides.out_path = out_path;

    try {
        const gconn::RunOutcome outcome = gconn::run_scenario_file(scenario_path, overrides);
        if (outcome.out_path) {
            gconn::write_report_atomically(outcome.report, *outcome.out_path);
        } else {
            std::cout << outcome.report.dump(2) << "\n";
        }
        return outcome.exit_code;
    } catch (const gconn::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const gconn::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
