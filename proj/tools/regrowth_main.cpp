#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "regrowth/commands.hpp"
#include "regrowth/errors.hpp"

int main(int argc, char** argv) {
    CLI::App app{"regrowth - regional growth estimation and forecasting pipeline"};
    app.require_subcommand(1);

    std::string config_path;
    std::string scenario = "baseline";
    std::string out_dir;
    std::uint64_t seed = 0;
    bool seed_given = false;
    int threads = 0;

    auto add_common = [&](CLI::App* sub, bool with_scenario) {
        sub->add_option("--config", config_path, "run configuration file (JSON)")
            ->required()
            ->envname("REGROWTH_CONFIG");
        sub->add_option("--out", out_dir, "output directory override")
            ->envname("REGROWTH_OUT");
        sub->add_option("--seed", seed, "random seed override")
            ->envname("REGROWTH_SEED")
            ->each([&](const std::string&) { seed_given = true; });
        sub->add_option("--threads", threads, "worker thread override")
            ->envname("REGROWTH_THREADS");
        if (with_scenario) {
            sub->add_option("--scenario", scenario, "scenario name from the config");
        }
    };

    CLI::App* c_ingest = app.add_subcommand("ingest", "validate and summarize the panel");
    CLI::App* c_estimate =
        app.add_subcommand("estimate", "long-run, growth and auxiliary estimation");
    CLI::App* c_forecast = app.add_subcommand("forecast", "out-of-sample growth forecasts");
    CLI::App* c_decompose =
        app.add_subcommand("decompose", "growth decomposition for a forecast scenario");
    CLI::App* c_report = app.add_subcommand("report", "funding-share summary table");
    CLI::App* c_simulate = app.add_subcommand("simulate", "Monte Carlo estimator checks");
    add_common(c_ingest, false);
    add_common(c_estimate, false);
    add_common(c_forecast, true);
    add_common(c_decompose, true);
    add_common(c_report, false);
    add_common(c_simulate, false);

    CLI11_PARSE(app, argc, argv);

    try {
        regrowth::RunConfig cfg = regrowth::RunConfig::from_file(config_path);
        if (!out_dir.empty()) cfg.output_dir = out_dir;
        if (seed_given) cfg.seed = seed;
        if (threads > 0) cfg.threads = threads;

        if (c_ingest->parsed()) return regrowth::cmd_ingest(cfg);
        if (c_estimate->parsed()) return regrowth::cmd_estimate(cfg);
        if (c_forecast->parsed()) return regrowth::cmd_forecast(cfg, scenario);
        if (c_decompose->parsed()) return regrowth::cmd_decompose(cfg, scenario);
        if (c_report->parsed()) return regrowth::cmd_report(cfg);
        if (c_simulate->parsed()) return regrowth::cmd_simulate(cfg);
    } catch (const regrowth::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
