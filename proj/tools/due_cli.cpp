// due: run the benchmark, simulate a labelled dataset, or inspect a model.

#include "due/bench.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <iostream>

namespace {

std::string escape(std::string_view s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c == '\n' ? ' ' : c;
    }
    return out;
}

int fail(std::string_view kind, std::string_view message, int code) {
    std::cerr << fmt::format("error: kind={} message=\"{}\"\n", kind, escape(message));
    return code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Device usage estimation: activity-driven load disaggregation"};
    app.require_subcommand(1);

    std::string config;
    std::optional<std::uint64_t> seed;
    std::string out;

    auto* run = app.add_subcommand("run", "Disaggregate a dataset with DUE and/or CO and write reports");
    run->add_option("--config", config, "Run config file")->required();
    run->add_option("--seed", seed, "Override the config seed");
    run->add_option("--out", out, "Report directory (overrides the config)");

    auto* sim = app.add_subcommand("simulate", "Generate a labelled synthetic dataset");
    sim->add_option("--config", config, "Simulation config file")->required();
    sim->add_option("--seed", seed, "Override the config seed");
    sim->add_option("--out", out, "Output directory (overrides the config)");

    auto* inspect = app.add_subcommand("inspect-model", "Print activity model statistics");
    inspect->add_option("--config", config, "Config file naming the model source (model.* keys)")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return fail("config", e.what(), 2);
    }

    try {
        if (run->parsed()) {
            auto c = due::load_run_config(config);
            if (seed) c.engine.seed = *seed;
            if (!out.empty()) c.out = out;
            const auto outcome = due::cmd_run(c);
            for (const auto& w : outcome.warnings) std::cerr << "warning: " << w << '\n';
            for (const auto& r : outcome.reports) {
                std::cout << fmt::format("{}\toverall_est_acc\t{}\n", r.algorithm, due::format_score(r.overall_est_acc));
            }
            std::cout << "reports written to " << c.out.string() << '\n';
        } else if (sim->parsed()) {
            auto c = due::load_simulate_config(config);
            if (seed) c.simulation.seed = *seed;
            if (!out.empty()) c.out = out;
            const auto result = due::cmd_simulate(c);
            std::cout << fmt::format("simulated {} days, {} appliance pulses, into {}\n", c.simulation.days,
                                     result.pulses.size(), c.out.string());
        } else if (inspect->parsed()) {
            const auto kv = due::KeyValueFile::load(config);
            const auto model = due::read_model_source(kv, std::filesystem::path(config).parent_path()).build();
            due::describe_model(std::cout, model);
        }
    } catch (const due::ConfigError& e) {
        return fail("config", e.what(), 2);
    } catch (const due::DataError& e) {
        return fail("data", e.what(), 3);
    } catch (const due::InvariantError& e) {
        return fail("invariant", e.what(), 4);
    } catch (const std::filesystem::filesystem_error& e) {
        return fail("data", e.what(), 3);
    } catch (const std::exception& e) {
        return fail("invariant", e.what(), 4);
    }
    return 0;
}
