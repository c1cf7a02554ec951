#include "hawkes/commands.hpp"
#include "hawkes/config.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
    using namespace hawkes::cli;

    CLI::App app{"Hawkes processes with signed kernels: simulation, renewal detection and estimation"};
    app.require_subcommand(1);

    struct Flags {
        std::string config;
        std::optional<std::uint64_t> seed;
        std::optional<std::size_t> replicas;
        std::optional<std::size_t> first_replica;
        std::optional<std::string> out;
    };
    Flags flags;

    const std::map<std::string, std::string> help{
        {"simulate", "simulate Hawkes paths (events.csv)"},
        {"cluster-stats", "sample clusters and compare the length tail with its bound"},
        {"queue-tail", "Laplace transforms of the M/G/inf first return with a Monte Carlo check"},
        {"renewal-stats", "renewal times of the window process and their exponential moments"},
        {"estimate", "ratio estimator with CLT interval from renewal cycles"},
        {"ci", "CLT interval, Bernstein radius and full concentration bound"},
    };
    for (const auto& name : command_names()) {
        auto* sub = app.add_subcommand(name, help.at(name));
        sub->add_option("-c,--config", flags.config, "JSON configuration file")->required()->check(CLI::ExistingFile);
        sub->add_option("--seed", flags.seed, "master seed (overrides the config)");
        sub->add_option("--replicas", flags.replicas, "number of replicas (overrides the config)");
        sub->add_option("--first-replica", flags.first_replica, "index of the first replica, for split runs");
        sub->add_option("--out", flags.out, "output directory (default $HAWKES_OUT_DIR or ./hawkes_out)");
    }

    CLI11_PARSE(app, argc, argv);
    const std::string command = app.get_subcommands().front()->get_name();

    RunConfig config;
    try {
        config = load_config(flags.config);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_validation;
    }
    if (flags.seed) {
        config.seed = *flags.seed;
    }
    if (flags.replicas) {
        config.replicas = *flags.replicas;
    }
    if (flags.first_replica) {
        config.first_replica = *flags.first_replica;
    }
    const auto out = resolve_out_dir(flags.out);
    const int code = run(command, config, out, std::cerr);
    if (code == exit_ok) {
        std::cout << "wrote " << command << " output to " << out.string() << '\n';
    }
    return code;
}
