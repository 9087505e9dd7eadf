// qpac: experiment harness for the quantum PAC learning simulator.
//
//   qpac <command> --config <path> [--seed N] [--out <path>] [--check]
//
// Exit codes: 0 success, 2 config error, 3 acceptance-threshold failure
// under --check.

#include <cstdint>
#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "qpac/harness.hpp"

namespace {

struct CommonOpts {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    bool check = false;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--config", opts.config_path, "JSON experiment config")->required();
    cmd->add_option("--seed", opts.seed, "override the master seed");
    cmd->add_option("--out", opts.out, "override the output base path");
    cmd->add_flag("--check", opts.check, "exit 3 when an acceptance threshold fails");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"quantum PAC learning experiments"};
    app.require_subcommand(1);

    const std::vector<std::pair<std::string, std::string>> commands = {
        {"grover-stats", "exact and empirical Grover search success statistics"},
        {"learn", "seeded PAC learning trials with JSON run reports"},
        {"scaling", "oracle-call scaling vs epsilon against a classical baseline"},
        {"reduction-check", "phase-oracle to sample-oracle circuit fidelity audit"},
        {"vc", "exact VC dimension with naive cross-check"},
        {"junta", "k-junta class: VC bounds plus learning trials"},
    };

    std::vector<CommonOpts> opts(commands.size());
    for (std::size_t i = 0; i < commands.size(); ++i)
        add_common(app.add_subcommand(commands[i].first, commands[i].second), opts[i]);

    CLI11_PARSE(app, argc, argv);

    for (std::size_t i = 0; i < commands.size(); ++i) {
        const auto* sub = app.get_subcommand(commands[i].first);
        if (!sub->parsed()) continue;
        try {
            qpac::ExperimentConfig config = qpac::load_config(opts[i].config_path, commands[i].first);
            if (opts[i].seed.has_value()) config.seed = *opts[i].seed;
            if (opts[i].out.has_value()) config.out = *opts[i].out;
            if (opts[i].check) config.check = true;
            return qpac::run_experiment(config);
        } catch (const std::invalid_argument& e) {
            std::cerr << "config error: " << e.what() << "\n";
            return 2;
        } catch (const std::exception& e) {
            std::cerr << "error: " << e.what() << "\n";
            return 1;
        }
    }
    return 2;
}
