// gsgd: configuration-driven runner for nonsmooth stochastic gradient
// experiments. Subcommands: run, counterexample, validate, sweep.

#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "gsgd/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Generalized SGD laboratory for nonsmooth stochastic optimization"};
    app.require_subcommand(1);

    std::string config_path;

    CLI::App* cmd_run = app.add_subcommand("run", "Run one experiment from a JSON config");
    cmd_run->add_option("config", config_path, "Path to the experiment config")->required();

    double eps0 = 0.2;
    double eta0 = 0.3;
    std::size_t horizon = 10000;
    CLI::App* cmd_counter = app.add_subcommand(
        "counterexample", "Reproduce the signSGD non-convergence trajectory");
    cmd_counter->add_option("--eps0", eps0, "Initial diagonal coordinate, in (0, 1/3)")
        ->capture_default_str();
    cmd_counter->add_option("--eta0", eta0, "Stepsize scale, <= 1/3")->capture_default_str();
    cmd_counter->add_option("--K", horizon, "Number of iterations")->capture_default_str();

    CLI::App* cmd_validate =
        app.add_subcommand("validate", "Check the stepsize schedule assumptions of a config");
    cmd_validate->add_option("config", config_path, "Path to the experiment config")->required();

    CLI::App* cmd_sweep =
        app.add_subcommand("sweep", "Run the (seed, c) grid of the config's sweep block");
    cmd_sweep->add_option("config", config_path, "Path to the experiment config")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (cmd_run->parsed()) return gsgd::cli::cmd_run(config_path, std::cout);
        if (cmd_counter->parsed()) {
            return gsgd::cli::cmd_counterexample(eps0, eta0, horizon, std::cout);
        }
        if (cmd_validate->parsed()) return gsgd::cli::cmd_validate(config_path, std::cout);
        if (cmd_sweep->parsed()) return gsgd::cli::cmd_sweep(config_path, std::cout);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return gsgd::cli::kExitConfigError;
    }
    return gsgd::cli::kExitConfigError;
}
