#include "normlab/commands.hpp"
#include "normlab/config.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
    CLI::App app{"normlab: digit statistics of pseudo-polynomial concatenations"};
    app.require_subcommand(1, 1);

    std::string config_path;
    std::string out_dir = ".";
    unsigned workers = 0;
    for (const char* name : {"generate", "discrepancy", "sumdigits", "expsum", "verify"}) {
        auto* sub = app.add_subcommand(name);
        sub->add_option("--config", config_path, "experiment config file")->required();
        sub->add_option("--out", out_dir, "output directory");
        sub->add_option("--workers", workers, "worker threads (overrides the config)")->check(CLI::PositiveNumber);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    const std::string command = app.get_subcommands().front()->get_name();
    normlab::ExperimentConfig config;
    try {
        config = normlab::load_config(config_path);
        if (workers > 0) config.workers = workers;
        config.apply_environment();
    } catch (const std::exception& e) {
        std::cerr << "[normlab] error: " << e.what() << std::endl;
        return 2;
    }
    return normlab::run_command(command, config, out_dir, std::cerr);
}
