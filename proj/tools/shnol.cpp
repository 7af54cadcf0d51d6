// shnol <command> --config <path> [--out <dir>] [--threads <k>]

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "shnol/config.hpp"
#include "shnol/experiment.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Spectral experiments for Jacobi operators"};
    std::string command;
    std::string config_path;
    std::string out_dir;
    std::size_t threads = 1;
    app.add_option("command", command, "solve | spectrum | classify | shnol | scan | perturb | wimp")
        ->required()
        ->check(CLI::IsMember({"solve", "spectrum", "classify", "shnol", "scan", "perturb", "wimp"}));
    app.add_option("--config", config_path, "experiment config (JSON)")->required();
    app.add_option("--out", out_dir, "output directory (overrides the config's \"output\")");
    app.add_option("--threads", threads, "worker count")->check(CLI::Range(1, 1024));
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : shnol::kExitError;
    }

    shnol::ExperimentConfig cfg;
    try {
        cfg = shnol::load_config(config_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return shnol::kExitError;
    }
    return shnol::run(cfg, shnol::parse_command(command), out_dir, threads);
}
