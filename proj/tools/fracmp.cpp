// Command-line front end: solve | verify | converge, each driven by a flat
// key-value config file with optional overrides.

#include <CLI11.hpp>
#include <cstdint>
#include <iostream>
#include <string>

#include "fracmp/config.hpp"
#include "fracmp/runner.hpp"

namespace {

struct CommonArgs {
    std::string config_path;
    std::string out_dir;
    std::int64_t seed = -1;
    double tol = -1.0;
};

void add_common(CLI::App* sub, CommonArgs& args) {
    sub->add_option("--config", args.config_path, "Path to the run configuration file")->required();
    sub->add_option("--out", args.out_dir, "Override output directory");
    sub->add_option("--seed", args.seed, "Override RNG seed");
    sub->add_option("--tol", args.tol, "Override gradient tolerance");
}

int load_and_run(const CommonArgs& args, int (*run)(const fracmp::RunConfig&)) {
    fracmp::RunConfig cfg;
    try {
        cfg = fracmp::load_config(args.config_path);
        if (!args.out_dir.empty()) cfg.output_dir = args.out_dir;
        if (args.seed >= 0) cfg.seed = static_cast<std::uint64_t>(args.seed);
        if (args.tol > 0.0) cfg.tol_grad = args.tol;
    } catch (const std::exception& ex) {
        std::cerr << "validation error: " << ex.what() << "\n";
        return 1;
    }
    return run(cfg);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Mixed fractional p-Laplacian boundary value problems: energy, identities, mountain pass"};
    app.require_subcommand(1);

    CommonArgs solve_args, verify_args, converge_args;
    CLI::App* solve = app.add_subcommand("solve", "Compute a critical point (mountain-pass or convex mode)");
    add_common(solve, solve_args);
    CLI::App* verify = app.add_subcommand("verify", "Run the property battery and print a pass/fail table");
    add_common(verify, verify_args);
    CLI::App* converge = app.add_subcommand("converge", "Run a grid-refinement study and fit the rate");
    add_common(converge, converge_args);

    CLI11_PARSE(app, argc, argv);

    if (solve->parsed()) return load_and_run(solve_args, fracmp::cmd_solve);
    if (verify->parsed()) return load_and_run(verify_args, fracmp::cmd_verify);
    return load_and_run(converge_args, fracmp::cmd_converge);
}
