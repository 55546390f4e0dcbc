// alloyfreeze: desk-scale solver for regularized binary-alloy
// solidification with flow, plus the reproductive-solution driver.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "alloyfreeze/runner.hpp"

namespace {

std::string slurp(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw alloyfreeze::ConfigError("cannot open config file: " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"alloyfreeze: binary-alloy solidification with flow"};
    app.require_subcommand(1);

    std::string config_path, out_dir = ".";
    std::uint64_t seed = 0;
    bool seed_given = false;

    auto add_common = [&](CLI::App* sub, bool with_seed) {
        sub->add_option("--config", config_path, "path to run configuration")->required();
        sub->add_option("--out", out_dir, "output directory");
        if (with_seed)
            sub->add_option("--seed", seed, "seed for randomized initial guesses")
                ->each([&](const std::string&) { seed_given = true; });
    };
    CLI::App* sim = app.add_subcommand("simulate", "propagate and write time series");
    CLI::App* rep = app.add_subcommand("reproduce", "find a reproductive solution");
    CLI::App* swp = app.add_subcommand("sweep-eps", "eps continuation and scaling fit");
    CLI::App* chk = app.add_subcommand("check", "run diagnostics on a recorded trajectory");
    add_common(sim, true);
    add_common(rep, true);
    add_common(swp, true);
    add_common(chk, false);

    CLI11_PARSE(app, argc, argv);

    try {
        const alloyfreeze::RunConfig cfg = alloyfreeze::parse_config(slurp(config_path));
        const std::uint64_t s = seed_given ? seed : cfg.seed;
        if (sim->parsed()) return alloyfreeze::run_simulate(cfg, out_dir, s);
        if (rep->parsed()) return alloyfreeze::run_reproduce(cfg, out_dir, s);
        if (swp->parsed()) return alloyfreeze::run_sweep(cfg, out_dir, s);
        return alloyfreeze::run_check(cfg, out_dir);
    } catch (const alloyfreeze::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const alloyfreeze::SolverError& e) {
        std::cerr << "solver error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
