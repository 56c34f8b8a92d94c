// rbnlab: experiment front end. Parses an optional config file plus flags
// (flags override the file), runs one subcommand, writes its CSV.
//
// Exit codes: 0 success, 2 validation/usage failure, 3 enumeration budget refusal.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "rbn/config.hpp"
#include "rbn/lattice.hpp"
#include "rbn/runners.hpp"

namespace {

int fail_usage(const std::string& msg) {
    std::cerr << msg << "\n";
    std::cerr << "usage: rbnlab <subcommand> [--config FILE] [--seed U64] [--workers N] [--out PATH] [key flags]\n";
    std::cerr << "subcommands:";
    for (const char* name : rbn::kSubcommands) std::cerr << " " << name;
    std::cerr << "\n";
    return 2;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"rbnlab: stochastic-convolution / singular-drift numerics laboratory"};
    app.require_subcommand(1);
    app.allow_extras(false);

    std::string config_file;
    rbn::ExperimentConfig cfg;

    std::vector<CLI::App*> subs;
    for (const char* name : rbn::kSubcommands) subs.push_back(app.add_subcommand(name));

    for (CLI::App* sub : subs) {
        sub->add_option("--config", config_file, "key=value config file");
        sub->add_option("--seed", cfg.seed);
        sub->add_option("--workers", cfg.workers);
        sub->add_option("--out", cfg.out, "output CSV path (default stdout)");
        sub->add_option("--eigenvalues", cfg.eigenvalues)->delimiter(',');
        sub->add_option("--lambda_alpha", cfg.lambda_alpha);
        sub->add_option("--dim", cfg.dim);
        sub->add_option("--gamma", cfg.gamma);
        sub->add_option("--drift", cfg.drift);
        sub->add_option("--drift_scale", cfg.drift_scale);
        sub->add_option("--sign_a0", cfg.sign_a0);
        sub->add_option("--sign_a1", cfg.sign_a1);
        sub->add_option("--cell_resolution", cfg.cell_resolution);
        sub->add_option("--salt", cfg.salt);
        sub->add_option("--horizon", cfg.horizon);
        sub->add_option("--grid_steps", cfg.grid_steps);
        sub->add_option("--replicas", cfg.replicas);
        sub->add_option("--budget", cfg.budget);
        sub->add_option("--quadrature_min", cfg.quadrature_min);
        sub->add_option("--tolerance", cfg.tolerance);
        sub->add_option("--max_iterations", cfg.max_iterations);
        sub->add_option("--damping", cfg.damping);
        sub->add_option("--beta_a", cfg.beta_a);
        sub->add_option("--n_min", cfg.n_min);
        sub->add_option("--n_max", cfg.n_max);
        sub->add_option("--points", cfg.points);
        sub->add_option("--r", cfg.r);
        sub->add_option("--m", cfg.m);
        sub->add_option("--scale", cfg.scale);
        sub->add_option("--K", cfg.K);
        sub->add_option("--beta0", cfg.beta0);
        sub->add_option("--steps", cfg.steps);
        sub->add_option("--p", cfg.p);
        sub->add_option("--walk_length", cfg.walk_length);
        sub->add_option("--family", cfg.family);
        sub->add_option("--C", cfg.C);
        sub->add_option("--chain_n", cfg.chain_n);
        sub->add_option("--chain_k", cfg.chain_k);
        sub->add_option("--chain_r", cfg.chain_r);
        sub->add_option("--paths", cfg.paths);
        sub->add_option("--inits", cfg.inits);
        sub->add_option("--x0", cfg.x0)->delimiter(',');
    }

    // Two-pass parse so the config file loads first and flags override it.
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help
        std::stringstream ss;
        ss << "argument error: " << e.what();
        return fail_usage(ss.str());
    }

    if (!config_file.empty()) {
        std::ifstream in(config_file);
        if (!in) return fail_usage("cannot open config file: " + config_file);
        std::stringstream buffer;
        buffer << in.rdbuf();
        rbn::ParseOutcome outcome = rbn::parse_config(buffer.str());
        if (!outcome.config) {
            for (const std::string& msg : outcome.errors) std::cerr << "config error: " << msg << "\n";
            return 2;
        }
        cfg = *outcome.config;
        try {
            app.clear();
            app.parse(argc, argv); // flags override file values
        } catch (const CLI::ParseError& e) {
            std::stringstream ss;
            ss << "argument error: " << e.what();
            return fail_usage(ss.str());
        }
    }

    const std::vector<std::string> errors = rbn::validate_config(cfg);
    if (!errors.empty()) {
        for (const std::string& msg : errors) std::cerr << "config error: " << msg << "\n";
        return 2;
    }

    const std::string subcommand = app.get_subcommands().front()->get_name();
    std::string csv;
    try {
        csv = rbn::run_subcommand(subcommand, cfg);
    } catch (const rbn::BudgetExceeded& e) {
        std::cerr << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    if (cfg.out.empty()) {
        std::cout << csv;
    } else {
        std::ofstream out(cfg.out);
        if (!out) return fail_usage("cannot write output file: " + cfg.out);
        out << csv;
    }
    return 0;
}
