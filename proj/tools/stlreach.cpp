#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "stlreach/commands.hpp"
#include "stlreach/scenario.hpp"

namespace {

struct Flags {
    std::string config;
    std::string out;
    int max_iters = 0;
    double min_width = 0.0;
    std::string mode;
    std::string export_format;
};

void add_run_flags(CLI::App* cmd, Flags& f) {
    cmd->add_option("--config", f.config, "scenario JSON")->required()->check(CLI::ExistingFile);
    cmd->add_option("--out", f.out, "output directory (overrides the config)");
    cmd->add_option("--max-iters", f.max_iters, "iteration cap")->check(CLI::PositiveNumber);
    cmd->add_option("--min-width", f.min_width, "smallest segment width worth bisecting [s]")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--mode", f.mode, "verdict at t=0 or whole-window monitoring")
        ->check(CLI::IsMember({"verdict", "monitor"}));
    cmd->add_option("--export", f.export_format, "tube export format")->check(CLI::IsMember({"json", "csv", "both"}));
}

stlreach::RunOptions to_options(const Flags& f) {
    stlreach::RunOptions o;
    o.config_path = f.config;
    if (!f.out.empty()) {
        o.out_dir = f.out;
    }
    if (f.max_iters > 0) {
        o.max_iterations = f.max_iters;
    }
    if (f.min_width > 0.0) {
        o.min_width = f.min_width;
    }
    if (!f.mode.empty()) {
        o.mode = stlreach::parse_mode(f.mode);
    }
    if (!f.export_format.empty()) {
        o.export_format = f.export_format;
    }
    return o;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"STL verification over validated reachable tubes"};
    app.require_subcommand(1);

    Flags verify_flags;
    auto* verify = app.add_subcommand("verify", "adaptive verification of the configured formula");
    add_run_flags(verify, verify_flags);

    Flags sim_flags;
    auto* simulate = app.add_subcommand("simulate", "compute and export the tube only");
    add_run_flags(simulate, sim_flags);

    stlreach::EvalSignalOptions eval_opts;
    std::string eval_out;
    double eval_horizon = 0.0;
    auto* eval = app.add_subcommand("eval-signal", "evaluate a formula over piecewise-constant signals");
    eval->add_option("--signals", eval_opts.signals_path, "JSON object: predicate -> signal pieces")
        ->required()
        ->check(CLI::ExistingFile);
    eval->add_option("--formula", eval_opts.formula, "formula text")->required();
    eval->add_option("--horizon", eval_horizon, "evaluation horizon [s]")->check(CLI::PositiveNumber);
    eval->add_option("--out", eval_out, "write the root signal here instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : stlreach::exit_code::kConfigError;
    }

    if (*verify) {
        return stlreach::cmd_verify(to_options(verify_flags), std::cout, std::cerr);
    }
    if (*simulate) {
        return stlreach::cmd_simulate(to_options(sim_flags), std::cout, std::cerr);
    }
    if (eval_horizon > 0.0) {
        eval_opts.horizon = eval_horizon;
    }
    if (!eval_out.empty()) {
        eval_opts.out_path = eval_out;
    }
    return stlreach::cmd_eval_signal(eval_opts, std::cout, std::cerr);
}
