#include <cstdint>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "uavsim/harness.hpp"

namespace {

std::vector<std::string> split_csv(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    std::string tok;
    while (std::getline(in, tok, ','))
        if (!tok.empty()) out.push_back(tok);
    return out;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"UAV base-station simulator and multi-objective DDPG trainer"};
    app.require_subcommand(1);

    uavsim::TrainOptions train_opt;
    std::uint64_t train_seed = 0;
    CLI::App* train = app.add_subcommand("train", "Train a policy and log per-episode metrics");
    train->add_option("--config", train_opt.config_path, "Config file (defaults when omitted)");
    CLI::Option* train_seed_opt = train->add_option("--seed", train_seed, "Seed override");
    train->add_option("--out", train_opt.out_dir, "Output directory")->capture_default_str();
    train->add_option("--resume", train_opt.resume_path, "Trainer state file to continue from");

    uavsim::EvalOptions eval_opt;
    std::uint64_t eval_seed = 0;
    CLI::App* eval = app.add_subcommand("eval", "Evaluate a saved actor without exploration noise");
    eval->add_option("--checkpoint", eval_opt.checkpoint_path, "Actor checkpoint file")->required();
    eval->add_option("--config", eval_opt.config_path, "Config file (defaults when omitted)");
    eval->add_option("--episodes", eval_opt.episodes, "Evaluation episodes")->capture_default_str();
    CLI::Option* eval_seed_opt = eval->add_option("--seed", eval_seed, "Seed override");
    eval->add_option("--out", eval_opt.out_dir, "Output directory")->capture_default_str();
    eval->add_option("--trace", eval_opt.trace_path, "Optional per-step trace CSV path");

    uavsim::CurvesOptions curves_opt;
    CLI::App* curves = app.add_subcommand("curves", "Emit propulsion/harvesting/LoS curve CSVs");
    curves->add_option("--config", curves_opt.config_path, "Config file (defaults when omitted)");
    curves->add_option("--out", curves_opt.out_dir, "Output directory")->capture_default_str();

    uavsim::SweepOptions sweep_opt;
    std::string preset_spec = "sodr,soec";
    std::string seed_spec = "1..5";
    CLI::App* sweep = app.add_subcommand("sweep", "Train and evaluate preset weightings over seeds");
    sweep->add_option("--config", sweep_opt.config_path, "Config file (defaults when omitted)");
    sweep->add_option("--preset", preset_spec, "Comma-separated presets (sodr, soec)")->capture_default_str();
    sweep->add_option("--seeds", seed_spec, "Seeds: N, lo..hi, or comma list")->capture_default_str();
    sweep->add_option("--out", sweep_opt.out_dir, "Output directory")->capture_default_str();
    sweep->add_option("--jobs", sweep_opt.jobs, "Parallel worker count")->capture_default_str();
    sweep->add_option("--eval-episodes", sweep_opt.eval_episodes, "Episodes per final evaluation")
        ->capture_default_str();

    CLI::App* gradcheck = app.add_subcommand("gradcheck", "Finite-difference check of the network gradients");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : uavsim::kExitConfig;
    }

    if (train->parsed()) {
        if (train_seed_opt->count() > 0) train_opt.seed = train_seed;
        return uavsim::cmd_train(train_opt);
    }
    if (eval->parsed()) {
        if (eval_seed_opt->count() > 0) eval_opt.seed = eval_seed;
        return uavsim::cmd_eval(eval_opt);
    }
    if (curves->parsed()) return uavsim::cmd_curves(curves_opt);
    if (sweep->parsed()) {
        try {
            sweep_opt.presets = split_csv(preset_spec);
            sweep_opt.seeds = uavsim::parse_seed_spec(seed_spec);
        } catch (const uavsim::ConfigError& e) {
            std::cerr << "config error: " << e.what() << '\n';
            return uavsim::kExitConfig;
        }
        return uavsim::cmd_sweep(sweep_opt);
    }
    if (gradcheck->parsed()) return uavsim::cmd_gradcheck();
    return uavsim::kExitConfig;
}
