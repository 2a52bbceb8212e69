#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "uavsim/config.hpp"
#include "uavsim/trainer.hpp"

namespace uavsim {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;  // bad config file, key, or CLI value
inline constexpr int kExitRuntime = 3; // training/eval abort, I/O failure
inline constexpr int kExitPartial = 4; // sweep finished with failed runs

struct TrainOptions {
    std::string config_path;  // empty: built-in defaults
    std::optional<std::uint64_t> seed; // overrides the config seed
    std::string out_dir = ".";
    std::string resume_path;  // trainer state file to continue from
};

struct EvalOptions {
    std::string checkpoint_path;
    std::string config_path;
    int episodes = 10;
    std::optional<std::uint64_t> seed;
    std::string out_dir = ".";
    std::string trace_path;   // optional per-step episode trace CSV
};

struct CurvesOptions {
    std::string config_path;
    std::string out_dir = ".";
};

struct SweepOptions {
    std::string config_path;
    std::vector<std::string> presets{"sodr", "soec"};
    std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
    std::string out_dir = ".";
    int jobs = 1;
    int eval_episodes = 5;
};

int cmd_train(const TrainOptions& opt);
int cmd_eval(const EvalOptions& opt);
int cmd_curves(const CurvesOptions& opt);
int cmd_sweep(const SweepOptions& opt);
int cmd_gradcheck();

struct GradcheckReport {
    int nets = 0;
    long long params_checked = 0;
    double max_rel_err = 0.0;
    bool pass = false;
};

// Compares analytic backprop gradients against central finite differences
// over randomly shaped small networks. Deterministic per seed.
GradcheckReport run_gradcheck(std::uint64_t seed, int nets = 20);

// Shared formatting so tests can pin the exact file layout.
std::string training_log_header();
std::string format_episode_row(const EpisodeRow& row);
std::string eval_report_csv(const EvalReport& report);
std::string sweep_summary_header();

// "sodr" -> rate-heavy weights {100,1,1,1}; "soec" -> consumption-heavy
// {1,1,100,1}. Unknown names raise ConfigError.
WeightVector preset_weights(const std::string& name);

// "7" -> {7}; "1..5" -> {1,2,3,4,5}; "1,4,9" -> {1,4,9}.
std::vector<std::uint64_t> parse_seed_spec(const std::string& spec);

// Loads the config (or defaults when path is empty) and applies the seed
// override.
RunConfig resolve_config(const std::string& config_path,
                         std::optional<std::uint64_t> seed);

} // namespace uavsim
