#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "uavsim/config.hpp"
#include "uavsim/ddpg.hpp"
#include "uavsim/env.hpp"

namespace uavsim {

// One training-log line. Losses are means over the episode's network
// updates, zero while the replay gate is still closed.
struct EpisodeRow {
    int episode = 0;        // 1-based, continuous across resumes
    double ret = 0.0;       // undiscounted sum of scalarized rewards
    double r_sum_mbit = 0.0;
    double e_harvest_uj = 0.0;
    double e_consume_j = 0.0;
    double critic_loss = 0.0;
    double actor_obj = 0.0;
    double epsilon = 0.0;   // exploration epsilon after the episode
};

struct TrainingLog {
    std::vector<EpisodeRow> rows;
};

// Runs the training loop: one noisy episode at a time, with critic/actor
// updates and soft target updates on every step once the replay memory is
// full. Fully deterministic per seed; snapshot/restore covers everything the
// loop consumes so a resumed run continues bit-for-bit.
class Trainer {
public:
    Trainer(const EnvConfig& env_cfg, const Hyper& hyper, const WeightVector& w,
            std::uint64_t seed);

    EpisodeRow run_episode();

    int episodes_done() const { return episode_; }
    const AgentBundle& bundle() const { return bundle_; }
    const Mlp& actor() const { return bundle_.actor; }
    const ReplayBuffer& buffer() const { return buffer_; }
    double epsilon() const { return noise_.epsilon; }

    void save_state(std::ostream& os) const;
    void save_state(const std::string& path) const;
    void load_state(std::istream& is);
    void load_state(const std::string& path);

private:
    EnvConfig env_cfg_;
    Hyper hyper_;
    WeightVector w_;
    Env env_;
    AgentBundle bundle_;
    ReplayBuffer buffer_;
    NoiseSchedule noise_;
    Rng noise_rng_;
    Rng sample_rng_;
    int episode_ = 0;
};

// Convenience wrapper: M episodes, no file I/O.
TrainingLog train(const EnvConfig& env_cfg, const Hyper& hyper,
                  const WeightVector& w, std::uint64_t seed);

struct EvalEpisode {
    int episode = 0;
    double avg_rate_mbps = 0.0; // mean hover rate, 0 when no hover happened
    double avg_power_w = 0.0;   // consumed energy over the nominal mission time
    double harvested_uj = 0.0;
    int hovers = 0;
};

struct EvalReport {
    std::vector<EvalEpisode> episodes;
    double mean_rate_mbps = 0.0;
    double std_rate_mbps = 0.0;
    double mean_power_w = 0.0;
    double std_power_w = 0.0;
    double mean_harvested_uj = 0.0;
    double std_harvested_uj = 0.0;
    double mean_hovers = 0.0;
    double std_hovers = 0.0;
};

// Noise-free rollouts of a fixed policy. `trace`, when non-null, receives
// one CSV row per step: step, clock, uav_x, uav_y, target, event, r_dc,
// r_eh, r_ec, r_aux.
EvalReport evaluate(const Mlp& actor, const EnvConfig& env_cfg, int episodes,
                    std::uint64_t seed, std::ostream* trace = nullptr);

} // namespace uavsim
