#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "uavsim/env.hpp"
#include "uavsim/mlp.hpp"
#include "uavsim/rng.hpp"
#include "uavsim/vec2.hpp"

namespace uavsim {

inline constexpr int kObsDim = 6;
inline constexpr int kActionDim = 2; // head-space: (u, phi)

// One replay record. The stored action is the post-noise, post-clip
// head-space pair (u in [0,1], phi in [-1,1]) the critic consumes.
struct Transition {
    std::array<double, kObsDim> obs{};
    std::array<double, kActionDim> action{};
    RewardVector reward;
    std::array<double, kObsDim> next_obs{};
    bool done = false;
};

// Fixed-capacity FIFO ring. Sampling is gated until the buffer is full.
class ReplayBuffer {
public:
    explicit ReplayBuffer(std::size_t capacity);

    void store(const Transition& t);
    bool full() const { return data_.size() == capacity_; }
    std::size_t size() const { return data_.size(); }
    std::size_t capacity() const { return capacity_; }

    // batch_size transitions drawn uniformly with replacement.
    std::vector<Transition> sample(int batch_size, Rng& rng) const;

    const std::vector<Transition>& data() const { return data_; }
    std::size_t cursor() const { return cursor_; }
    void restore(std::vector<Transition> data, std::size_t cursor);

private:
    std::size_t capacity_;
    std::vector<Transition> data_;
    std::size_t cursor_ = 0; // next overwrite position once full
};

// Exploration noise N(0, epsilon * sigma2), epsilon decaying
// multiplicatively per action selection down to a floor.
struct NoiseSchedule {
    double sigma2 = 2.0;
    double epsilon = 0.9999;
    double decay = 0.9999;
    double floor = 0.01;

    double stddev() const;
    void step();
    void validate() const;
};

struct WeightVector {
    double w_dc = 1.0;
    double w_eh = 1.0;
    double w_ec = 1.0;
    double w_aux = 1.0;
};

double scalarize(const RewardVector& r, const WeightVector& w);

struct Hyper {
    double gamma = 0.99;
    double tau = 0.005;
    std::size_t replay_capacity = 10000;
    int batch_size = 64;
    double lr_actor = 1e-3;
    double lr_critic = 1e-3;
    std::vector<int> actor_hidden{400, 300, 300, 300};
    std::vector<int> critic_hidden{400, 300};
    NoiseSchedule noise;
    int episodes = 1600;
    int checkpoint_every = 100;

    void validate() const;
};

// Actor raw outputs are linear; the head squashes them to the ranges the
// velocity/heading mapping expects: u = sigmoid(raw0), phi = tanh(raw1).
std::array<double, kActionDim> actor_head(const std::vector<double>& raw);

// (u, phi) -> velocity vector: speed u*v_max, heading phi*pi.
Vec2 head_to_env(const std::array<double, kActionDim>& head, double v_max);

struct AgentBundle {
    Mlp actor;
    Mlp critic;
    Mlp target_actor;
    Mlp target_critic;
    AdamState actor_opt;
    AdamState critic_opt;
    double gamma = 0.99;
    double tau = 0.005;

    static AgentBundle create(const Hyper& hyper, Rng& rng);
};

struct ActionChoice {
    Vec2 env_action;
    std::array<double, kActionDim> head; // what gets stored/replayed
};

// Deterministic policy output, optionally perturbed by exploration noise in
// head space (then clipped back to the head ranges). Noise decays once per
// exploring call.
ActionChoice select_action(const Mlp& actor, const std::array<double, kObsDim>& obs,
                           NoiseSchedule& noise, Rng& rng, bool explore,
                           double v_max);

std::vector<double> critic_input(const std::array<double, kObsDim>& obs,
                                 const std::array<double, kActionDim>& action);

// y_i = scalarize(r_i) + gamma * (1 - done_i) * Q'(s', mu'(s')).
std::vector<double> critic_target_values(const std::vector<Transition>& batch,
                                         const AgentBundle& bundle,
                                         const WeightVector& w);

// One mean-squared-error step on the critic; returns the pre-step loss.
double update_critic(AgentBundle& bundle, const std::vector<Transition>& batch,
                     const WeightVector& w);

// One ascent step on mean Q(s, mu(s)); critic parameters untouched.
// Returns the pre-step objective.
double update_actor(AgentBundle& bundle, const std::vector<Transition>& batch);

// target <- tau * main + (1 - tau) * target.
void soft_update(const Mlp& main, Mlp& target, double tau);

} // namespace uavsim
