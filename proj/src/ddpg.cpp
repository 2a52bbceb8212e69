#include "uavsim/ddpg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace uavsim {

ReplayBuffer::ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
    if (capacity == 0)
        throw std::invalid_argument("ReplayBuffer: capacity must be > 0");
    data_.reserve(capacity);
}

void ReplayBuffer::store(const Transition& t) {
    if (data_.size() < capacity_) {
        data_.push_back(t);
        return;
    }
    data_[cursor_] = t;
    cursor_ = (cursor_ + 1) % capacity_;
}

std::vector<Transition> ReplayBuffer::sample(int batch_size, Rng& rng) const {
    if (!full())
        throw std::logic_error("ReplayBuffer: sampling before the buffer is full");
    if (batch_size <= 0)
        throw std::invalid_argument("ReplayBuffer: batch_size must be > 0");
    std::vector<Transition> batch;
    batch.reserve(static_cast<std::size_t>(batch_size));
    for (int i = 0; i < batch_size; ++i)
        batch.push_back(data_[rng.uniform_index(data_.size())]);
    return batch;
}

void ReplayBuffer::restore(std::vector<Transition> data, std::size_t cursor) {
    if (data.size() > capacity_)
        throw std::invalid_argument("ReplayBuffer: restored content exceeds capacity");
    if (cursor >= capacity_ && !(cursor == 0 && capacity_ > 0))
        throw std::invalid_argument("ReplayBuffer: restored cursor out of range");
    data_ = std::move(data);
    cursor_ = cursor;
}

double NoiseSchedule::stddev() const { return std::sqrt(epsilon * sigma2); }

void NoiseSchedule::step() { epsilon = std::max(floor, epsilon * decay); }

void NoiseSchedule::validate() const {
    if (sigma2 <= 0) throw std::invalid_argument("NoiseSchedule: sigma2 must be > 0");
    if (epsilon <= 0 || epsilon > 1)
        throw std::invalid_argument("NoiseSchedule: epsilon must be in (0, 1]");
    if (decay <= 0 || decay > 1)
        throw std::invalid_argument("NoiseSchedule: decay must be in (0, 1]");
    if (floor <= 0 || floor > 1)
        throw std::invalid_argument("NoiseSchedule: floor must be in (0, 1]");
}

double scalarize(const RewardVector& r, const WeightVector& w) {
    return w.w_dc * r.r_dc + w.w_eh * r.r_eh + w.w_ec * r.r_ec + w.w_aux * r.r_aux;
}

void Hyper::validate() const {
    if (gamma < 0 || gamma > 1)
        throw std::invalid_argument("Hyper: gamma must be in [0, 1]");
    if (tau <= 0 || tau > 1) throw std::invalid_argument("Hyper: tau must be in (0, 1]");
    if (replay_capacity == 0)
        throw std::invalid_argument("Hyper: replay_capacity must be > 0");
    if (batch_size <= 0) throw std::invalid_argument("Hyper: batch_size must be > 0");
    if (lr_actor <= 0) throw std::invalid_argument("Hyper: lr_actor must be > 0");
    if (lr_critic <= 0) throw std::invalid_argument("Hyper: lr_critic must be > 0");
    if (actor_hidden.empty())
        throw std::invalid_argument("Hyper: actor_hidden must be non-empty");
    if (critic_hidden.empty())
        throw std::invalid_argument("Hyper: critic_hidden must be non-empty");
    for (int h : actor_hidden)
        if (h <= 0) throw std::invalid_argument("Hyper: actor_hidden sizes must be > 0");
    for (int h : critic_hidden)
        if (h <= 0) throw std::invalid_argument("Hyper: critic_hidden sizes must be > 0");
    if (episodes <= 0) throw std::invalid_argument("Hyper: episodes must be > 0");
    if (checkpoint_every <= 0)
        throw std::invalid_argument("Hyper: checkpoint_every must be > 0");
    noise.validate();
}

std::array<double, kActionDim> actor_head(const std::vector<double>& raw) {
    if (raw.size() != kActionDim)
        throw std::invalid_argument("actor_head: expected 2 raw outputs");
    return {1.0 / (1.0 + std::exp(-raw[0])), std::tanh(raw[1])};
}

Vec2 head_to_env(const std::array<double, kActionDim>& head, double v_max) {
    const double v = head[0] * v_max;
    const double theta = head[1] * M_PI;
    return {v * std::cos(theta), v * std::sin(theta)};
}

AgentBundle AgentBundle::create(const Hyper& hyper, Rng& rng) {
    hyper.validate();
    std::vector<int> actor_sizes{kObsDim};
    actor_sizes.insert(actor_sizes.end(), hyper.actor_hidden.begin(),
                       hyper.actor_hidden.end());
    actor_sizes.push_back(kActionDim);
    std::vector<Act> actor_acts(hyper.actor_hidden.size(), Act::relu);
    actor_acts.push_back(Act::linear);

    std::vector<int> critic_sizes{kObsDim + kActionDim};
    critic_sizes.insert(critic_sizes.end(), hyper.critic_hidden.begin(),
                        hyper.critic_hidden.end());
    critic_sizes.push_back(1);
    std::vector<Act> critic_acts(hyper.critic_hidden.size(), Act::relu);
    critic_acts.push_back(Act::linear);

    AgentBundle bundle;
    bundle.actor = Mlp::init(actor_sizes, actor_acts, rng);
    bundle.critic = Mlp::init(critic_sizes, critic_acts, rng);
    bundle.target_actor = bundle.actor;
    bundle.target_critic = bundle.critic;
    bundle.actor_opt = AdamState::create(bundle.actor, hyper.lr_actor);
    bundle.critic_opt = AdamState::create(bundle.critic, hyper.lr_critic);
    bundle.gamma = hyper.gamma;
    bundle.tau = hyper.tau;
    return bundle;
}

ActionChoice select_action(const Mlp& actor, const std::array<double, kObsDim>& obs,
                           NoiseSchedule& noise, Rng& rng, bool explore,
                           double v_max) {
    const std::vector<double> raw =
        actor.predict(std::vector<double>(obs.begin(), obs.end()));
    std::array<double, kActionDim> head = actor_head(raw);
    if (explore) {
        const double sd = noise.stddev();
        head[0] = std::clamp(head[0] + rng.gaussian(0.0, sd), 0.0, 1.0);
        head[1] = std::clamp(head[1] + rng.gaussian(0.0, sd), -1.0, 1.0);
        noise.step();
    }
    return {head_to_env(head, v_max), head};
}

std::vector<double> critic_input(const std::array<double, kObsDim>& obs,
                                 const std::array<double, kActionDim>& action) {
    std::vector<double> in;
    in.reserve(kObsDim + kActionDim);
    in.insert(in.end(), obs.begin(), obs.end());
    in.insert(in.end(), action.begin(), action.end());
    return in;
}

std::vector<double> critic_target_values(const std::vector<Transition>& batch,
                                         const AgentBundle& bundle,
                                         const WeightVector& w) {
    if (batch.empty())
        throw std::invalid_argument("critic_target_values: empty batch");
    std::vector<double> ys;
    ys.reserve(batch.size());
    for (const Transition& t : batch) {
        double y = scalarize(t.reward, w);
        if (!t.done) {
            const std::vector<double> raw = bundle.target_actor.predict(
                std::vector<double>(t.next_obs.begin(), t.next_obs.end()));
            const std::array<double, kActionDim> head = actor_head(raw);
            const double q =
                bundle.target_critic.predict(critic_input(t.next_obs, head))[0];
            y += bundle.gamma * q;
        }
        ys.push_back(y);
    }
    return ys;
}

double update_critic(AgentBundle& bundle, const std::vector<Transition>& batch,
                     const WeightVector& w) {
    if (batch.empty()) throw std::invalid_argument("update_critic: empty batch");
    const std::vector<double> ys = critic_target_values(batch, bundle, w);
    Grads grads = bundle.critic.zero_grads();
    double loss = 0.0;
    for (std::size_t i = 0; i < batch.size(); ++i) {
        const double q =
            bundle.critic.forward(critic_input(batch[i].obs, batch[i].action))[0];
        const double residual = q - ys[i];
        loss += residual * residual;
        auto [g, dx] = bundle.critic.backward({2.0 * residual});
        grads.accumulate(g);
    }
    const double n = static_cast<double>(batch.size());
    loss /= n;
    if (!std::isfinite(loss))
        throw std::runtime_error("update_critic: non-finite loss");
    grads.scale(1.0 / n);
    optimizer_step(bundle.critic, grads, bundle.critic_opt);
    return loss;
}

double update_actor(AgentBundle& bundle, const std::vector<Transition>& batch) {
    if (batch.empty()) throw std::invalid_argument("update_actor: empty batch");
    Grads grads = bundle.actor.zero_grads();
    double objective = 0.0;
    for (const Transition& t : batch) {
        const std::vector<double> raw =
            bundle.actor.forward(std::vector<double>(t.obs.begin(), t.obs.end()));
        const std::array<double, kActionDim> head = actor_head(raw);
        const double q = bundle.critic.forward(critic_input(t.obs, head))[0];
        objective += q;
        auto [cg, dx] = bundle.critic.backward({1.0});
        // Chain dQ/d(head) through the squashing head into raw actor space.
        const double du = dx[kObsDim + 0] * head[0] * (1.0 - head[0]);
        const double dphi = dx[kObsDim + 1] * (1.0 - head[1] * head[1]);
        auto [ag, dobs] = bundle.actor.backward({du, dphi});
        grads.accumulate(ag);
    }
    const double n = static_cast<double>(batch.size());
    objective /= n;
    if (!std::isfinite(objective))
        throw std::runtime_error("update_actor: non-finite objective");
    grads.scale(-1.0 / n); // ascend the objective
    optimizer_step(bundle.actor, grads, bundle.actor_opt);
    return objective;
}

void soft_update(const Mlp& main, Mlp& target, double tau) {
    if (main.layers.size() != target.layers.size())
        throw std::invalid_argument("soft_update: layer count mismatch");
    for (std::size_t l = 0; l < main.layers.size(); ++l) {
        const Layer& src = main.layers[l];
        Layer& dst = target.layers[l];
        if (src.w.size() != dst.w.size() || src.b.size() != dst.b.size())
            throw std::invalid_argument("soft_update: shape mismatch at layer " +
                                        std::to_string(l));
        for (std::size_t i = 0; i < src.w.size(); ++i)
            dst.w[i] = tau * src.w[i] + (1.0 - tau) * dst.w[i];
        for (std::size_t i = 0; i < src.b.size(); ++i)
            dst.b[i] = tau * src.b[i] + (1.0 - tau) * dst.b[i];
    }
}

} // namespace uavsim
