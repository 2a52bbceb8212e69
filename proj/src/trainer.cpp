#include "uavsim/trainer.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace uavsim {

namespace {

void write_rng_line(std::ostream& os, const char* tag, const Rng& rng) {
    os << tag << ' ' << rng.save_state() << '\n';
}

void read_rng_line(std::istream& is, const char* tag, Rng& rng) {
    std::string got;
    if (!(is >> got) || got != tag)
        throw std::runtime_error(std::string("Trainer::load_state: expected '") + tag + "'");
    std::string state;
    std::getline(is, state);
    if (!state.empty() && state.front() == ' ') state.erase(0, 1);
    rng.load_state(state);
}

double mean_of(const std::vector<double>& xs) {
    double s = 0.0;
    for (double x : xs) s += x;
    return xs.empty() ? 0.0 : s / static_cast<double>(xs.size());
}

double std_of(const std::vector<double>& xs, double mean) {
    if (xs.empty()) return 0.0;
    double s = 0.0;
    for (double x : xs) s += (x - mean) * (x - mean);
    return std::sqrt(s / static_cast<double>(xs.size()));
}

} // namespace

Trainer::Trainer(const EnvConfig& env_cfg, const Hyper& hyper,
                 const WeightVector& w, std::uint64_t seed)
    : env_cfg_(env_cfg),
      hyper_(hyper),
      w_(w),
      env_(env_cfg, seed),
      bundle_(),
      buffer_(hyper.replay_capacity),
      noise_(hyper.noise),
      noise_rng_(Rng::derive_seed(seed, 2)),
      sample_rng_(Rng::derive_seed(seed, 3)) {
    hyper_.validate();
    Rng init_rng(Rng::derive_seed(seed, 1));
    bundle_ = AgentBundle::create(hyper_, init_rng);
}

EpisodeRow Trainer::run_episode() {
    std::array<double, kObsDim> obs = env_.reset();
    double ep_return = 0.0;
    double critic_loss_sum = 0.0;
    double actor_obj_sum = 0.0;
    int updates = 0;
    int step_idx = 0;

    while (!env_.done()) {
        ++step_idx;
        const ActionChoice choice = select_action(bundle_.actor, obs, noise_,
                                                  noise_rng_, true, env_cfg_.v_max);
        StepOutcome out;
        try {
            out = env_.step(choice.env_action);
        } catch (const std::exception& e) {
            throw std::runtime_error("episode " + std::to_string(episode_ + 1) +
                                     " step " + std::to_string(step_idx) + ": " + e.what());
        }

        Transition t;
        t.obs = obs;
        t.action = choice.head;
        t.reward = out.reward;
        t.next_obs = out.observation;
        t.done = out.done;
        buffer_.store(t);
        ep_return += scalarize(out.reward, w_);

        if (buffer_.full()) {
            try {
                const std::vector<Transition> batch =
                    buffer_.sample(hyper_.batch_size, sample_rng_);
                critic_loss_sum += update_critic(bundle_, batch, w_);
                actor_obj_sum += update_actor(bundle_, batch);
                soft_update(bundle_.actor, bundle_.target_actor, bundle_.tau);
                soft_update(bundle_.critic, bundle_.target_critic, bundle_.tau);
                ++updates;
            } catch (const std::exception& e) {
                throw std::runtime_error("episode " + std::to_string(episode_ + 1) +
                                         " step " + std::to_string(step_idx) +
                                         " update: " + e.what());
            }
        }
        obs = out.observation;
    }

    ++episode_;
    const EpisodeMetrics m = env_.metrics();
    EpisodeRow row;
    row.episode = episode_;
    row.ret = ep_return;
    row.r_sum_mbit = m.r_sum_bps / 1e6;
    row.e_harvest_uj = m.e_harvest_j * 1e6;
    row.e_consume_j = m.e_consume_j;
    row.critic_loss = updates > 0 ? critic_loss_sum / updates : 0.0;
    row.actor_obj = updates > 0 ? actor_obj_sum / updates : 0.0;
    row.epsilon = noise_.epsilon;
    return row;
}

void Trainer::save_state(std::ostream& os) const {
    os << "trainer_state\n";
    os << "episode " << episode_ << '\n';
    os << "epsilon " << std::setprecision(17) << noise_.epsilon << '\n';
    write_rng_line(os, "env_rng", env_.rng());
    write_rng_line(os, "noise_rng", noise_rng_);
    write_rng_line(os, "sample_rng", sample_rng_);
    bundle_.actor.save(os);
    bundle_.critic.save(os);
    bundle_.target_actor.save(os);
    bundle_.target_critic.save(os);
    bundle_.actor_opt.save_state(os);
    bundle_.critic_opt.save_state(os);
    os << "replay " << buffer_.size() << ' ' << buffer_.cursor() << '\n';
    os << std::setprecision(17);
    for (const Transition& t : buffer_.data()) {
        for (double x : t.obs) os << x << ' ';
        for (double x : t.action) os << x << ' ';
        os << t.reward.r_dc << ' ' << t.reward.r_eh << ' ' << t.reward.r_ec << ' '
           << t.reward.r_aux << ' ';
        for (double x : t.next_obs) os << x << ' ';
        os << (t.done ? 1 : 0) << '\n';
    }
}

void Trainer::save_state(const std::string& path) const {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("Trainer::save_state: cannot open " + path);
    save_state(os);
    if (!os) throw std::runtime_error("Trainer::save_state: write failed for " + path);
}

void Trainer::load_state(std::istream& is) {
    std::string tag;
    if (!(is >> tag) || tag != "trainer_state")
        throw std::runtime_error("Trainer::load_state: missing header");
    if (!(is >> tag) || tag != "episode" || !(is >> episode_))
        throw std::runtime_error("Trainer::load_state: missing episode counter");
    if (!(is >> tag) || tag != "epsilon" || !(is >> noise_.epsilon))
        throw std::runtime_error("Trainer::load_state: missing epsilon");
    read_rng_line(is, "env_rng", env_.rng_mutable());
    read_rng_line(is, "noise_rng", noise_rng_);
    read_rng_line(is, "sample_rng", sample_rng_);
    Mlp actor = Mlp::load(is);
    Mlp critic = Mlp::load(is);
    Mlp target_actor = Mlp::load(is);
    Mlp target_critic = Mlp::load(is);
    if (actor.sizes() != bundle_.actor.sizes() ||
        critic.sizes() != bundle_.critic.sizes())
        throw std::runtime_error("Trainer::load_state: network topology mismatch");
    bundle_.actor = std::move(actor);
    bundle_.critic = std::move(critic);
    bundle_.target_actor = std::move(target_actor);
    bundle_.target_critic = std::move(target_critic);
    bundle_.actor_opt.load_state(is);
    bundle_.critic_opt.load_state(is);
    std::size_t size = 0;
    std::size_t cursor = 0;
    if (!(is >> tag) || tag != "replay" || !(is >> size >> cursor))
        throw std::runtime_error("Trainer::load_state: missing replay header");
    std::vector<Transition> data(size);
    for (Transition& t : data) {
        for (double& x : t.obs)
            if (!(is >> x)) throw std::runtime_error("Trainer::load_state: truncated replay");
        for (double& x : t.action)
            if (!(is >> x)) throw std::runtime_error("Trainer::load_state: truncated replay");
        if (!(is >> t.reward.r_dc >> t.reward.r_eh >> t.reward.r_ec >> t.reward.r_aux))
            throw std::runtime_error("Trainer::load_state: truncated replay");
        for (double& x : t.next_obs)
            if (!(is >> x)) throw std::runtime_error("Trainer::load_state: truncated replay");
        int done_flag = 0;
        if (!(is >> done_flag))
            throw std::runtime_error("Trainer::load_state: truncated replay");
        t.done = done_flag != 0;
    }
    buffer_.restore(std::move(data), cursor);
}

void Trainer::load_state(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("Trainer::load_state: cannot open " + path);
    load_state(is);
}

TrainingLog train(const EnvConfig& env_cfg, const Hyper& hyper,
                  const WeightVector& w, std::uint64_t seed) {
    Trainer trainer(env_cfg, hyper, w, seed);
    TrainingLog log;
    log.rows.reserve(static_cast<std::size_t>(hyper.episodes));
    for (int e = 0; e < hyper.episodes; ++e) log.rows.push_back(trainer.run_episode());
    return log;
}

EvalReport evaluate(const Mlp& actor, const EnvConfig& env_cfg, int episodes,
                    std::uint64_t seed, std::ostream* trace) {
    if (episodes <= 0)
        throw std::invalid_argument("evaluate: episodes must be > 0");
    const std::vector<int> s = actor.sizes();
    if (s.empty() || s.front() != kObsDim || s.back() != kActionDim)
        throw std::runtime_error(
            "evaluate: actor topology mismatch (need " + std::to_string(kObsDim) +
            " inputs and " + std::to_string(kActionDim) + " outputs)");

    Env env(env_cfg, seed);
    NoiseSchedule silent; // unused when explore = false
    Rng unused_rng(0);
    if (trace)
        *trace << "step,clock,uav_x,uav_y,target,event,r_dc,r_eh,r_ec,r_aux\n";

    EvalReport report;
    for (int e = 1; e <= episodes; ++e) {
        std::array<double, kObsDim> obs = env.reset();
        int step_idx = 0;
        while (!env.done()) {
            ++step_idx;
            const ActionChoice choice =
                select_action(actor, obs, silent, unused_rng, false, env_cfg.v_max);
            const StepOutcome out = env.step(choice.env_action);
            if (trace) {
                *trace << std::setprecision(12) << step_idx << ',' << env.clock() << ','
                       << env.uav().x << ',' << env.uav().y << ',' << env.target() << ','
                       << (out.hover ? "hover" : "fly") << ',' << out.reward.r_dc << ','
                       << out.reward.r_eh << ',' << out.reward.r_ec << ','
                       << out.reward.r_aux << '\n';
            }
            obs = out.observation;
        }
        const EpisodeMetrics m = env.metrics();
        EvalEpisode row;
        row.episode = e;
        row.avg_rate_mbps =
            m.hovers > 0 ? m.r_sum_bps / 1e6 / static_cast<double>(m.hovers) : 0.0;
        row.avg_power_w = m.e_consume_j / env_cfg.mission_secs;
        row.harvested_uj = m.e_harvest_j * 1e6;
        row.hovers = m.hovers;
        report.episodes.push_back(row);
    }

    std::vector<double> rates, powers, harvests, hovers;
    for (const EvalEpisode& row : report.episodes) {
        rates.push_back(row.avg_rate_mbps);
        powers.push_back(row.avg_power_w);
        harvests.push_back(row.harvested_uj);
        hovers.push_back(static_cast<double>(row.hovers));
    }
    report.mean_rate_mbps = mean_of(rates);
    report.std_rate_mbps = std_of(rates, report.mean_rate_mbps);
    report.mean_power_w = mean_of(powers);
    report.std_power_w = std_of(powers, report.mean_power_w);
    report.mean_harvested_uj = mean_of(harvests);
    report.std_harvested_uj = std_of(harvests, report.mean_harvested_uj);
    report.mean_hovers = mean_of(hovers);
    report.std_hovers = std_of(hovers, report.mean_hovers);
    return report;
}

} // namespace uavsim
