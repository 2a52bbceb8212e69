#include "uavsim/env.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace uavsim {

void EnvConfig::validate() const {
    world.validate();
    channel.validate();
    propulsion.validate();
    eh.validate();
    radio.validate();
    if (mission_secs <= 0)
        throw std::invalid_argument("EnvConfig: mission_secs must be > 0");
    if (v_max <= 0) throw std::invalid_argument("EnvConfig: v_max must be > 0");
    if (d_dc <= 0) throw std::invalid_argument("EnvConfig: d_dc must be > 0");
    if (d_dc > d_eh)
        throw std::invalid_argument("EnvConfig: d_dc must be <= d_eh");
}

Env::Env(const EnvConfig& config, std::uint64_t seed)
    : cfg_(config), rng_(Rng::derive_seed(seed, 0)) {
    cfg_.validate();
}

Observation Env::reset() {
    world_ = generate_world(cfg_.world, rng_);
    has_world_ = true;
    uav_.x = rng_.uniform(0.0, cfg_.world.area_side);
    uav_.y = rng_.uniform(0.0, cfg_.world.area_side);
    clock_ = 0.0;
    target_ = select_target(world_);
    n_f_ = 0;
    n_d_ = 0;
    done_ = false;
    sums_ = EpisodeMetrics{};
    return observe();
}

Observation Env::observe() const {
    if (!has_world_) throw std::logic_error("Env: observe before reset");
    const DeviceState& tgt = world_.devices[static_cast<std::size_t>(target_)];
    const double a = cfg_.world.area_side;
    return Observation{(tgt.pos.x - uav_.x) / a,
                       (tgt.pos.y - uav_.y) / a,
                       uav_.x / a,
                       uav_.y / a,
                       static_cast<double>(n_f_) / 10.0,
                       static_cast<double>(n_d_) / cfg_.world.num_devices};
}

void Env::advance_world(double dt, int exclude_id) {
    step_data_generation(world_, dt, rng_, exclude_id);
    step_mobility(world_, rng_);
    int losses = 0;
    for (const DeviceState& dev : world_.devices)
        if (dev.dropped_last_step > 0) ++losses;
    n_d_ = losses;
}

StepOutcome Env::step(Vec2 action) {
    if (!has_world_) throw std::logic_error("Env: step before reset");
    if (done_) throw std::logic_error("Env: step on a finished episode");

    const double dt = cfg_.world.dt;
    const double a = cfg_.world.area_side;
    StepOutcome out;

    // 1. Clip the commanded velocity, move, clamp to the area.
    const double speed = action.norm();
    if (speed > cfg_.v_max) {
        const double scale = cfg_.v_max / speed;
        action.x *= scale;
        action.y *= scale;
    }
    out.flight_speed = std::min(speed, cfg_.v_max);
    const Vec2 commanded{uav_.x + action.x * dt, uav_.y + action.y * dt};
    uav_.x = std::clamp(commanded.x, 0.0, a);
    uav_.y = std::clamp(commanded.y, 0.0, a);
    const bool violated = commanded.x != uav_.x || commanded.y != uav_.y;
    n_f_ = violated ? n_f_ + 1 : 0;
    clock_ += dt;

    // 2. World evolves during the flight segment.
    advance_world(dt, -1);

    // 3. Flight propulsion energy.
    const double p_flight = propulsion_power(out.flight_speed, cfg_.propulsion);
    out.flight_energy_j = p_flight * dt;
    sums_.e_consume_j += out.flight_energy_j;
    out.reward.r_ec = -p_flight;

    // 4. Hover when the target is inside the collection radius.
    const DeviceState& tgt = world_.devices[static_cast<std::size_t>(target_)];
    if (horizontal_distance(uav_, tgt.pos) <= cfg_.d_dc) {
        HoverRecord rec;
        rec.target = target_;
        const double gain = expected_channel_gain(uav_, tgt.pos, cfg_.channel);
        rec.rate_bps = data_rate(gain, cfg_.radio);
        rec.upload_bits = upload_size(tgt, cfg_.world);
        rec.hover_secs = hover_time(rec.upload_bits, rec.rate_bps);
        clear_buffer(world_, target_);

        // Non-target devices inside d_eh harvest for the whole hover,
        // evaluated at their positions when the hover begins.
        for (const DeviceState& dev : world_.devices) {
            if (dev.id == target_) continue;
            if (horizontal_distance(uav_, dev.pos) > cfg_.d_eh) continue;
            const double g = expected_channel_gain(uav_, dev.pos, cfg_.channel);
            const double p_r = received_power(g, cfg_.radio);
            rec.harvested_j += harvested_power(p_r, cfg_.eh) * rec.hover_secs;
            ++rec.devices_charged;
        }

        sums_.r_sum_bps += rec.rate_bps;
        sums_.e_harvest_j += rec.harvested_j;
        sums_.hovers += 1;

        const double p_hover = hover_power(cfg_.propulsion);
        out.hover_energy_j = p_hover * rec.hover_secs;
        sums_.e_consume_j += out.hover_energy_j;
        out.reward.r_ec = -p_hover;

        clock_ += rec.hover_secs;
        const int sub_steps = static_cast<int>(std::ceil(rec.hover_secs));
        for (int i = 0; i < sub_steps; ++i) advance_world(1.0, target_);

        out.reward.r_dc = rec.rate_bps / 1e6;
        out.reward.r_eh = rec.harvested_j * 1e6 + rec.devices_charged;
        out.hover = rec;

        target_ = select_target(world_);
    }

    // 6. Penalty references the freshly selected target.
    const DeviceState& next_tgt = world_.devices[static_cast<std::size_t>(target_)];
    out.reward.r_aux = -std::abs(next_tgt.pos.x - uav_.x) / a -
                       std::abs(next_tgt.pos.y - uav_.y) / a -
                       static_cast<double>(n_f_) - static_cast<double>(n_d_);

    done_ = clock_ >= cfg_.mission_secs;
    out.done = done_;
    out.observation = observe();
    return out;
}

EpisodeMetrics Env::metrics() const {
    if (!done_) throw std::logic_error("Env: metrics before the episode is done");
    return sums_;
}

} // namespace uavsim
