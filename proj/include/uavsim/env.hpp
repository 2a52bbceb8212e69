#pragma once

#include <array>
#include <optional>

#include "uavsim/channel.hpp"
#include "uavsim/power.hpp"
#include "uavsim/rng.hpp"
#include "uavsim/vec2.hpp"
#include "uavsim/world.hpp"

namespace uavsim {

struct EnvConfig {
    WorldConfig world;
    ChannelParams channel;
    PropulsionParams propulsion;
    EhParams eh;
    RadioParams radio;
    double mission_secs = 600.0;
    double v_max = 20.0;   // m/s
    double d_dc = 10.0;    // data-collection radius, m (horizontal)
    double d_eh = 30.0;    // energy-harvest radius, m (horizontal)

    void validate() const; // throws std::invalid_argument
};

using Observation = std::array<double, 6>;

struct RewardVector {
    double r_dc = 0.0;   // hover data rate, Mbit/s
    double r_eh = 0.0;   // harvested energy in uJ plus charged-device count
    double r_ec = 0.0;   // negative propulsion power, W
    double r_aux = 0.0;  // distance/violation/loss penalty, <= 0
};

struct HoverRecord {
    int target = -1;
    double rate_bps = 0.0;
    double upload_bits = 0.0;
    double hover_secs = 0.0;
    double harvested_j = 0.0;
    int devices_charged = 0;
};

struct StepOutcome {
    Observation observation{};
    RewardVector reward;
    bool done = false;
    std::optional<HoverRecord> hover;
    double flight_speed = 0.0;    // clipped commanded speed, m/s
    double flight_energy_j = 0.0; // propulsion energy of the flight segment
    double hover_energy_j = 0.0;  // propulsion energy of the hover segment
};

struct EpisodeMetrics {
    double r_sum_bps = 0.0;   // sum of per-hover rates
    double e_harvest_j = 0.0;
    double e_consume_j = 0.0;
    int hovers = 0;
};

// Episodic fly-hover-communicate environment. The UAV flies one update
// interval per step; when it ends a step within d_dc of the target it hovers,
// uploads the target buffer, and wirelessly charges all other devices within
// d_eh. Fully deterministic for a given seed.
class Env {
public:
    Env(const EnvConfig& config, std::uint64_t seed);

    Observation reset();
    Observation observe() const;
    StepOutcome step(Vec2 action);

    bool done() const { return done_; }
    double clock() const { return clock_; }
    int target() const { return target_; }
    int boundary_violations() const { return n_f_; }
    int devices_with_loss() const { return n_d_; }
    const World& world() const { return world_; }
    World& world_mutable() { return world_; }
    const Rng& rng() const { return rng_; }
    Rng& rng_mutable() { return rng_; }
    Vec2 uav() const { return uav_; }
    void set_uav_position(Vec2 p) { uav_ = p; }

    // Accumulated episode sums; only meaningful once done() is true.
    EpisodeMetrics metrics() const;

    const EnvConfig& config() const { return cfg_; }

private:
    void advance_world(double dt, int exclude_id);

    EnvConfig cfg_;
    Rng rng_;
    World world_;
    Vec2 uav_{0.0, 0.0};
    double clock_ = 0.0;
    int target_ = 0;
    int n_f_ = 0;
    int n_d_ = 0;
    bool done_ = false;
    bool has_world_ = false;
    EpisodeMetrics sums_;
};

} // namespace uavsim
