#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "uavsim/ddpg.hpp"
#include "uavsim/env.hpp"

namespace uavsim {

// Malformed or out-of-range configuration input. The CLI maps this to its
// config-error exit code.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A full run description in schema units (dBm, dB, microwatts where noted).
// Field names match the config-file keys one-to-one; env()/hyper()/weights()
// derive the SI-unit structs the simulator consumes.
struct RunConfig {
    // world
    int devices = 100;
    double area_side = 400.0;          // m
    long long buffer_capacity = 5000;  // packets
    double upload_bits = 1e7;          // bits at a full buffer
    double update_interval = 1.0;      // s
    std::vector<double> rate_choices{4.0, 8.0, 15.0, 20.0}; // packets/s
    int mobile_devices = 30;
    double mobility_step = 2.0;        // m
    int mobility_grid = 21;

    // channel
    double gamma0_db = -30.0;          // reference gain at 1 m, dB
    double path_loss_exponent = 2.3;
    double mu_nlos = 0.2;
    double los_a = 10.0;
    double los_b = 0.6;
    double altitude = 10.0;            // m

    // propulsion
    double blade_power = 79.86;        // W
    double induced_power = 88.63;      // W
    double tip_speed = 120.0;          // m/s
    double induced_velocity = 4.03;    // m/s
    double drag_ratio = 0.6;
    double air_density = 1.225;        // kg/m^3
    double rotor_solidity = 0.05;
    double rotor_area = 0.503;         // m^2

    // energy harvesting
    double eh_p_limit_uw = 9.079;      // uW
    double eh_c = 47083.0;             // 1/W
    double eh_d_uw = 2.9;              // uW

    // radio
    double p_downlink_dbm = 40.0;
    double p_uplink_dbm = -20.0;
    double noise_dbm = -90.0;
    double bandwidth = 1e6;            // Hz

    // mission
    double mission_secs = 600.0;
    double v_max = 20.0;               // m/s
    double d_dc = 10.0;                // m
    double d_eh = 30.0;                // m

    // training
    int episodes = 1600;
    double gamma = 0.99;
    double tau = 0.005;
    long long replay_capacity = 10000;
    int batch_size = 64;
    double lr_actor = 1e-3;
    double lr_critic = 1e-3;
    std::vector<int> actor_hidden{400, 300, 300, 300};
    std::vector<int> critic_hidden{400, 300};
    double noise_sigma2 = 2.0;
    double noise_epsilon0 = 0.9999;
    double noise_decay = 0.9999;
    double noise_floor = 0.01;
    int checkpoint_every = 100;

    // reward preference weights
    double w_dc = 1.0;
    double w_eh = 1.0;
    double w_ec = 1.0;
    double w_aux = 1.0;

    std::uint64_t seed = 1;

    EnvConfig env() const;
    Hyper hyper() const;
    WeightVector weights() const;

    void validate() const; // throws ConfigError naming the offending key
};

double dbm_to_watts(double dbm);
double db_to_linear(double db);

// Parses the flat key=value schema ('#' starts a comment). Unknown keys,
// unparsable values, and out-of-range values raise ConfigError naming the key.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

// Fully resolved, reloadable manifest of a run.
std::string manifest_text(const RunConfig& cfg);
void save_manifest(const RunConfig& cfg, const std::string& path);

} // namespace uavsim
