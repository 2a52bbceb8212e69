#pragma once

#include <utility>
#include <vector>

#include "uavsim/rng.hpp"
#include "uavsim/vec2.hpp"

namespace uavsim {

// One IoT device on the ground plane.
struct DeviceState {
    int id = 0;
    Vec2 pos{0.0, 0.0};
    long long buffer = 0;       // packets queued, 0..l_max
    double rate = 0.0;          // Poisson arrival expectation, packets/s
    bool mobile = false;
    long long dropped_last_step = 0;
};

struct WorldConfig {
    int num_devices = 100;
    double area_side = 400.0;   // square region [0, area_side]^2, m
    long long l_max = 5000;     // buffer capacity, packets
    double q_bits = 1e7;        // upload size of a full buffer, bits
    double dt = 1.0;            // update interval, s
    std::vector<double> rate_choices{4.0, 8.0, 15.0, 20.0};
    int num_mobile = 30;
    double mobility_step = 2.0; // max per-axis displacement per update, m
    int mobility_grid = 21;     // candidate offsets per axis

    void validate() const;      // throws std::invalid_argument
};

struct World {
    std::vector<DeviceState> devices;
    WorldConfig config;
};

// Per-device accounting for one data-generation step.
struct OverflowReport {
    std::vector<long long> arrived;
    std::vector<long long> dropped;
};

// Uniform placement, uniform rate choice per device, buffers zero,
// uniformly chosen subset of num_mobile devices marked mobile.
World generate_world(const WorldConfig& config, Rng& rng);

// Adds a Poisson(rate * dt) sample to every buffer, clamped to l_max;
// excess packets are dropped and recorded. A device whose id equals
// exclude_id receives no arrivals this step (it is mid-upload).
OverflowReport step_data_generation(World& world, double dt, Rng& rng,
                                    int exclude_id = -1);

// Moves each mobile device by one offset drawn uniformly from the
// mobility_grid^2 candidates within +/- mobility_step per axis, then
// clamps to the area. Stationary devices are untouched.
void step_mobility(World& world, Rng& rng);

// Clamped buffer arithmetic: returns {new_buffer, dropped}.
std::pair<long long, long long> apply_arrival(long long buffer,
                                              long long arrivals,
                                              long long l_max);

// Bits waiting for upload: (buffer / l_max) * q_bits.
double upload_size(const DeviceState& device, const WorldConfig& config);

// Upload urgency: rate * (buffer / l_max).
double upload_priority(const DeviceState& device, const WorldConfig& config);

// Id of the device with maximal upload_priority; ties go to the lowest id.
int select_target(const World& world);

// Empties the device's buffer; returns the number of packets removed.
long long clear_buffer(World& world, int id);

} // namespace uavsim
