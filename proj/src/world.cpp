#include "uavsim/world.hpp"

#include <algorithm>
#include <stdexcept>

namespace uavsim {

void WorldConfig::validate() const {
    if (num_devices <= 0)
        throw std::invalid_argument("WorldConfig: num_devices must be > 0");
    if (area_side <= 0)
        throw std::invalid_argument("WorldConfig: area_side must be > 0");
    if (l_max <= 0)
        throw std::invalid_argument("WorldConfig: l_max must be > 0");
    if (q_bits <= 0)
        throw std::invalid_argument("WorldConfig: q_bits must be > 0");
    if (dt <= 0)
        throw std::invalid_argument("WorldConfig: dt must be > 0");
    if (rate_choices.empty())
        throw std::invalid_argument("WorldConfig: rate_choices must be non-empty");
    for (double r : rate_choices)
        if (r <= 0)
            throw std::invalid_argument("WorldConfig: rate_choices must be > 0");
    if (num_mobile < 0 || num_mobile > num_devices)
        throw std::invalid_argument("WorldConfig: num_mobile must be in [0, num_devices]");
    if (mobility_step < 0)
        throw std::invalid_argument("WorldConfig: mobility_step must be >= 0");
    if (mobility_grid < 1)
        throw std::invalid_argument("WorldConfig: mobility_grid must be >= 1");
}

World generate_world(const WorldConfig& config, Rng& rng) {
    config.validate();
    World world;
    world.config = config;
    world.devices.resize(static_cast<std::size_t>(config.num_devices));
    for (int j = 0; j < config.num_devices; ++j) {
        DeviceState& dev = world.devices[static_cast<std::size_t>(j)];
        dev.id = j;
        dev.pos.x = rng.uniform(0.0, config.area_side);
        dev.pos.y = rng.uniform(0.0, config.area_side);
        dev.rate = config.rate_choices[rng.uniform_index(config.rate_choices.size())];
    }
    // Partial Fisher-Yates over the id range picks the mobile subset uniformly.
    std::vector<int> ids(static_cast<std::size_t>(config.num_devices));
    for (int j = 0; j < config.num_devices; ++j) ids[static_cast<std::size_t>(j)] = j;
    for (int k = 0; k < config.num_mobile; ++k) {
        const std::size_t pick =
            static_cast<std::size_t>(k) +
            rng.uniform_index(static_cast<std::size_t>(config.num_devices - k));
        std::swap(ids[static_cast<std::size_t>(k)], ids[pick]);
        world.devices[static_cast<std::size_t>(ids[static_cast<std::size_t>(k)])].mobile = true;
    }
    return world;
}

std::pair<long long, long long> apply_arrival(long long buffer, long long arrivals,
                                              long long l_max) {
    const long long unclamped = buffer + arrivals;
    if (unclamped > l_max) return {l_max, unclamped - l_max};
    return {unclamped, 0};
}

OverflowReport step_data_generation(World& world, double dt, Rng& rng,
                                    int exclude_id) {
    if (dt <= 0) throw std::invalid_argument("step_data_generation: dt must be > 0");
    OverflowReport report;
    report.arrived.resize(world.devices.size(), 0);
    report.dropped.resize(world.devices.size(), 0);
    for (std::size_t j = 0; j < world.devices.size(); ++j) {
        DeviceState& dev = world.devices[j];
        if (dev.id == exclude_id) {
            dev.dropped_last_step = 0;
            continue;
        }
        const long long arrivals = rng.poisson(dev.rate * dt);
        const auto [next, dropped] = apply_arrival(dev.buffer, arrivals, world.config.l_max);
        dev.buffer = next;
        dev.dropped_last_step = dropped;
        report.arrived[j] = arrivals;
        report.dropped[j] = dropped;
    }
    return report;
}

void step_mobility(World& world, Rng& rng) {
    const WorldConfig& cfg = world.config;
    for (DeviceState& dev : world.devices) {
        if (!dev.mobile) continue;
        double ox = 0.0;
        double oy = 0.0;
        if (cfg.mobility_grid > 1) {
            const std::size_t grid = static_cast<std::size_t>(cfg.mobility_grid);
            const std::size_t pick = rng.uniform_index(grid * grid);
            const double spacing = 2.0 * cfg.mobility_step / (cfg.mobility_grid - 1);
            ox = -cfg.mobility_step + static_cast<double>(pick % grid) * spacing;
            oy = -cfg.mobility_step + static_cast<double>(pick / grid) * spacing;
        }
        dev.pos.x = std::clamp(dev.pos.x + ox, 0.0, cfg.area_side);
        dev.pos.y = std::clamp(dev.pos.y + oy, 0.0, cfg.area_side);
    }
}

double upload_size(const DeviceState& device, const WorldConfig& config) {
    return (static_cast<double>(device.buffer) / static_cast<double>(config.l_max)) *
           config.q_bits;
}

double upload_priority(const DeviceState& device, const WorldConfig& config) {
    return device.rate *
           (static_cast<double>(device.buffer) / static_cast<double>(config.l_max));
}

int select_target(const World& world) {
    if (world.devices.empty())
        throw std::invalid_argument("select_target: world has no devices");
    int best = world.devices.front().id;
    double best_priority = upload_priority(world.devices.front(), world.config);
    for (std::size_t j = 1; j < world.devices.size(); ++j) {
        const double p = upload_priority(world.devices[j], world.config);
        if (p > best_priority) {
            best_priority = p;
            best = world.devices[j].id;
        }
    }
    return best;
}

long long clear_buffer(World& world, int id) {
    for (DeviceState& dev : world.devices) {
        if (dev.id == id) {
            const long long removed = dev.buffer;
            dev.buffer = 0;
            return removed;
        }
    }
    throw std::invalid_argument("clear_buffer: no device with the given id");
}

} // namespace uavsim
