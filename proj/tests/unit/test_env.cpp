#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "uavsim/env.hpp"

using namespace uavsim;

namespace {

EnvConfig quiet_config() {
    EnvConfig cfg;
    cfg.world.num_devices = 5;
    cfg.world.num_mobile = 0;
    cfg.world.area_side = 400.0;
    cfg.mission_secs = 60.0;
    return cfg;
}

// Immobilizes and silences every device so steps are fully predictable,
// then parks them away from a corner-based test stage.
void freeze_world(Env& env) {
    for (DeviceState& d : env.world_mutable().devices) {
        d.rate = 0.0;
        d.mobile = false;
        d.buffer = 0;
        d.pos = {350.0, 350.0};
    }
}

} // namespace

TEST_CASE("reset is deterministic per seed") {
    const EnvConfig cfg = quiet_config();
    Env a(cfg, 42);
    Env b(cfg, 42);
    const Observation oa = a.reset();
    const Observation ob = b.reset();
    for (int i = 0; i < 6; ++i) CHECK(oa[static_cast<std::size_t>(i)] == ob[static_cast<std::size_t>(i)]);
    for (std::size_t i = 0; i < a.world().devices.size(); ++i) {
        CHECK(a.world().devices[i].pos.x == b.world().devices[i].pos.x);
        CHECK(a.world().devices[i].rate == b.world().devices[i].rate);
    }
    Env c(cfg, 43);
    const Observation oc = c.reset();
    CHECK(oa[2] != oc[2]);
}

TEST_CASE("observation encodes normalized offsets and position") {
    Env env(quiet_config(), 7);
    env.reset();
    freeze_world(env);
    env.world_mutable().devices[0].pos = {140.0, 130.0};
    env.set_uav_position({100.0, 150.0});
    REQUIRE(env.target() == 0); // all priorities tie at zero, lowest id wins
    const Observation obs = env.observe();
    CHECK(obs[0] == doctest::Approx(0.1).epsilon(1e-15));
    CHECK(obs[1] == doctest::Approx(-0.05).epsilon(1e-15));
    CHECK(obs[2] == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(obs[3] == doctest::Approx(0.375).epsilon(1e-15));
    CHECK(obs[4] == 0.0);
    CHECK(obs[5] == 0.0);
}

TEST_CASE("holding position far from the target costs hover-level power") {
    Env env(quiet_config(), 7);
    env.reset();
    freeze_world(env);
    env.set_uav_position({50.0, 50.0});
    const StepOutcome out = env.step({0.0, 0.0});
    CHECK(out.flight_speed == 0.0);
    CHECK(out.reward.r_ec == -168.49);
    CHECK(out.reward.r_dc == 0.0);
    CHECK(out.reward.r_eh == 0.0);
    CHECK(!out.hover.has_value());
    CHECK(out.flight_energy_j == 168.49);
    CHECK(out.hover_energy_j == 0.0);
}

TEST_CASE("commanded velocity is norm-clipped") {
    Env env(quiet_config(), 7);
    env.reset();
    freeze_world(env);
    env.set_uav_position({200.0, 200.0});
    const StepOutcome out = env.step({30.0, 40.0});
    CHECK(out.flight_speed == 20.0);
    CHECK(env.uav().x == doctest::Approx(212.0).epsilon(1e-15));
    CHECK(env.uav().y == doctest::Approx(216.0).epsilon(1e-15));
}

TEST_CASE("boundary violations count consecutively and reset") {
    Env env(quiet_config(), 7);
    env.reset();
    freeze_world(env);
    env.set_uav_position({0.0, 100.0});
    StepOutcome out = env.step({-5.0, 0.0});
    CHECK(env.boundary_violations() == 1);
    CHECK(env.uav().x == 0.0);
    CHECK(out.observation[4] == doctest::Approx(0.1).epsilon(1e-15));
    out = env.step({-5.0, 0.0});
    CHECK(env.boundary_violations() == 2);
    out = env.step({5.0, 0.0});
    CHECK(env.boundary_violations() == 0);
    CHECK(out.observation[4] == 0.0);
}

TEST_CASE("distance penalty references the target offset") {
    Env env(quiet_config(), 7);
    env.reset();
    freeze_world(env);
    env.world_mutable().devices[0].pos = {300.0, 340.0};
    env.set_uav_position({100.0, 100.0});
    const StepOutcome out = env.step({0.0, 0.0});
    // offsets 200 and 240 over a 400 m side
    CHECK(out.reward.r_aux == doctest::Approx(-0.5 - 0.6).epsilon(1e-12));
}

TEST_CASE("hover collects the target buffer and charges neighbours") {
    Env env(quiet_config(), 7);
    env.reset();
    freeze_world(env);
    World& w = env.world_mutable();
    w.devices[0].pos = {100.0, 100.0};
    w.devices[0].buffer = w.config.l_max; // full buffer, uploads q_bits
    w.devices[1].pos = {120.0, 100.0};    // inside the harvest radius
    w.devices[2].pos = {150.0, 100.0};    // outside
    env.set_uav_position({100.0, 100.0});
    REQUIRE(env.target() == 0);

    const StepOutcome out = env.step({0.0, 0.0});
    REQUIRE(out.hover.has_value());
    const HoverRecord& rec = *out.hover;
    CHECK(rec.target == 0);

    const EnvConfig& cfg = env.config();
    const double gain = expected_channel_gain({100.0, 100.0}, {100.0, 100.0}, cfg.channel);
    CHECK(gain == doctest::Approx(5.011872336272725e-06).epsilon(1e-12));
    const double rate = data_rate(gain, cfg.radio);
    CHECK(rec.rate_bps == rate);
    CHECK(rec.upload_bits == 1e7);
    CHECK(rec.hover_secs == hover_time(1e7, rate));

    // only device 1 harvests, at its hover-start position
    const double g1 = expected_channel_gain({100.0, 100.0}, {120.0, 100.0}, cfg.channel);
    const double harvest = harvested_power(received_power(g1, cfg.radio), cfg.eh) * rec.hover_secs;
    CHECK(rec.devices_charged == 1);
    CHECK(rec.harvested_j == doctest::Approx(harvest).epsilon(1e-12));

    CHECK(out.reward.r_dc == rate / 1e6);
    CHECK(out.reward.r_eh == doctest::Approx(harvest * 1e6 + 1.0).epsilon(1e-12));
    CHECK(out.reward.r_ec == -168.49);
    CHECK(out.hover_energy_j == doctest::Approx(168.49 * rec.hover_secs).epsilon(1e-12));
    CHECK(env.clock() == doctest::Approx(1.0 + rec.hover_secs).epsilon(1e-12));

    // collected buffer is gone and stays gone through the hover sub-steps
    CHECK(env.world().devices[0].buffer == 0);
}

TEST_CASE("a zero-buffer target still triggers a hover with zero dwell") {
    Env env(quiet_config(), 7);
    env.reset();
    freeze_world(env);
    env.world_mutable().devices[0].pos = {100.0, 100.0};
    env.set_uav_position({105.0, 100.0}); // inside d_dc
    const StepOutcome out = env.step({0.0, 0.0});
    REQUIRE(out.hover.has_value());
    CHECK(out.hover->upload_bits == 0.0);
    CHECK(out.hover->hover_secs == 0.0);
    CHECK(out.hover_energy_j == 0.0);
    CHECK(out.reward.r_dc > 0.0); // rate is a property of the link, not the buffer
}

TEST_CASE("idle mission consumes exactly hover power times mission time") {
    EnvConfig cfg = quiet_config();
    cfg.mission_secs = 60.0;
    Env env(cfg, 7);
    env.reset();
    freeze_world(env);
    env.world_mutable().devices[0].pos = {390.0, 390.0};
    env.set_uav_position({10.0, 10.0});
    int steps = 0;
    while (!env.done()) {
        env.step({0.0, 0.0});
        ++steps;
    }
    CHECK(steps == 60);
    const EpisodeMetrics m = env.metrics();
    CHECK(m.e_consume_j == doctest::Approx(60.0 * 168.49).epsilon(1e-12));
    CHECK(m.hovers == 0);
    CHECK(m.r_sum_bps == 0.0);
    CHECK(m.e_harvest_j == 0.0);
}

TEST_CASE("episode metrics equal the per-step sums") {
    EnvConfig cfg;
    cfg.world.num_devices = 6;
    cfg.world.num_mobile = 2;
    cfg.world.area_side = 60.0;
    cfg.mission_secs = 40.0;
    Env env(cfg, 11);
    Observation obs = env.reset();
    double consume = 0.0, harvest = 0.0, rate_sum = 0.0;
    int hovers = 0;
    while (!env.done()) {
        // chase the current target so hovers are guaranteed
        const Vec2 a{obs[0] * cfg.world.area_side, obs[1] * cfg.world.area_side};
        const StepOutcome out = env.step(a);
        obs = out.observation;
        consume += out.flight_energy_j;
        consume += out.hover_energy_j;
        if (out.hover) {
            harvest += out.hover->harvested_j;
            rate_sum += out.hover->rate_bps;
            ++hovers;
        }
    }
    const EpisodeMetrics m = env.metrics();
    CHECK(m.e_consume_j == consume);
    CHECK(m.e_harvest_j == harvest);
    CHECK(m.r_sum_bps == rate_sum);
    CHECK(m.hovers == hovers);
    CHECK(hovers > 0); // the small arena makes hovers certain
}

TEST_CASE("reward signs hold under random play") {
    EnvConfig cfg;
    cfg.world.num_devices = 8;
    cfg.world.area_side = 80.0;
    cfg.world.num_mobile = 3;
    cfg.mission_secs = 30.0;
    Env env(cfg, 3);
    env.reset();
    Rng action_rng(9);
    while (!env.done()) {
        const StepOutcome out =
            env.step({action_rng.uniform(-30.0, 30.0), action_rng.uniform(-30.0, 30.0)});
        CHECK(out.reward.r_ec < 0.0);
        CHECK(out.reward.r_aux <= 0.0);
        CHECK(out.reward.r_dc >= 0.0);
        CHECK(out.reward.r_eh >= 0.0);
        CHECK(out.flight_speed <= cfg.v_max);
        for (int i = 0; i < 6; ++i) CHECK(std::isfinite(out.observation[static_cast<std::size_t>(i)]));
    }
}

TEST_CASE("lifecycle guards") {
    Env env(quiet_config(), 7);
    CHECK_THROWS_AS(env.observe(), std::logic_error);
    CHECK_THROWS_AS(env.step({0.0, 0.0}), std::logic_error);
    CHECK_THROWS_AS(env.metrics(), std::logic_error);
    env.reset();
    freeze_world(env);
    env.world_mutable().devices[0].pos = {390.0, 390.0};
    env.set_uav_position({10.0, 10.0});
    while (!env.done()) env.step({0.0, 0.0});
    CHECK_THROWS_AS(env.step({0.0, 0.0}), std::logic_error);
    env.metrics(); // fine once done
}

TEST_CASE("config validation") {
    EnvConfig cfg = quiet_config();
    cfg.mission_secs = 0.0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    EnvConfig cfg2 = quiet_config();
    cfg2.d_dc = 50.0; // larger than the harvest radius
    CHECK_THROWS_AS(cfg2.validate(), std::invalid_argument);
    EnvConfig cfg3 = quiet_config();
    cfg3.v_max = 0.0;
    CHECK_THROWS_AS(cfg3.validate(), std::invalid_argument);
}
