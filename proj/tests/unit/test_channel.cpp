#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "uavsim/channel.hpp"
#include "uavsim/rng.hpp"

using namespace uavsim;

TEST_CASE("slant range from horizontal offset and altitude") {
    CHECK(distance_3d({0.0, 0.0}, {3.0, 4.0}, 12.0) == doctest::Approx(13.0).epsilon(1e-15));
    CHECK(distance_3d({10.0, 10.0}, {10.0, 10.0}, 10.0) == 10.0);
    CHECK(distance_3d({1.0, 2.0}, {4.0, 6.0}, 12.0) == doctest::Approx(13.0).epsilon(1e-15));
    CHECK_THROWS_AS(distance_3d({0.0, 0.0}, {1.0, 1.0}, 0.0), std::invalid_argument);
}

TEST_CASE("elevation angle at reference geometries") {
    CHECK(elevation_angle_deg(10.0, 10.0) == doctest::Approx(90.0).epsilon(1e-12));
    CHECK(elevation_angle_deg(10.0, 20.0) == doctest::Approx(30.0).epsilon(1e-12));
    CHECK(elevation_angle_deg(10.0, 10.0 * std::sqrt(2.0)) ==
          doctest::Approx(45.0).epsilon(1e-12));
    CHECK_THROWS_AS(elevation_angle_deg(10.0, 9.0), std::invalid_argument);
}

TEST_CASE("line-of-sight probability at the sigmoid midpoint") {
    ChannelParams ch;
    // theta == a puts the sigmoid at 1 / (1 + a)
    CHECK(los_probability(10.0, ch) ==
          doctest::Approx(1.0 / 11.0).epsilon(1e-15));
}

TEST_CASE("line-of-sight probability rises with elevation") {
    ChannelParams ch;
    // strictly increasing until the sigmoid saturates to 1.0 in doubles
    double prev = los_probability(0.0, ch);
    for (int i = 1; i <= 1000; ++i) {
        const double cur = los_probability(i * 0.06, ch);
        CHECK(cur > prev);
        prev = cur;
    }
    prev = los_probability(60.0, ch);
    for (int i = 1; i <= 300; ++i) {
        const double cur = los_probability(60.0 + i * 0.1, ch);
        CHECK(cur >= prev);
        prev = cur;
    }
    CHECK(los_probability(90.0, ch) > 0.999999);
    CHECK(los_probability(0.0, ch) < 0.001);
}

TEST_CASE("gain directly overhead is the pure line-of-sight loss") {
    ChannelParams ch;
    // overhead the LoS probability saturates to 1 in double precision
    CHECK(expected_channel_gain({50.0, 50.0}, {50.0, 50.0}, ch) ==
          doctest::Approx(5.011872336272725e-06).epsilon(1e-12));
}

TEST_CASE("gain sits between the NLoS and LoS envelopes") {
    ChannelParams ch;
    Rng rng(31);
    for (int i = 0; i < 1000; ++i) {
        const Vec2 uav{rng.uniform(0.0, 400.0), rng.uniform(0.0, 400.0)};
        const Vec2 dev{rng.uniform(0.0, 400.0), rng.uniform(0.0, 400.0)};
        const double d = distance_3d(uav, dev, ch.altitude);
        const double los_gain = ch.gamma0 * std::pow(d, -ch.alpha);
        const double gain = expected_channel_gain(uav, dev, ch);
        CHECK(gain <= los_gain);
        CHECK(gain >= ch.mu_nlos * los_gain);
        CHECK(gain > 0.0);
    }
}

TEST_CASE("gain decays with horizontal distance") {
    ChannelParams ch;
    double prev = expected_channel_gain({0.0, 0.0}, {0.0, 0.0}, ch);
    for (int i = 1; i <= 400; ++i) {
        const double cur = expected_channel_gain({0.0, 0.0}, {static_cast<double>(i), 0.0}, ch);
        CHECK(cur < prev);
        prev = cur;
    }
}

TEST_CASE("channel parameter validation") {
    ChannelParams ch;
    ch.gamma0 = 0.0;
    CHECK_THROWS_AS(ch.validate(), std::invalid_argument);
    ChannelParams ch2;
    ch2.altitude = -1.0;
    CHECK_THROWS_AS(ch2.validate(), std::invalid_argument);
    ChannelParams ch3;
    ch3.mu_nlos = 1.5;
    CHECK_THROWS_AS(ch3.validate(), std::invalid_argument);
}
