#ifndef UAVSIM_CHANNEL_HPP
#define UAVSIM_CHANNEL_HPP

#include "uavsim/vec2.hpp"

namespace uavsim {

// Air-to-ground channel parameters. gamma0 is the linear channel power gain
// at the 1 m reference distance.
struct ChannelParams {
    double gamma0 = 1e-3;   // reference channel power gain (linear)
    double alpha = 2.3;     // path-loss exponent
    double mu_nlos = 0.2;   // additional NLoS attenuation
    double a = 10.0;        // LoS probability constant
    double b = 0.6;         // LoS probability constant
    double altitude = 10.0; // UAV height (m)

    void validate() const;
};

// Slant range between the UAV (at fixed altitude) and a ground device.
double distance_3d(const Vec2& uav_xy, const Vec2& dev_xy, double altitude);

// Elevation angle in degrees, (0, 90]. Requires dist >= altitude.
double elevation_angle_deg(double altitude, double dist);

// Sigmoid LoS probability as a function of the elevation angle in degrees.
double los_probability(double theta_deg, const ChannelParams& params);

// Expected channel power gain: LoS/NLoS path losses mixed by the LoS
// probability. Uplink and downlink gains are taken as equal.
double expected_channel_gain(const Vec2& uav_xy, const Vec2& dev_xy,
                             const ChannelParams& params);

} // namespace uavsim

#endif
