#include "uavsim/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace uavsim {

void ChannelParams::validate() const {
    if (gamma0 <= 0) throw std::invalid_argument("ChannelParams: gamma0 must be > 0");
    if (alpha <= 0) throw std::invalid_argument("ChannelParams: alpha must be > 0");
    if (mu_nlos <= 0 || mu_nlos > 1)
        throw std::invalid_argument("ChannelParams: mu_nlos must be in (0, 1]");
    if (altitude <= 0) throw std::invalid_argument("ChannelParams: altitude must be > 0");
}

double distance_3d(const Vec2& uav_xy, const Vec2& dev_xy, double altitude) {
    if (altitude <= 0) throw std::invalid_argument("distance_3d: altitude must be > 0");
    const double dx = uav_xy.x - dev_xy.x;
    const double dy = uav_xy.y - dev_xy.y;
    return std::sqrt(dx * dx + dy * dy + altitude * altitude);
}

double elevation_angle_deg(double altitude, double dist) {
    if (dist < altitude)
        throw std::invalid_argument("elevation_angle_deg: dist < altitude is impossible");
    return (180.0 / M_PI) * std::asin(altitude / dist);
}

double los_probability(double theta_deg, const ChannelParams& p) {
    return 1.0 / (1.0 + p.a * std::exp(-p.b * (theta_deg - p.a)));
}

double expected_channel_gain(const Vec2& uav_xy, const Vec2& dev_xy,
                             const ChannelParams& p) {
    const double d = distance_3d(uav_xy, dev_xy, p.altitude);
    const double theta = elevation_angle_deg(p.altitude, d);
    const double p_los = los_probability(theta, p);
    const double mix = p_los + p.mu_nlos * (1.0 - p_los);
    return mix * p.gamma0 * std::pow(d, -p.alpha);
}

} // namespace uavsim
