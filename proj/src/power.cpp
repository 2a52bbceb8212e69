#include "uavsim/power.hpp"

#include <cmath>
#include <stdexcept>

namespace uavsim {

void PropulsionParams::validate() const {
    if (p0 <= 0 || pi <= 0 || u_tip <= 0 || v0 <= 0 || d0_drag <= 0 ||
        rho <= 0 || solidity <= 0 || rotor_area <= 0)
        throw std::invalid_argument("PropulsionParams: all fields must be strictly positive");
}

void EhParams::validate() const {
    if (p_limit <= 0 || c <= 0 || d <= 0)
        throw std::invalid_argument("EhParams: all fields must be strictly positive");
}

void RadioParams::validate() const {
    if (p_downlink <= 0 || p_uplink <= 0 || noise <= 0 || bandwidth <= 0)
        throw std::invalid_argument("RadioParams: all fields must be strictly positive");
}

double propulsion_power(double v, const PropulsionParams& p) {
    if (v < 0) throw std::invalid_argument("propulsion_power: speed must be >= 0");
    const double v2 = v * v;
    const double blade = p.p0 * (1.0 + 3.0 * v2 / (p.u_tip * p.u_tip));
    const double v0_2 = p.v0 * p.v0;
    const double induced =
        p.pi * std::sqrt(std::sqrt(1.0 + v2 * v2 / (4.0 * v0_2 * v0_2)) -
                         v2 / (2.0 * v0_2));
    const double parasite =
        0.5 * p.d0_drag * p.rho * p.solidity * p.rotor_area * v2 * v;
    return blade + induced + parasite;
}

double hover_power(const PropulsionParams& p) { return p.p0 + p.pi; }

double maximum_endurance_velocity(const PropulsionParams& p, double v_search_max) {
    // Golden-section search; the power curve is unimodal on the search range.
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double lo = 0.0, hi = v_search_max;
    double a = hi - inv_phi * (hi - lo);
    double b = lo + inv_phi * (hi - lo);
    double fa = propulsion_power(a, p);
    double fb = propulsion_power(b, p);
    while (hi - lo > 1e-4) {
        if (fa < fb) {
            hi = b;
            b = a;
            fb = fa;
            a = hi - inv_phi * (hi - lo);
            fa = propulsion_power(a, p);
        } else {
            lo = a;
            a = b;
            fa = fb;
            b = lo + inv_phi * (hi - lo);
            fb = propulsion_power(b, p);
        }
    }
    return 0.5 * (lo + hi);
}

double received_power(double gain, const RadioParams& radio) {
    if (gain < 0) throw std::invalid_argument("received_power: gain must be >= 0");
    return gain * radio.p_downlink;
}

double harvested_power(double p_r, const EhParams& eh) {
    if (p_r < 0) throw std::invalid_argument("harvested_power: input power must be >= 0");
    const double e_cd = std::exp(eh.c * eh.d);
    const double e_in = std::exp(-eh.c * (p_r - eh.d));
    return eh.p_limit * (e_cd - e_in) / (e_cd * (1.0 + e_in));
}

double data_rate(double gain, const RadioParams& radio) {
    if (gain < 0) throw std::invalid_argument("data_rate: gain must be >= 0");
    return radio.bandwidth * std::log2(1.0 + radio.p_uplink * gain / radio.noise);
}

double hover_time(double upload_bits, double rate) {
    if (rate <= 0) throw std::invalid_argument("hover_time: rate must be > 0");
    return upload_bits / rate;
}

} // namespace uavsim
