#ifndef UAVSIM_POWER_HPP
#define UAVSIM_POWER_HPP

namespace uavsim {

// Rotary-wing propulsion model parameters. All SI.
struct PropulsionParams {
    double p0 = 79.86;        // blade profile power in hover (W)
    double pi = 88.63;        // induced power in hover (W)
    double u_tip = 120.0;     // rotor tip speed (m/s)
    double v0 = 4.03;         // mean rotor induced velocity in hover (m/s)
    double d0_drag = 0.6;     // fuselage drag ratio
    double rho = 1.225;       // air density (kg/m^3)
    double solidity = 0.05;   // rotor solidity
    double rotor_area = 0.503; // rotor disc area (m^2)

    void validate() const;
};

// Non-linear RF energy-harvesting circuit parameters (SI watts).
struct EhParams {
    double p_limit = 9.079e-6; // maximum DC output power (W)
    double c = 47083.0;        // circuit steepness (1/W)
    double d = 2.9e-6;         // turn-on threshold (W)

    void validate() const;
};

struct RadioParams {
    double p_downlink = 10.0;  // UAV transmit power (W)
    double p_uplink = 1e-5;    // device transmit power (W)
    double noise = 1e-12;      // channel noise power (W)
    double bandwidth = 1e6;    // Hz

    void validate() const;
};

// Propulsion power at flight speed v: blade profile + induced + parasite.
double propulsion_power(double v, const PropulsionParams& params);

// Power to hold position, equals propulsion_power(0).
double hover_power(const PropulsionParams& params);

// Speed minimizing propulsion power on [0, v_search_max], refined to 1e-4 m/s.
double maximum_endurance_velocity(const PropulsionParams& params,
                                  double v_search_max = 20.0);

// RF power arriving at a device given the downlink channel power gain.
double received_power(double gain, const RadioParams& radio);

// DC output of the non-linear harvesting circuit for received power p_r.
// Zero at zero input, saturates below p_limit.
double harvested_power(double p_r, const EhParams& eh);

// Uplink Shannon rate in bits/s given the channel power gain.
double data_rate(double gain, const RadioParams& radio);

// Time to push upload_bits through a link at rate bits/s.
double hover_time(double upload_bits, double rate);

} // namespace uavsim

#endif
