#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "uavsim/channel.hpp"
#include "uavsim/config.hpp"
#include "uavsim/env.hpp"
#include "uavsim/harness.hpp"
#include "uavsim/mlp.hpp"
#include "uavsim/power.hpp"
#include "uavsim/trainer.hpp"

namespace py = pybind11;

PYBIND11_MODULE(_uavsim, m) {
    using namespace uavsim;
    m.doc() = "UAV base-station simulator and policy-training core";

    py::class_<Vec2>(m, "Vec2")
        .def(py::init<>())
        .def(py::init([](double x, double y) { return Vec2{x, y}; }))
        .def_readwrite("x", &Vec2::x)
        .def_readwrite("y", &Vec2::y)
        .def("norm", &Vec2::norm);

    py::class_<PropulsionParams>(m, "PropulsionParams")
        .def(py::init<>())
        .def_readwrite("p0", &PropulsionParams::p0)
        .def_readwrite("pi", &PropulsionParams::pi)
        .def_readwrite("u_tip", &PropulsionParams::u_tip)
        .def_readwrite("v0", &PropulsionParams::v0)
        .def_readwrite("d0_drag", &PropulsionParams::d0_drag)
        .def_readwrite("rho", &PropulsionParams::rho)
        .def_readwrite("solidity", &PropulsionParams::solidity)
        .def_readwrite("rotor_area", &PropulsionParams::rotor_area);

    py::class_<EhParams>(m, "EhParams")
        .def(py::init<>())
        .def_readwrite("p_limit", &EhParams::p_limit)
        .def_readwrite("c", &EhParams::c)
        .def_readwrite("d", &EhParams::d);

    py::class_<RadioParams>(m, "RadioParams")
        .def(py::init<>())
        .def_readwrite("p_downlink", &RadioParams::p_downlink)
        .def_readwrite("p_uplink", &RadioParams::p_uplink)
        .def_readwrite("noise", &RadioParams::noise)
        .def_readwrite("bandwidth", &RadioParams::bandwidth);

    py::class_<ChannelParams>(m, "ChannelParams")
        .def(py::init<>())
        .def_readwrite("gamma0", &ChannelParams::gamma0)
        .def_readwrite("alpha", &ChannelParams::alpha)
        .def_readwrite("mu_nlos", &ChannelParams::mu_nlos)
        .def_readwrite("a", &ChannelParams::a)
        .def_readwrite("b", &ChannelParams::b)
        .def_readwrite("altitude", &ChannelParams::altitude);

    py::class_<WorldConfig>(m, "WorldConfig")
        .def(py::init<>())
        .def_readwrite("num_devices", &WorldConfig::num_devices)
        .def_readwrite("area_side", &WorldConfig::area_side)
        .def_readwrite("l_max", &WorldConfig::l_max)
        .def_readwrite("q_bits", &WorldConfig::q_bits)
        .def_readwrite("dt", &WorldConfig::dt)
        .def_readwrite("rate_choices", &WorldConfig::rate_choices)
        .def_readwrite("num_mobile", &WorldConfig::num_mobile)
        .def_readwrite("mobility_step", &WorldConfig::mobility_step)
        .def_readwrite("mobility_grid", &WorldConfig::mobility_grid);

    py::class_<EnvConfig>(m, "EnvConfig")
        .def(py::init<>())
        .def_readwrite("world", &EnvConfig::world)
        .def_readwrite("channel", &EnvConfig::channel)
        .def_readwrite("propulsion", &EnvConfig::propulsion)
        .def_readwrite("eh", &EnvConfig::eh)
        .def_readwrite("radio", &EnvConfig::radio)
        .def_readwrite("mission_secs", &EnvConfig::mission_secs)
        .def_readwrite("v_max", &EnvConfig::v_max)
        .def_readwrite("d_dc", &EnvConfig::d_dc)
        .def_readwrite("d_eh", &EnvConfig::d_eh);

    py::class_<RewardVector>(m, "RewardVector")
        .def_readonly("r_dc", &RewardVector::r_dc)
        .def_readonly("r_eh", &RewardVector::r_eh)
        .def_readonly("r_ec", &RewardVector::r_ec)
        .def_readonly("r_aux", &RewardVector::r_aux);

    py::class_<HoverRecord>(m, "HoverRecord")
        .def_readonly("target", &HoverRecord::target)
        .def_readonly("rate_bps", &HoverRecord::rate_bps)
        .def_readonly("upload_bits", &HoverRecord::upload_bits)
        .def_readonly("hover_secs", &HoverRecord::hover_secs)
        .def_readonly("harvested_j", &HoverRecord::harvested_j)
        .def_readonly("devices_charged", &HoverRecord::devices_charged);

    py::class_<StepOutcome>(m, "StepOutcome")
        .def_readonly("observation", &StepOutcome::observation)
        .def_readonly("reward", &StepOutcome::reward)
        .def_readonly("done", &StepOutcome::done)
        .def_readonly("hover", &StepOutcome::hover)
        .def_readonly("flight_speed", &StepOutcome::flight_speed)
        .def_readonly("flight_energy_j", &StepOutcome::flight_energy_j)
        .def_readonly("hover_energy_j", &StepOutcome::hover_energy_j);

    py::class_<EpisodeMetrics>(m, "EpisodeMetrics")
        .def_readonly("r_sum_bps", &EpisodeMetrics::r_sum_bps)
        .def_readonly("e_harvest_j", &EpisodeMetrics::e_harvest_j)
        .def_readonly("e_consume_j", &EpisodeMetrics::e_consume_j)
        .def_readonly("hovers", &EpisodeMetrics::hovers);

    py::class_<Env>(m, "Env")
        .def(py::init<const EnvConfig&, std::uint64_t>(), py::arg("config"),
             py::arg("seed"))
        .def("reset", &Env::reset)
        .def("observe", &Env::observe)
        .def("step",
             [](Env& env, double vx, double vy) { return env.step(Vec2{vx, vy}); },
             py::arg("vx"), py::arg("vy"))
        .def("metrics", &Env::metrics)
        .def_property_readonly("done", &Env::done)
        .def_property_readonly("clock", &Env::clock)
        .def_property_readonly("target", &Env::target)
        .def_property_readonly("uav", &Env::uav);

    py::class_<Mlp>(m, "Mlp")
        .def_static("load",
                    static_cast<Mlp (*)(const std::string&)>(&Mlp::load),
                    py::arg("path"))
        .def("predict", &Mlp::predict, py::arg("x"))
        .def("sizes", &Mlp::sizes)
        .def("save",
             static_cast<void (Mlp::*)(const std::string&) const>(&Mlp::save),
             py::arg("path"));

    py::class_<RunConfig>(m, "RunConfig")
        .def(py::init<>())
        .def_readwrite("episodes", &RunConfig::episodes)
        .def_readwrite("seed", &RunConfig::seed)
        .def("env", &RunConfig::env)
        .def("manifest", [](const RunConfig& cfg) { return manifest_text(cfg); });

    m.def("load_run_config", [](const std::string& path) { return load_config(path); },
          py::arg("path"));
    m.def("parse_run_config", &parse_config, py::arg("text"));

    m.def("propulsion_power", &propulsion_power, py::arg("v"),
          py::arg("params") = PropulsionParams{});
    m.def("hover_power", &hover_power, py::arg("params") = PropulsionParams{});
    m.def("maximum_endurance_velocity", &maximum_endurance_velocity,
          py::arg("params") = PropulsionParams{}, py::arg("v_search_max") = 20.0);
    m.def("received_power", &received_power, py::arg("gain"),
          py::arg("radio") = RadioParams{});
    m.def("harvested_power", &harvested_power, py::arg("p_r"),
          py::arg("eh") = EhParams{});
    m.def("data_rate", &data_rate, py::arg("gain"), py::arg("radio") = RadioParams{});
    m.def("hover_time", &hover_time, py::arg("upload_bits"), py::arg("rate"));
    m.def("los_probability", &los_probability, py::arg("theta_deg"),
          py::arg("params") = ChannelParams{});
    m.def("expected_channel_gain", &expected_channel_gain, py::arg("uav_xy"),
          py::arg("dev_xy"), py::arg("params") = ChannelParams{});

    m.def("run_gradcheck",
          [](std::uint64_t seed, int nets) {
              const GradcheckReport r = run_gradcheck(seed, nets);
              py::dict out;
              out["nets"] = r.nets;
              out["params_checked"] = r.params_checked;
              out["max_rel_err"] = r.max_rel_err;
              out["pass"] = r.pass;
              return out;
          },
          py::arg("seed") = 1, py::arg("nets") = 20);
}
