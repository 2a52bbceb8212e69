#include "uavsim/config.hpp"

#include <climits>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace uavsim {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value) {
    throw ConfigError("config key '" + key + "' has unparsable value '" + value + "'");
}

[[noreturn]] void bad_range(const std::string& key, const std::string& why) {
    throw ConfigError("config key '" + key + "' out of range: " + why);
}

double parse_double(const std::string& key, const std::string& value) {
    std::size_t used = 0;
    double x = 0.0;
    try {
        x = std::stod(value, &used);
    } catch (const std::exception&) {
        bad_value(key, value);
    }
    if (used != value.size()) bad_value(key, value);
    if (!std::isfinite(x)) bad_value(key, value);
    return x;
}

long long parse_ll(const std::string& key, const std::string& value) {
    std::size_t used = 0;
    long long x = 0;
    try {
        x = std::stoll(value, &used);
    } catch (const std::exception&) {
        bad_value(key, value);
    }
    if (used != value.size()) bad_value(key, value);
    return x;
}

int parse_int(const std::string& key, const std::string& value) {
    const long long x = parse_ll(key, value);
    if (x < INT_MIN || x > INT_MAX) bad_value(key, value);
    return static_cast<int>(x);
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
    std::size_t used = 0;
    unsigned long long x = 0;
    try {
        x = std::stoull(value, &used);
    } catch (const std::exception&) {
        bad_value(key, value);
    }
    if (used != value.size()) bad_value(key, value);
    return static_cast<std::uint64_t>(x);
}

std::vector<std::string> split_list(const std::string& key, const std::string& value) {
    std::vector<std::string> parts;
    std::string cur;
    std::istringstream in(value);
    while (std::getline(in, cur, ',')) {
        cur = trim(cur);
        if (cur.empty()) bad_value(key, value);
        parts.push_back(cur);
    }
    if (parts.empty()) bad_value(key, value);
    return parts;
}

std::vector<double> parse_double_list(const std::string& key, const std::string& value) {
    std::vector<double> out;
    for (const std::string& part : split_list(key, value))
        out.push_back(parse_double(key, part));
    return out;
}

std::vector<int> parse_int_list(const std::string& key, const std::string& value) {
    std::vector<int> out;
    for (const std::string& part : split_list(key, value))
        out.push_back(parse_int(key, part));
    return out;
}

void apply_key(RunConfig& c, const std::string& key, const std::string& value) {
    if (key == "devices") c.devices = parse_int(key, value);
    else if (key == "area_side") c.area_side = parse_double(key, value);
    else if (key == "buffer_capacity") c.buffer_capacity = parse_ll(key, value);
    else if (key == "upload_bits") c.upload_bits = parse_double(key, value);
    else if (key == "update_interval") c.update_interval = parse_double(key, value);
    else if (key == "rate_choices") c.rate_choices = parse_double_list(key, value);
    else if (key == "mobile_devices") c.mobile_devices = parse_int(key, value);
    else if (key == "mobility_step") c.mobility_step = parse_double(key, value);
    else if (key == "mobility_grid") c.mobility_grid = parse_int(key, value);
    else if (key == "gamma0_db") c.gamma0_db = parse_double(key, value);
    else if (key == "path_loss_exponent") c.path_loss_exponent = parse_double(key, value);
    else if (key == "mu_nlos") c.mu_nlos = parse_double(key, value);
    else if (key == "los_a") c.los_a = parse_double(key, value);
    else if (key == "los_b") c.los_b = parse_double(key, value);
    else if (key == "altitude") c.altitude = parse_double(key, value);
    else if (key == "blade_power") c.blade_power = parse_double(key, value);
    else if (key == "induced_power") c.induced_power = parse_double(key, value);
    else if (key == "tip_speed") c.tip_speed = parse_double(key, value);
    else if (key == "induced_velocity") c.induced_velocity = parse_double(key, value);
    else if (key == "drag_ratio") c.drag_ratio = parse_double(key, value);
    else if (key == "air_density") c.air_density = parse_double(key, value);
    else if (key == "rotor_solidity") c.rotor_solidity = parse_double(key, value);
    else if (key == "rotor_area") c.rotor_area = parse_double(key, value);
    else if (key == "eh_p_limit_uw") c.eh_p_limit_uw = parse_double(key, value);
    else if (key == "eh_c") c.eh_c = parse_double(key, value);
    else if (key == "eh_d_uw") c.eh_d_uw = parse_double(key, value);
    else if (key == "p_downlink_dbm") c.p_downlink_dbm = parse_double(key, value);
    else if (key == "p_uplink_dbm") c.p_uplink_dbm = parse_double(key, value);
    else if (key == "noise_dbm") c.noise_dbm = parse_double(key, value);
    else if (key == "bandwidth") c.bandwidth = parse_double(key, value);
    else if (key == "mission_secs") c.mission_secs = parse_double(key, value);
    else if (key == "v_max") c.v_max = parse_double(key, value);
    else if (key == "d_dc") c.d_dc = parse_double(key, value);
    else if (key == "d_eh") c.d_eh = parse_double(key, value);
    else if (key == "episodes") c.episodes = parse_int(key, value);
    else if (key == "gamma") c.gamma = parse_double(key, value);
    else if (key == "tau") c.tau = parse_double(key, value);
    else if (key == "replay_capacity") c.replay_capacity = parse_ll(key, value);
    else if (key == "batch_size") c.batch_size = parse_int(key, value);
    else if (key == "lr_actor") c.lr_actor = parse_double(key, value);
    else if (key == "lr_critic") c.lr_critic = parse_double(key, value);
    else if (key == "actor_hidden") c.actor_hidden = parse_int_list(key, value);
    else if (key == "critic_hidden") c.critic_hidden = parse_int_list(key, value);
    else if (key == "noise_sigma2") c.noise_sigma2 = parse_double(key, value);
    else if (key == "noise_epsilon0") c.noise_epsilon0 = parse_double(key, value);
    else if (key == "noise_decay") c.noise_decay = parse_double(key, value);
    else if (key == "noise_floor") c.noise_floor = parse_double(key, value);
    else if (key == "checkpoint_every") c.checkpoint_every = parse_int(key, value);
    else if (key == "w_dc") c.w_dc = parse_double(key, value);
    else if (key == "w_eh") c.w_eh = parse_double(key, value);
    else if (key == "w_ec") c.w_ec = parse_double(key, value);
    else if (key == "w_aux") c.w_aux = parse_double(key, value);
    else if (key == "seed") c.seed = parse_u64(key, value);
    else throw ConfigError("unknown config key '" + key + "'");
}

std::string fmt(double x) {
    std::ostringstream os;
    os << std::setprecision(17) << x;
    return os.str();
}

template <typename T>
std::string join(const std::vector<T>& xs) {
    std::ostringstream os;
    os << std::setprecision(17);
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) os << ',';
        os << xs[i];
    }
    return os.str();
}

} // namespace

double dbm_to_watts(double dbm) { return std::pow(10.0, dbm / 10.0) / 1000.0; }

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

EnvConfig RunConfig::env() const {
    EnvConfig e;
    e.world.num_devices = devices;
    e.world.area_side = area_side;
    e.world.l_max = buffer_capacity;
    e.world.q_bits = upload_bits;
    e.world.dt = update_interval;
    e.world.rate_choices = rate_choices;
    e.world.num_mobile = mobile_devices;
    e.world.mobility_step = mobility_step;
    e.world.mobility_grid = mobility_grid;

    e.channel.gamma0 = db_to_linear(gamma0_db);
    e.channel.alpha = path_loss_exponent;
    e.channel.mu_nlos = mu_nlos;
    e.channel.a = los_a;
    e.channel.b = los_b;
    e.channel.altitude = altitude;

    e.propulsion.p0 = blade_power;
    e.propulsion.pi = induced_power;
    e.propulsion.u_tip = tip_speed;
    e.propulsion.v0 = induced_velocity;
    e.propulsion.d0_drag = drag_ratio;
    e.propulsion.rho = air_density;
    e.propulsion.solidity = rotor_solidity;
    e.propulsion.rotor_area = rotor_area;

    e.eh.p_limit = eh_p_limit_uw * 1e-6;
    e.eh.c = eh_c;
    e.eh.d = eh_d_uw * 1e-6;

    e.radio.p_downlink = dbm_to_watts(p_downlink_dbm);
    e.radio.p_uplink = dbm_to_watts(p_uplink_dbm);
    e.radio.noise = dbm_to_watts(noise_dbm);
    e.radio.bandwidth = bandwidth;

    e.mission_secs = mission_secs;
    e.v_max = v_max;
    e.d_dc = d_dc;
    e.d_eh = d_eh;
    return e;
}

Hyper RunConfig::hyper() const {
    Hyper h;
    h.gamma = gamma;
    h.tau = tau;
    h.replay_capacity = static_cast<std::size_t>(replay_capacity);
    h.batch_size = batch_size;
    h.lr_actor = lr_actor;
    h.lr_critic = lr_critic;
    h.actor_hidden = actor_hidden;
    h.critic_hidden = critic_hidden;
    h.noise.sigma2 = noise_sigma2;
    h.noise.epsilon = noise_epsilon0;
    h.noise.decay = noise_decay;
    h.noise.floor = noise_floor;
    h.episodes = episodes;
    h.checkpoint_every = checkpoint_every;
    return h;
}

WeightVector RunConfig::weights() const { return {w_dc, w_eh, w_ec, w_aux}; }

void RunConfig::validate() const {
    if (devices <= 0) bad_range("devices", "must be > 0");
    if (area_side <= 0) bad_range("area_side", "must be > 0");
    if (buffer_capacity <= 0) bad_range("buffer_capacity", "must be > 0");
    if (upload_bits <= 0) bad_range("upload_bits", "must be > 0");
    if (update_interval <= 0) bad_range("update_interval", "must be > 0");
    if (rate_choices.empty()) bad_range("rate_choices", "must be non-empty");
    for (double r : rate_choices)
        if (r <= 0) bad_range("rate_choices", "entries must be > 0");
    if (mobile_devices < 0 || mobile_devices > devices)
        bad_range("mobile_devices", "must be in [0, devices]");
    if (mobility_step < 0) bad_range("mobility_step", "must be >= 0");
    if (mobility_grid < 1) bad_range("mobility_grid", "must be >= 1");
    if (path_loss_exponent <= 0) bad_range("path_loss_exponent", "must be > 0");
    if (mu_nlos <= 0 || mu_nlos > 1) bad_range("mu_nlos", "must be in (0, 1]");
    if (altitude <= 0) bad_range("altitude", "must be > 0");
    if (blade_power <= 0) bad_range("blade_power", "must be > 0");
    if (induced_power <= 0) bad_range("induced_power", "must be > 0");
    if (tip_speed <= 0) bad_range("tip_speed", "must be > 0");
    if (induced_velocity <= 0) bad_range("induced_velocity", "must be > 0");
    if (drag_ratio <= 0) bad_range("drag_ratio", "must be > 0");
    if (air_density <= 0) bad_range("air_density", "must be > 0");
    if (rotor_solidity <= 0) bad_range("rotor_solidity", "must be > 0");
    if (rotor_area <= 0) bad_range("rotor_area", "must be > 0");
    if (eh_p_limit_uw <= 0) bad_range("eh_p_limit_uw", "must be > 0");
    if (eh_c <= 0) bad_range("eh_c", "must be > 0");
    if (eh_d_uw <= 0) bad_range("eh_d_uw", "must be > 0");
    if (bandwidth <= 0) bad_range("bandwidth", "must be > 0");
    if (mission_secs <= 0) bad_range("mission_secs", "must be > 0");
    if (v_max <= 0) bad_range("v_max", "must be > 0");
    if (d_dc <= 0) bad_range("d_dc", "must be > 0");
    if (d_dc > d_eh) bad_range("d_eh", "must be >= d_dc");
    if (episodes <= 0) bad_range("episodes", "must be > 0");
    if (gamma < 0 || gamma > 1) bad_range("gamma", "must be in [0, 1]");
    if (tau <= 0 || tau > 1) bad_range("tau", "must be in (0, 1]");
    if (replay_capacity <= 0) bad_range("replay_capacity", "must be > 0");
    if (batch_size <= 0) bad_range("batch_size", "must be > 0");
    if (lr_actor <= 0) bad_range("lr_actor", "must be > 0");
    if (lr_critic <= 0) bad_range("lr_critic", "must be > 0");
    if (actor_hidden.empty()) bad_range("actor_hidden", "must be non-empty");
    for (int h : actor_hidden)
        if (h <= 0) bad_range("actor_hidden", "entries must be > 0");
    if (critic_hidden.empty()) bad_range("critic_hidden", "must be non-empty");
    for (int h : critic_hidden)
        if (h <= 0) bad_range("critic_hidden", "entries must be > 0");
    if (noise_sigma2 <= 0) bad_range("noise_sigma2", "must be > 0");
    if (noise_epsilon0 <= 0 || noise_epsilon0 > 1)
        bad_range("noise_epsilon0", "must be in (0, 1]");
    if (noise_decay <= 0 || noise_decay > 1)
        bad_range("noise_decay", "must be in (0, 1]");
    if (noise_floor <= 0 || noise_floor > 1)
        bad_range("noise_floor", "must be in (0, 1]");
    if (checkpoint_every <= 0) bad_range("checkpoint_every", "must be > 0");
    if (w_dc < 0) bad_range("w_dc", "must be >= 0");
    if (w_eh < 0) bad_range("w_eh", "must be >= 0");
    if (w_ec < 0) bad_range("w_ec", "must be >= 0");
    if (w_aux != 1.0) bad_range("w_aux", "must be 1 (fixed)");
}

RunConfig parse_config(const std::string& text) {
    RunConfig cfg;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) +
                              " is not key=value: '" + line + "'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw ConfigError("config line " + std::to_string(lineno) + " has empty key");
        apply_key(cfg, key, value);
    }
    cfg.validate();
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot open config file: " + path);
    std::ostringstream buf;
    buf << is.rdbuf();
    return parse_config(buf.str());
}

std::string manifest_text(const RunConfig& c) {
    std::ostringstream os;
    os << "# resolved run configuration\n";
    os << "devices = " << c.devices << '\n';
    os << "area_side = " << fmt(c.area_side) << '\n';
    os << "buffer_capacity = " << c.buffer_capacity << '\n';
    os << "upload_bits = " << fmt(c.upload_bits) << '\n';
    os << "update_interval = " << fmt(c.update_interval) << '\n';
    os << "rate_choices = " << join(c.rate_choices) << '\n';
    os << "mobile_devices = " << c.mobile_devices << '\n';
    os << "mobility_step = " << fmt(c.mobility_step) << '\n';
    os << "mobility_grid = " << c.mobility_grid << '\n';
    os << "gamma0_db = " << fmt(c.gamma0_db) << '\n';
    os << "path_loss_exponent = " << fmt(c.path_loss_exponent) << '\n';
    os << "mu_nlos = " << fmt(c.mu_nlos) << '\n';
    os << "los_a = " << fmt(c.los_a) << '\n';
    os << "los_b = " << fmt(c.los_b) << '\n';
    os << "altitude = " << fmt(c.altitude) << '\n';
    os << "blade_power = " << fmt(c.blade_power) << '\n';
    os << "induced_power = " << fmt(c.induced_power) << '\n';
    os << "tip_speed = " << fmt(c.tip_speed) << '\n';
    os << "induced_velocity = " << fmt(c.induced_velocity) << '\n';
    os << "drag_ratio = " << fmt(c.drag_ratio) << '\n';
    os << "air_density = " << fmt(c.air_density) << '\n';
    os << "rotor_solidity = " << fmt(c.rotor_solidity) << '\n';
    os << "rotor_area = " << fmt(c.rotor_area) << '\n';
    os << "eh_p_limit_uw = " << fmt(c.eh_p_limit_uw) << '\n';
    os << "eh_c = " << fmt(c.eh_c) << '\n';
    os << "eh_d_uw = " << fmt(c.eh_d_uw) << '\n';
    os << "p_downlink_dbm = " << fmt(c.p_downlink_dbm) << '\n';
    os << "p_uplink_dbm = " << fmt(c.p_uplink_dbm) << '\n';
    os << "noise_dbm = " << fmt(c.noise_dbm) << '\n';
    os << "bandwidth = " << fmt(c.bandwidth) << '\n';
    os << "mission_secs = " << fmt(c.mission_secs) << '\n';
    os << "v_max = " << fmt(c.v_max) << '\n';
    os << "d_dc = " << fmt(c.d_dc) << '\n';
    os << "d_eh = " << fmt(c.d_eh) << '\n';
    os << "episodes = " << c.episodes << '\n';
    os << "gamma = " << fmt(c.gamma) << '\n';
    os << "tau = " << fmt(c.tau) << '\n';
    os << "replay_capacity = " << c.replay_capacity << '\n';
    os << "batch_size = " << c.batch_size << '\n';
    os << "lr_actor = " << fmt(c.lr_actor) << '\n';
    os << "lr_critic = " << fmt(c.lr_critic) << '\n';
    os << "actor_hidden = " << join(c.actor_hidden) << '\n';
    os << "critic_hidden = " << join(c.critic_hidden) << '\n';
    os << "noise_sigma2 = " << fmt(c.noise_sigma2) << '\n';
    os << "noise_epsilon0 = " << fmt(c.noise_epsilon0) << '\n';
    os << "noise_decay = " << fmt(c.noise_decay) << '\n';
    os << "noise_floor = " << fmt(c.noise_floor) << '\n';
    os << "checkpoint_every = " << c.checkpoint_every << '\n';
    os << "w_dc = " << fmt(c.w_dc) << '\n';
    os << "w_eh = " << fmt(c.w_eh) << '\n';
    os << "w_ec = " << fmt(c.w_ec) << '\n';
    os << "w_aux = " << fmt(c.w_aux) << '\n';
    os << "seed = " << c.seed << '\n';
    return os.str();
}

void save_manifest(const RunConfig& cfg, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot write manifest: " + path);
    os << manifest_text(cfg);
    if (!os) throw std::runtime_error("manifest write failed: " + path);
}

} // namespace uavsim
