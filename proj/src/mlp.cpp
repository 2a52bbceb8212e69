#include "uavsim/mlp.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace uavsim {

namespace {

double apply_act(Act a, double z) {
    switch (a) {
        case Act::relu: return z > 0.0 ? z : 0.0;
        case Act::sigmoid: return 1.0 / (1.0 + std::exp(-z));
        case Act::tanh: return std::tanh(z);
        case Act::linear: return z;
    }
    throw std::logic_error("apply_act: unknown activation");
}

// Derivative at relu(0) is defined as 0.
double act_deriv(Act a, double z) {
    switch (a) {
        case Act::relu: return z > 0.0 ? 1.0 : 0.0;
        case Act::sigmoid: {
            const double s = 1.0 / (1.0 + std::exp(-z));
            return s * (1.0 - s);
        }
        case Act::tanh: {
            const double t = std::tanh(z);
            return 1.0 - t * t;
        }
        case Act::linear: return 1.0;
    }
    throw std::logic_error("act_deriv: unknown activation");
}

void write_doubles(std::ostream& os, const std::vector<double>& xs) {
    os << std::setprecision(17);
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) os << ' ';
        os << xs[i];
    }
    os << '\n';
}

void read_doubles(std::istream& is, std::vector<double>& xs, const char* what) {
    for (double& x : xs) {
        if (!(is >> x))
            throw std::runtime_error(std::string("Mlp::load: truncated ") + what);
    }
}

} // namespace

const char* act_name(Act a) {
    switch (a) {
        case Act::relu: return "relu";
        case Act::sigmoid: return "sigmoid";
        case Act::tanh: return "tanh";
        case Act::linear: return "linear";
    }
    throw std::logic_error("act_name: unknown activation");
}

Act act_from_name(const std::string& name) {
    if (name == "relu") return Act::relu;
    if (name == "sigmoid") return Act::sigmoid;
    if (name == "tanh") return Act::tanh;
    if (name == "linear") return Act::linear;
    throw std::runtime_error("unknown activation tag: " + name);
}

void Grads::accumulate(const Grads& other) {
    if (layers.size() != other.layers.size())
        throw std::invalid_argument("Grads::accumulate: layer count mismatch");
    for (std::size_t l = 0; l < layers.size(); ++l) {
        if (layers[l].dw.size() != other.layers[l].dw.size() ||
            layers[l].db.size() != other.layers[l].db.size())
            throw std::invalid_argument("Grads::accumulate: shape mismatch");
        for (std::size_t i = 0; i < layers[l].dw.size(); ++i)
            layers[l].dw[i] += other.layers[l].dw[i];
        for (std::size_t i = 0; i < layers[l].db.size(); ++i)
            layers[l].db[i] += other.layers[l].db[i];
    }
}

void Grads::scale(double factor) {
    for (LayerGrads& lg : layers) {
        for (double& g : lg.dw) g *= factor;
        for (double& g : lg.db) g *= factor;
    }
}

Mlp Mlp::init(const std::vector<int>& sizes, const std::vector<Act>& acts,
              Rng& rng) {
    if (sizes.size() < 2)
        throw std::invalid_argument("Mlp::init: need at least input and output sizes");
    if (acts.size() != sizes.size() - 1)
        throw std::invalid_argument("Mlp::init: need one activation per non-input layer");
    for (int s : sizes)
        if (s <= 0) throw std::invalid_argument("Mlp::init: layer sizes must be > 0");

    Mlp net;
    net.layers.resize(sizes.size() - 1);
    for (std::size_t l = 0; l < net.layers.size(); ++l) {
        Layer& layer = net.layers[l];
        layer.fan_in = sizes[l];
        layer.fan_out = sizes[l + 1];
        layer.act = acts[l];
        layer.w.resize(static_cast<std::size_t>(layer.fan_in) * layer.fan_out);
        layer.b.assign(static_cast<std::size_t>(layer.fan_out), 0.001);
        const double sigma = std::sqrt(2.0 / layer.fan_in);
        for (double& w : layer.w) w = rng.truncated_gaussian(sigma, 2.0);
    }
    return net;
}

std::vector<double> Mlp::forward(const std::vector<double>& x) {
    if (layers.empty()) throw std::logic_error("Mlp::forward: empty network");
    if (static_cast<int>(x.size()) != layers.front().fan_in)
        throw std::invalid_argument("Mlp::forward: input size mismatch");
    inputs_.assign(layers.size(), {});
    zs_.assign(layers.size(), {});
    std::vector<double> cur = x;
    for (std::size_t l = 0; l < layers.size(); ++l) {
        const Layer& layer = layers[l];
        inputs_[l] = cur;
        std::vector<double> z(static_cast<std::size_t>(layer.fan_out));
        for (int r = 0; r < layer.fan_out; ++r) {
            double acc = layer.b[static_cast<std::size_t>(r)];
            const double* row = &layer.w[static_cast<std::size_t>(r) * layer.fan_in];
            for (int c = 0; c < layer.fan_in; ++c) acc += row[c] * cur[static_cast<std::size_t>(c)];
            z[static_cast<std::size_t>(r)] = acc;
        }
        zs_[l] = z;
        cur.resize(z.size());
        for (std::size_t r = 0; r < z.size(); ++r) cur[r] = apply_act(layer.act, z[r]);
    }
    has_cache_ = true;
    return cur;
}

std::vector<double> Mlp::predict(const std::vector<double>& x) const {
    if (layers.empty()) throw std::logic_error("Mlp::predict: empty network");
    if (static_cast<int>(x.size()) != layers.front().fan_in)
        throw std::invalid_argument("Mlp::predict: input size mismatch");
    std::vector<double> cur = x;
    for (const Layer& layer : layers) {
        std::vector<double> next(static_cast<std::size_t>(layer.fan_out));
        for (int r = 0; r < layer.fan_out; ++r) {
            double acc = layer.b[static_cast<std::size_t>(r)];
            const double* row = &layer.w[static_cast<std::size_t>(r) * layer.fan_in];
            for (int c = 0; c < layer.fan_in; ++c) acc += row[c] * cur[static_cast<std::size_t>(c)];
            next[static_cast<std::size_t>(r)] = apply_act(layer.act, acc);
        }
        cur = std::move(next);
    }
    return cur;
}

std::pair<Grads, std::vector<double>> Mlp::backward(
    const std::vector<double>& dy) const {
    if (!has_cache_)
        throw std::logic_error("Mlp::backward: no cached forward pass");
    if (dy.size() != static_cast<std::size_t>(layers.back().fan_out))
        throw std::invalid_argument("Mlp::backward: output gradient size mismatch");

    Grads grads = zero_grads();
    std::vector<double> delta = dy;
    for (std::size_t li = layers.size(); li-- > 0;) {
        const Layer& layer = layers[li];
        const std::vector<double>& z = zs_[li];
        const std::vector<double>& in = inputs_[li];
        std::vector<double> dz(static_cast<std::size_t>(layer.fan_out));
        for (int r = 0; r < layer.fan_out; ++r)
            dz[static_cast<std::size_t>(r)] =
                delta[static_cast<std::size_t>(r)] * act_deriv(layer.act, z[static_cast<std::size_t>(r)]);
        LayerGrads& lg = grads.layers[li];
        for (int r = 0; r < layer.fan_out; ++r) {
            double* drow = &lg.dw[static_cast<std::size_t>(r) * layer.fan_in];
            const double d = dz[static_cast<std::size_t>(r)];
            for (int c = 0; c < layer.fan_in; ++c) drow[c] = d * in[static_cast<std::size_t>(c)];
            lg.db[static_cast<std::size_t>(r)] = d;
        }
        std::vector<double> prev(static_cast<std::size_t>(layer.fan_in), 0.0);
        for (int r = 0; r < layer.fan_out; ++r) {
            const double* row = &layer.w[static_cast<std::size_t>(r) * layer.fan_in];
            const double d = dz[static_cast<std::size_t>(r)];
            for (int c = 0; c < layer.fan_in; ++c) prev[static_cast<std::size_t>(c)] += row[c] * d;
        }
        delta = std::move(prev);
    }
    return {std::move(grads), std::move(delta)};
}

Grads Mlp::zero_grads() const {
    Grads g;
    g.layers.resize(layers.size());
    for (std::size_t l = 0; l < layers.size(); ++l) {
        g.layers[l].dw.assign(layers[l].w.size(), 0.0);
        g.layers[l].db.assign(layers[l].b.size(), 0.0);
    }
    return g;
}

std::vector<int> Mlp::sizes() const {
    std::vector<int> s;
    if (layers.empty()) return s;
    s.push_back(layers.front().fan_in);
    for (const Layer& layer : layers) s.push_back(layer.fan_out);
    return s;
}

void Mlp::save(std::ostream& os) const {
    os << "layers:";
    for (int s : sizes()) os << ' ' << s;
    os << '\n';
    for (const Layer& layer : layers) {
        os << act_name(layer.act) << '\n';
        write_doubles(os, layer.w);
        write_doubles(os, layer.b);
    }
}

void Mlp::save(const std::string& path) const {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("Mlp::save: cannot open " + path);
    save(os);
    if (!os) throw std::runtime_error("Mlp::save: write failed for " + path);
}

Mlp Mlp::load(std::istream& is) {
    std::string tag;
    if (!(is >> tag) || tag != "layers:")
        throw std::runtime_error("Mlp::load: missing 'layers:' header");
    std::string rest;
    std::getline(is, rest);
    std::istringstream header(rest);
    std::vector<int> sizes;
    int s = 0;
    while (header >> s) {
        if (s <= 0) throw std::runtime_error("Mlp::load: non-positive layer size");
        sizes.push_back(s);
    }
    if (sizes.size() < 2)
        throw std::runtime_error("Mlp::load: header needs at least two sizes");

    Mlp net;
    net.layers.resize(sizes.size() - 1);
    for (std::size_t l = 0; l < net.layers.size(); ++l) {
        Layer& layer = net.layers[l];
        layer.fan_in = sizes[l];
        layer.fan_out = sizes[l + 1];
        std::string act_tag;
        if (!(is >> act_tag))
            throw std::runtime_error("Mlp::load: missing activation tag");
        layer.act = act_from_name(act_tag);
        layer.w.resize(static_cast<std::size_t>(layer.fan_in) * layer.fan_out);
        layer.b.resize(static_cast<std::size_t>(layer.fan_out));
        read_doubles(is, layer.w, "weights");
        read_doubles(is, layer.b, "biases");
    }
    return net;
}

Mlp Mlp::load(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("Mlp::load: cannot open " + path);
    return load(is);
}

AdamState AdamState::create(const Mlp& net, double lr_) {
    AdamState st;
    st.lr = lr_;
    Grads zero = net.zero_grads();
    st.m = zero.layers;
    st.v = zero.layers;
    return st;
}

void AdamState::save_state(std::ostream& os) const {
    os << "adam " << t << '\n';
    for (const LayerGrads& lg : m) {
        write_doubles(os, lg.dw);
        write_doubles(os, lg.db);
    }
    for (const LayerGrads& lg : v) {
        write_doubles(os, lg.dw);
        write_doubles(os, lg.db);
    }
}

void AdamState::load_state(std::istream& is) {
    std::string tag;
    if (!(is >> tag) || tag != "adam")
        throw std::runtime_error("AdamState::load_state: missing 'adam' header");
    if (!(is >> t))
        throw std::runtime_error("AdamState::load_state: missing step counter");
    for (LayerGrads& lg : m) {
        read_doubles(is, lg.dw, "first moments");
        read_doubles(is, lg.db, "first moments");
    }
    for (LayerGrads& lg : v) {
        read_doubles(is, lg.dw, "second moments");
        read_doubles(is, lg.db, "second moments");
    }
}

void optimizer_step(Mlp& net, const Grads& grads, AdamState& state) {
    if (grads.layers.size() != net.layers.size() ||
        state.m.size() != net.layers.size())
        throw std::invalid_argument("optimizer_step: shape mismatch");
    for (std::size_t l = 0; l < grads.layers.size(); ++l) {
        for (double g : grads.layers[l].dw)
            if (!std::isfinite(g))
                throw std::runtime_error("optimizer_step: non-finite weight gradient in layer " +
                                         std::to_string(l));
        for (double g : grads.layers[l].db)
            if (!std::isfinite(g))
                throw std::runtime_error("optimizer_step: non-finite bias gradient in layer " +
                                         std::to_string(l));
    }

    state.t += 1;
    const double bc1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.t));
    const double bc2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.t));
    auto update = [&](std::vector<double>& p, const std::vector<double>& g,
                      std::vector<double>& m, std::vector<double>& v) {
        if (p.size() != g.size())
            throw std::invalid_argument("optimizer_step: gradient shape mismatch");
        for (std::size_t i = 0; i < p.size(); ++i) {
            m[i] = state.beta1 * m[i] + (1.0 - state.beta1) * g[i];
            v[i] = state.beta2 * v[i] + (1.0 - state.beta2) * g[i] * g[i];
            const double mhat = m[i] / bc1;
            const double vhat = v[i] / bc2;
            p[i] -= state.lr * mhat / (std::sqrt(vhat) + state.eps);
        }
    };
    for (std::size_t l = 0; l < net.layers.size(); ++l) {
        update(net.layers[l].w, grads.layers[l].dw, state.m[l].dw, state.v[l].dw);
        update(net.layers[l].b, grads.layers[l].db, state.m[l].db, state.v[l].db);
    }
}

} // namespace uavsim
