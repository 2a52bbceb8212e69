#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "uavsim/rng.hpp"

namespace uavsim {

enum class Act { relu, sigmoid, tanh, linear };

const char* act_name(Act a);
Act act_from_name(const std::string& name); // throws on unknown tag

struct Layer {
    int fan_in = 0;
    int fan_out = 0;
    std::vector<double> w; // fan_out x fan_in, row-major
    std::vector<double> b; // fan_out
    Act act = Act::linear;
};

struct LayerGrads {
    std::vector<double> dw;
    std::vector<double> db;
};

struct Grads {
    std::vector<LayerGrads> layers;

    void accumulate(const Grads& other);
    void scale(double factor);
};

// Dense network with per-layer activation tags. forward() caches the values
// backward() needs; predict() is the cache-free inference path.
class Mlp {
public:
    std::vector<Layer> layers;

    // Weights ~ truncated normal(0, sqrt(2/fan_in)) cut at 2 sigma,
    // biases all 0.001.
    static Mlp init(const std::vector<int>& sizes, const std::vector<Act>& acts,
                    Rng& rng);

    std::vector<double> forward(const std::vector<double>& x);
    std::vector<double> predict(const std::vector<double>& x) const;

    // Reverse-mode gradients of the most recent forward() input.
    std::pair<Grads, std::vector<double>> backward(
        const std::vector<double>& dy) const;

    Grads zero_grads() const;
    std::vector<int> sizes() const;

    void save(std::ostream& os) const;
    void save(const std::string& path) const;
    static Mlp load(std::istream& is);
    static Mlp load(const std::string& path);

private:
    std::vector<std::vector<double>> inputs_; // per-layer forward inputs
    std::vector<std::vector<double>> zs_;     // per-layer pre-activations
    bool has_cache_ = false;
};

// Adaptive-moment optimizer state for one network.
struct AdamState {
    double lr = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    long long t = 0;
    std::vector<LayerGrads> m; // first moments, shaped like the grads
    std::vector<LayerGrads> v; // second moments

    static AdamState create(const Mlp& net, double lr);
    void save_state(std::ostream& os) const;
    void load_state(std::istream& is); // shape must already match
};

// One bias-corrected update; rejects non-finite gradients.
void optimizer_step(Mlp& net, const Grads& grads, AdamState& state);

} // namespace uavsim
