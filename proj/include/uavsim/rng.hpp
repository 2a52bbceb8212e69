#ifndef UAVSIM_RNG_HPP
#define UAVSIM_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>

namespace uavsim {

// Deterministic random source. All distributions are implemented here on top
// of the raw engine output so that sampled sequences do not depend on the
// standard library's distribution internals. Same seed, same stream,
// everywhere.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform on [0, 1) with 53 random bits.
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Uniform index in [0, n). Multiply-shift; bias is O(n / 2^64).
    std::uint64_t uniform_index(std::uint64_t n) {
        if (n == 0) throw std::invalid_argument("uniform_index: n must be positive");
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(engine_()) * n) >> 64);
    }

    // Standard normal via Box-Muller. The second variate is discarded so the
    // consumed engine state per call is fixed.
    double gaussian() {
        double u1 = uniform();
        double u2 = uniform();
        if (u1 <= 0.0) u1 = 0x1.0p-53;
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    }

    double gaussian(double mean, double stddev) {
        return mean + stddev * gaussian();
    }

    // Normal(0, stddev) truncated to +-bound_sigmas by rejection.
    double truncated_gaussian(double stddev, double bound_sigmas) {
        for (;;) {
            double z = gaussian();
            if (std::abs(z) <= bound_sigmas) return z * stddev;
        }
    }

    // Poisson count via Knuth's product-of-uniforms method. Exact for the
    // lambdas used here (<= a few tens).
    int poisson(double lambda) {
        if (lambda < 0.0) throw std::invalid_argument("poisson: lambda must be >= 0");
        if (lambda == 0.0) return 0;
        const double limit = std::exp(-lambda);
        int k = 0;
        double p = 1.0;
        do {
            ++k;
            p *= uniform();
        } while (p > limit);
        return k - 1;
    }

    // Derives an independent substream seed (splitmix64 of seed + stream tag).
    static std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
        std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    std::string save_state() const {
        std::ostringstream os;
        os << engine_;
        return os.str();
    }

    void load_state(const std::string& state) {
        std::istringstream is(state);
        is >> engine_;
        if (!is) throw std::runtime_error("Rng::load_state: malformed engine state");
    }

    bool operator==(const Rng& other) const { return engine_ == other.engine_; }

private:
    std::mt19937_64 engine_;
};

} // namespace uavsim

#endif
