#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace evlink {

// splitmix64 finalizer; full-avalanche 64-bit hash.
inline std::uint64_t avalanche64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Per-pixel stream derivation: seed ^ hash(x, y). Order-independent, so
// pixel simulations can run in any order (or in parallel) with identical
// results.
inline std::uint64_t pixel_seed(std::uint64_t seed, int x, int y) {
    const std::uint64_t key = (static_cast<std::uint64_t>(static_cast<std::uint32_t>(x)) << 32) |
                              static_cast<std::uint64_t>(static_cast<std::uint32_t>(y));
    return seed ^ avalanche64(key);
}

// mt19937_64 with explicit variate transforms. The engine's output sequence
// is pinned by the standard; the transforms below avoid the
// implementation-defined std::*_distribution mappings so artifacts are
// byte-identical for a given seed.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t next_u64() { return eng_(); }

    // Uniform in [0, 1), 53-bit mantissa.
    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    // Exponential inter-arrival gap for a Poisson process of `rate_hz`.
    double exponential_s(double rate_hz) {
        double u;
        do {
            u = uniform();
        } while (u <= 0.0);
        return -std::log(u) / rate_hz;
    }

    // Zero-mean Gaussian via Box-Muller, one spare cached.
    double normal(double sigma) {
        if (has_spare_) {
            has_spare_ = false;
            return spare_ * sigma;
        }
        double u1;
        do {
            u1 = uniform();
        } while (u1 <= 0.0);
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 2.0 * 3.14159265358979323846 * u2;
        spare_ = r * std::sin(theta);
        has_spare_ = true;
        return r * std::cos(theta) * sigma;
    }

    int coin_bit() { return (eng_() >> 63) & 1 ? 1 : 0; }

private:
    std::mt19937_64 eng_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace evlink
