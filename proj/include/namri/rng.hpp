// Deterministic random number generation.
//
// The pipeline promises bitwise-reproducible outputs for a fixed master seed,
// across compilers and standard libraries. std::normal_distribution is
// implementation-defined, so Gaussian draws are generated here with a fixed
// Box-Muller transform on top of xoshiro256++.

#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>

namespace namri {

inline std::uint64_t splitmix64(std::uint64_t& state)
{
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Stable stream derivation: hash a label into the master seed so that each
// pipeline cell draws from an independent, order-free stream.
inline std::uint64_t derive_seed(std::uint64_t master, std::string_view label)
{
    std::uint64_t h = 0xcbf29ce484222325ULL ^ master;
    for (char c : label) {
        h ^= std::uint64_t(static_cast<unsigned char>(c));
        h *= 0x100000001b3ULL;
    }
    std::uint64_t s = h;
    return splitmix64(s);
}

class Rng {
public:
    explicit Rng(std::uint64_t seed)
    {
        std::uint64_t sm = seed;
        for (auto& w : state_) w = splitmix64(sm);
        have_spare_ = false;
        spare_ = 0.0;
    }

    std::uint64_t next_u64()
    {
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // Uniform in [0, 1) with 53-bit resolution.
    double uniform() { return double(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Standard normal via Box-Muller; pairs are cached for determinism.
    double gaussian()
    {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 2.0 * 3.14159265358979323846 * u2;
        spare_ = r * std::sin(theta);
        have_spare_ = true;
        return r * std::cos(theta);
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    std::uint64_t state_[4];
    bool have_spare_;
    double spare_;
};

} // namespace namri
