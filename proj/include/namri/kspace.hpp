// Multi-coil k-space sample container and noise synthesis.

#pragma once

#include <vector>

#include "namri/core.hpp"
#include "namri/rng.hpp"
#include "namri/trajectory.hpp"

namespace namri {

struct KSpaceData {
    GridDims dims;        // image grid the data was synthesised from
    Trajectory traj;
    int n_coils = 0;
    std::vector<cdouble> samples; // [coil][spoke][sample], sample fastest
    double noise_sigma = 0.0;     // per-component std of added noise, a.u.
    std::uint64_t seed = 0;

    std::size_t index(int coil, int spoke, int sample) const
    {
        return (std::size_t(coil) * traj.n_spokes + spoke) * traj.samples_per_spoke + sample;
    }

    bool shape_consistent() const
    {
        return samples.size() == std::size_t(n_coils) * traj.n_samples_total();
    }
};

// Adds i.i.d. circularly symmetric complex Gaussian noise, sigma per
// real/imag component. sigma == 0 returns the input bit-exactly.
inline KSpaceData add_noise(const KSpaceData& data, double sigma, std::uint64_t seed)
{
    require(sigma >= 0.0, "add_noise: sigma must be >= 0");
    KSpaceData out = data;
    out.noise_sigma = sigma;
    out.seed = seed;
    if (sigma == 0.0) return out;
    Rng rng(derive_seed(seed, "kspace-noise"));
    for (auto& s : out.samples)
        s += cdouble(sigma * rng.gaussian(), sigma * rng.gaussian());
    return out;
}

} // namespace namri
