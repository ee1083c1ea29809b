// Synthetic receive-coil sensitivity profiles.
//
// Gaussian-lobed magnitudes centred on a ring at the FOV boundary with
// per-coil linear phase ramps. Profiles are smooth, deterministic per seed,
// and their root-sum-of-squares stays well above zero inside the FOV ball.

#pragma once

#include <cmath>
#include <vector>

#include "namri/core.hpp"
#include "namri/rng.hpp"

namespace namri {

struct CoilSensitivities {
    GridDims dims;
    int n_coils = 0;
    std::vector<std::vector<cdouble>> maps; // [coil][voxel]

    const std::vector<cdouble>& coil(int c) const { return maps[c]; }
};

inline CoilSensitivities make_coils(GridDims dims, int n_coils, std::uint64_t seed)
{
    require(n_coils >= 1, "make_coils: n_coils must be >= 1");

    CoilSensitivities cs;
    cs.dims = dims;
    cs.n_coils = n_coils;
    cs.maps.assign(n_coils, std::vector<cdouble>(dims.total()));

    if (n_coils == 1) {
        // Degenerate single coil: unit magnitude, zero phase.
        for (auto& v : cs.maps[0]) v = cdouble(1.0, 0.0);
        return cs;
    }

    Rng rng(derive_seed(seed, "coils"));
    const double pi = 3.14159265358979323846;
    const double R = 0.5 * std::min(dims.nx, dims.ny);
    const double sigma = R * (0.55 + 0.6 / n_coils);

    const double cx = dims.nx / 2, cy = dims.ny / 2, cz = dims.nz / 2;

    for (int c = 0; c < n_coils; ++c) {
        const double jitter = rng.uniform(-0.05, 0.05);
        const double theta = 2.0 * pi * (c + jitter) / n_coils;
        const double lx = cx + R * std::cos(theta);
        const double ly = cy + R * std::sin(theta);
        const double lz = cz; // lobes sit on the equatorial ring in 3D

        // Gentle linear phase ramp, at most ~0.2 cycles across the FOV.
        const double ax = rng.uniform(-0.2, 0.2) / dims.nx;
        const double ay = rng.uniform(-0.2, 0.2) / dims.ny;
        const double az = dims.is_2d() ? 0.0 : rng.uniform(-0.2, 0.2) / dims.nz;
        const double phi0 = rng.uniform(0.0, 2.0 * pi);

        auto& map = cs.maps[c];
        for (int z = 0; z < dims.nz; ++z)
            for (int y = 0; y < dims.ny; ++y)
                for (int x = 0; x < dims.nx; ++x) {
                    const double dx = x - lx, dy = y - ly, dz = z - lz;
                    const double d2 = dx * dx + dy * dy + dz * dz;
                    const double mag = std::exp(-d2 / (2.0 * sigma * sigma));
                    const double phase =
                        phi0 + 2.0 * pi * (ax * (x - cx) + ay * (y - cy) + az * (z - cz));
                    map[std::size_t(x) +
                        std::size_t(dims.nx) * (std::size_t(y) + std::size_t(dims.ny) * z)] =
                        cdouble(mag * std::cos(phase), mag * std::sin(phase));
                }
    }
    return cs;
}

// Root-sum-of-squares magnitude of the coil set.
inline Image coil_rss(const CoilSensitivities& cs)
{
    Image rss(cs.dims);
    for (std::size_t i = 0; i < rss.size(); ++i) {
        double s = 0;
        for (int c = 0; c < cs.n_coils; ++c) s += std::norm(cs.maps[c][i]);
        rss.data[i] = std::sqrt(s);
    }
    return rss;
}

} // namespace namri
