// Prior-derived guidance structures for the regularized reconstructions:
//   - wTV edge weights        w(x) = eta / sqrt(|grad v|^2 + eta^2)
//   - dTV direction field     xi(x) = grad v / sqrt(|grad v|^2 + eta^2)
//   - per-axis threshold maps m_a(x) = max(omega, 1 - |d_a v| / p99(|d_a v|))
// All maps are computed on the reconstruction grid (resample the prior first).

#pragma once

#include <array>
#include <cmath>
#include <vector>

#include "namri/core.hpp"
#include "namri/grad.hpp"
#include "namri/image_ops.hpp"
#include "namri/phantom.hpp"

namespace namri {

struct EdgeWeightMap {
    GridDims dims;
    std::vector<double> w; // in (0, 1]
};

struct DirectionField {
    GridDims dims;
    std::vector<std::array<double, 3>> xi; // |xi| <= 1, 0 where prior is flat
    double gamma = 0.0;
};

// Default edge scale: eta = 0.01 * max |grad v| (positive fallback for
// constant priors, where any eta gives w == 1 and xi == 0).
inline double default_eta(const GridDims& dims, const std::vector<double>& prior)
{
    GradField g;
    gradient(dims, prior, g);
    double max_mag = 0.0;
    for (std::size_t i = 0; i < prior.size(); ++i) {
        const double m2 = g[0][i] * g[0][i] + g[1][i] * g[1][i] + g[2][i] * g[2][i];
        max_mag = std::max(max_mag, m2);
    }
    max_mag = std::sqrt(max_mag);
    return max_mag > 0.0 ? 0.01 * max_mag : 1.0;
}

inline EdgeWeightMap compute_wtv_weights(const Image& prior, double eta)
{
    require(eta > 0.0, "compute_wtv_weights: eta must be > 0");
    GradField g;
    gradient(prior.dims, prior.data, g);

    EdgeWeightMap map;
    map.dims = prior.dims;
    map.w.resize(prior.data.size());
    for (std::size_t i = 0; i < map.w.size(); ++i) {
        const double m2 = g[0][i] * g[0][i] + g[1][i] * g[1][i] + g[2][i] * g[2][i];
        map.w[i] = eta / std::sqrt(m2 + eta * eta);
    }
    return map;
}

inline DirectionField compute_dtv_field(const Image& prior, double eta, double gamma)
{
    require(eta > 0.0, "compute_dtv_field: eta must be > 0");
    require(gamma >= 0.0 && gamma <= 1.0, "compute_dtv_field: gamma must be in [0,1]");
    GradField g;
    gradient(prior.dims, prior.data, g);

    DirectionField field;
    field.dims = prior.dims;
    field.gamma = gamma;
    field.xi.resize(prior.data.size());
    for (std::size_t i = 0; i < field.xi.size(); ++i) {
        const double m2 = g[0][i] * g[0][i] + g[1][i] * g[1][i] + g[2][i] * g[2][i];
        const double s = 1.0 / std::sqrt(m2 + eta * eta);
        field.xi[i] = {g[0][i] * s, g[1][i] * s, g[2][i] * s};
    }
    return field;
}

// Inverted, normalized per-axis prior derivatives floored at omega; the
// normalizer is the 99th percentile of |d_a v| (robust to outliers). A flat
// prior (or omega = 1) gives maps identically 1.
inline std::array<std::vector<double>, 3> compute_agtv_maps(const Image& prior, double omega)
{
    require(omega >= 0.0 && omega <= 1.0, "compute_agtv_maps: omega must be in [0,1]");
    GradField g;
    gradient(prior.dims, prior.data, g);

    std::array<std::vector<double>, 3> maps;
    for (int a = 0; a < 3; ++a) {
        maps[a].assign(prior.data.size(), 1.0);
        std::vector<double> mags(prior.data.size());
        for (std::size_t i = 0; i < mags.size(); ++i) mags[i] = std::fabs(g[a][i]);
        const double p99 = quantile(mags, 0.99);
        if (p99 <= 0.0) continue;
        for (std::size_t i = 0; i < mags.size(); ++i)
            maps[a][i] = std::max(omega, 1.0 - mags[i] / p99);
    }
    return maps;
}

// Resample a prior image onto the reconstruction grid (same FOV, trilinear).
inline Image resample_prior(const PriorImage& prior, const GridDims& recon_dims)
{
    return resample_trilinear(prior.values, recon_dims);
}

} // namespace namri
