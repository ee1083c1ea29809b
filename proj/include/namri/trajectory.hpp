// Radial k-space trajectories: uniform and density-adapted center-out spokes.
//
// Sample coordinates are normalised cycles/voxel, radius in [0, 0.5]. Spokes
// are center-out rays; 2D directions cover [0, pi) (half-plane) and 3D
// directions are spherical Fibonacci points on the upper half-sphere. Real
// images carry Hermitian-symmetric spectra, so half-coverage is complete and
// every per-sample density weight counts the full (mirrored) shell measure.
//
// Density-adapted mode: radii are equally spaced up to k0 = k0_fraction*kmax,
// beyond k0 consecutive samples enclose equal shell volumes,
// r_i = (k0^d + i*c)^(1/d), which keeps the per-volume sampling density (and
// hence the density weight) flat.

#pragma once

#include <array>
#include <cmath>
#include <vector>

#include "namri/core.hpp"

namespace namri {

inline constexpr double kMaxRadius = 0.5;

enum class TrajMode { UniformRadial, DensityAdapted };

inline const char* to_string(TrajMode m)
{
    return m == TrajMode::UniformRadial ? "uniform-radial" : "density-adapted";
}

struct Trajectory {
    int ndim = 2;
    int n_spokes = 0;
    int samples_per_spoke = 0;
    TrajMode mode = TrajMode::UniformRadial;
    double k0_fraction = 0.2;

    std::vector<std::array<double, 3>> directions; // unit vectors, one per spoke
    std::vector<double> radii;                     // per sample along a spoke, nondecreasing
    std::vector<double> weights;                   // per sample k-space shell measure

    std::size_t n_samples_total() const
    {
        return std::size_t(n_spokes) * samples_per_spoke;
    }

    // k-space coordinate (cycles/voxel) of sample s on spoke j.
    std::array<double, 3> k_at(int spoke, int sample) const
    {
        const double r = radii[sample];
        const auto& d = directions[spoke];
        return {r * d[0], r * d[1], r * d[2]};
    }
};

namespace detail {

inline double ball_volume(double r, int ndim)
{
    return ndim == 2 ? 3.14159265358979323846 * r * r
                     : (4.0 / 3.0) * 3.14159265358979323846 * r * r * r;
}

// Radial sample positions for density-adapted mode. The uniform/adapted split
// index n0 is chosen so the first adapted step continues the uniform spacing.
inline std::vector<double> density_adapted_radii(int m, int ndim, double k0)
{
    const double kmax_d = std::pow(kMaxRadius, ndim);
    const double k0_d = std::pow(k0, ndim);

    int best_n0 = 2;
    double best_err = -1.0;
    for (int n0 = 2; n0 <= m - 1; ++n0) {
        const double delta0 = k0 / (n0 - 1);
        const double c = (kmax_d - k0_d) / (m - n0);
        const double c_cont = ndim * std::pow(k0, ndim - 1) * delta0;
        const double err = std::abs(c - c_cont);
        if (best_err < 0 || err < best_err) {
            best_err = err;
            best_n0 = n0;
        }
    }

    const int n0 = best_n0;
    const double delta0 = k0 / (n0 - 1);
    const double c = (kmax_d - k0_d) / (m - n0);
    std::vector<double> r(m);
    for (int i = 0; i < n0; ++i) r[i] = i * delta0;
    for (int i = n0; i < m; ++i) r[i] = std::pow(k0_d + (i - n0 + 1) * c, 1.0 / ndim);
    r[m - 1] = kMaxRadius; // exact endpoint
    return r;
}

// Per-sample weights: measure of the full k-space shell between cell
// midpoints, split across spokes. Mirrored (Hermitian) coverage is folded in
// by using the full-sphere shell volume.
inline std::vector<double> shell_weights(const std::vector<double>& radii, int n_spokes, int ndim)
{
    const int m = int(radii.size());
    std::vector<double> w(m);
    for (int i = 0; i < m; ++i) {
        const double lo = (i == 0) ? 0.0 : 0.5 * (radii[i - 1] + radii[i]);
        const double hi = (i == m - 1) ? radii[m - 1] + 0.5 * (radii[m - 1] - radii[m - 2])
                                       : 0.5 * (radii[i] + radii[i + 1]);
        w[i] = (ball_volume(hi, ndim) - ball_volume(lo, ndim)) / double(n_spokes);
    }
    return w;
}

} // namespace detail

inline Trajectory make_radial_trajectory(int n_spokes, int samples_per_spoke, GridDims dims,
                                         TrajMode mode = TrajMode::UniformRadial,
                                         double k0_fraction = 0.2)
{
    require(n_spokes >= 1, "make_radial_trajectory: n_spokes must be >= 1");
    require(samples_per_spoke >= 8, "make_radial_trajectory: samples_per_spoke must be >= 8");
    require(k0_fraction > 0.0 && k0_fraction <= 0.5,
            "make_radial_trajectory: k0_fraction must lie in (0, 0.5]");

    Trajectory traj;
    traj.ndim = dims.ndim();
    traj.n_spokes = n_spokes;
    traj.samples_per_spoke = samples_per_spoke;
    traj.mode = mode;
    traj.k0_fraction = k0_fraction;

    traj.directions.resize(n_spokes);
    if (traj.ndim == 2) {
        for (int j = 0; j < n_spokes; ++j) {
            const double theta = 3.14159265358979323846 * j / n_spokes;
            traj.directions[j] = {std::cos(theta), std::sin(theta), 0.0};
        }
    } else {
        // Spherical Fibonacci points on the upper half-sphere.
        const double golden_angle = 3.14159265358979323846 * (3.0 - std::sqrt(5.0));
        for (int j = 0; j < n_spokes; ++j) {
            const double z = (j + 0.5) / n_spokes;
            const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
            const double phi = golden_angle * j;
            std::array<double, 3> d = {rho * std::cos(phi), rho * std::sin(phi), z};
            const double n = std::sqrt(d[0] * d[0] + d[1] * d[1] + d[2] * d[2]);
            traj.directions[j] = {d[0] / n, d[1] / n, d[2] / n};
        }
    }

    if (mode == TrajMode::UniformRadial) {
        traj.radii.resize(samples_per_spoke);
        for (int i = 0; i < samples_per_spoke; ++i)
            traj.radii[i] = kMaxRadius * i / double(samples_per_spoke - 1);
    } else {
        traj.radii =
            detail::density_adapted_radii(samples_per_spoke, traj.ndim, k0_fraction * kMaxRadius);
    }

    traj.weights = detail::shell_weights(traj.radii, n_spokes, traj.ndim);
    return traj;
}

} // namespace namri
