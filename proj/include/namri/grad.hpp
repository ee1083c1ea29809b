// Forward-difference gradient with Neumann boundary and its exact adjoint.
// Axes of extent 1 are skipped, so the same code covers 2D and 3D grids.

#pragma once

#include <array>
#include <vector>

#include "namri/core.hpp"

namespace namri {

using GradField = std::array<std::vector<double>, 3>; // per-axis components

inline int active_axes(const GridDims& d)
{
    return (d.nx > 1 ? 1 : 0) + (d.ny > 1 ? 1 : 0) + (d.nz > 1 ? 1 : 0);
}

// (grad u)_a(x) = u(x + e_a) - u(x), zero on the far boundary.
inline void gradient(const GridDims& d, const std::vector<double>& u, GradField& g)
{
    const std::size_t n = d.total();
    const int na[3] = {d.nx, d.ny, d.nz};
    const std::ptrdiff_t stride[3] = {1, d.nx, std::ptrdiff_t(d.nx) * d.ny};

    for (int a = 0; a < 3; ++a) {
        g[a].assign(n, 0.0);
        if (na[a] == 1) continue;
        std::size_t idx = 0;
        for (int z = 0; z < d.nz; ++z)
            for (int y = 0; y < d.ny; ++y)
                for (int x = 0; x < d.nx; ++x, ++idx) {
                    const int pos = a == 0 ? x : (a == 1 ? y : z);
                    if (pos < na[a] - 1) g[a][idx] = u[idx + stride[a]] - u[idx];
                }
    }
}

// Adjoint of gradient: <grad u, p> = <u, gradient_adjoint(p)> exactly.
inline void gradient_adjoint(const GridDims& d, const GradField& p, std::vector<double>& out)
{
    const std::size_t n = d.total();
    out.assign(n, 0.0);
    const int na[3] = {d.nx, d.ny, d.nz};
    const std::ptrdiff_t stride[3] = {1, d.nx, std::ptrdiff_t(d.nx) * d.ny};

    for (int a = 0; a < 3; ++a) {
        if (na[a] == 1) continue;
        std::size_t idx = 0;
        for (int z = 0; z < d.nz; ++z)
            for (int y = 0; y < d.ny; ++y)
                for (int x = 0; x < d.nx; ++x, ++idx) {
                    const int pos = a == 0 ? x : (a == 1 ? y : z);
                    if (pos < na[a] - 1) out[idx] -= p[a][idx];
                    if (pos > 0) out[idx] += p[a][idx - stride[a]];
                }
    }
}

} // namespace namri
