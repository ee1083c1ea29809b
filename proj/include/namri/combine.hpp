// Adaptive multi-coil combination: per-voxel weights are the dominant
// eigenvector of the local coil-signal sample covariance, estimated over a
// sliding window (clamped at borders). The eigenvector is unit-norm, which
// makes a single unit-sensitivity coil an identity pass and two identical
// coils combine to sqrt(2) x the input magnitude.

#pragma once

#include <cmath>
#include <vector>

#include "namri/core.hpp"

namespace namri {

inline Image adaptive_combine(const std::vector<CImage>& coil_images, int window_size)
{
    require(!coil_images.empty(), "adaptive_combine: need at least one coil image");
    const GridDims dims = coil_images[0].dims;
    for (const auto& ci : coil_images) require_same_dims(dims, ci.dims, "adaptive_combine");
    require(window_size >= 1 && window_size % 2 == 1,
            "adaptive_combine: window size must be odd and >= 1");
    require(window_size <= dims.nx && window_size <= dims.ny &&
                (dims.nz == 1 || window_size <= dims.nz),
            "adaptive_combine: window larger than image");

    const int nc = int(coil_images.size());
    const int hw = window_size / 2;
    Image out(dims, coil_images[0].voxel, "a.u.");

    std::vector<cdouble> R(std::size_t(nc) * nc);
    std::vector<cdouble> v(nc), w(nc);

    std::size_t idx = 0;
    for (int z = 0; z < dims.nz; ++z)
        for (int y = 0; y < dims.ny; ++y)
            for (int x = 0; x < dims.nx; ++x, ++idx) {
                std::fill(R.begin(), R.end(), cdouble(0, 0));
                const int zlo = dims.nz == 1 ? 0 : std::max(0, z - hw);
                const int zhi = dims.nz == 1 ? 0 : std::min(dims.nz - 1, z + hw);
                for (int zz = zlo; zz <= zhi; ++zz)
                    for (int yy = std::max(0, y - hw); yy <= std::min(dims.ny - 1, y + hw); ++yy)
                        for (int xx = std::max(0, x - hw); xx <= std::min(dims.nx - 1, x + hw);
                             ++xx) {
                            const std::size_t p = dims.index(xx, yy, zz);
                            for (int a = 0; a < nc; ++a) {
                                const cdouble sa = coil_images[a].data[p];
                                for (int b = 0; b < nc; ++b)
                                    R[a * nc + b] += sa * std::conj(coil_images[b].data[p]);
                            }
                        }

                // dominant eigenvector by power iteration, deterministic start
                int start = 0;
                double best = -1.0;
                for (int a = 0; a < nc; ++a) {
                    const double dmag = R[a * nc + a].real();
                    if (dmag > best) {
                        best = dmag;
                        start = a;
                    }
                }
                std::fill(v.begin(), v.end(), cdouble(0, 0));
                v[start] = cdouble(1, 0);
                if (best > 0.0) {
                    for (int it = 0; it < 20; ++it) {
                        for (int a = 0; a < nc; ++a) {
                            cdouble acc(0, 0);
                            for (int b = 0; b < nc; ++b) acc += R[a * nc + b] * v[b];
                            w[a] = acc;
                        }
                        double nrm = 0.0;
                        for (int a = 0; a < nc; ++a) nrm += std::norm(w[a]);
                        nrm = std::sqrt(nrm);
                        if (nrm == 0.0) break;
                        for (int a = 0; a < nc; ++a) v[a] = w[a] / nrm;
                    }
                }

                cdouble comb(0, 0);
                for (int a = 0; a < nc; ++a)
                    comb += std::conj(v[a]) * coil_images[a].data[idx];
                out.data[idx] = std::abs(comb);
            }
    return out;
}

// Root-sum-of-squares reference combine.
inline Image rss_combine(const std::vector<CImage>& coil_images)
{
    require(!coil_images.empty(), "rss_combine: need at least one coil image");
    const GridDims dims = coil_images[0].dims;
    Image out(dims, coil_images[0].voxel, "a.u.");
    for (std::size_t i = 0; i < out.data.size(); ++i) {
        double acc = 0.0;
        for (const auto& ci : coil_images) acc += std::norm(ci.data[i]);
        out.data[i] = std::sqrt(acc);
    }
    return out;
}

} // namespace namri
