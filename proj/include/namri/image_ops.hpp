// Grid-level helpers shared by phantom construction, priors and metrics:
// separable Gaussian smoothing, same-FOV resampling, block averaging,
// binary morphology and quantiles.

#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "namri/core.hpp"

namespace namri {

// Separable Gaussian blur, sigma in voxels per active axis. Border handling:
// kernel renormalized over the in-grid support (no padding bias).
inline Image gaussian_smooth(const Image& img, double sigma)
{
    require(sigma >= 0.0, "gaussian_smooth: sigma must be >= 0");
    if (sigma == 0.0) return img;

    const int radius = std::max(1, int(std::ceil(3.0 * sigma)));
    std::vector<double> kernel(2 * radius + 1);
    for (int i = -radius; i <= radius; ++i)
        kernel[i + radius] = std::exp(-0.5 * (i * i) / (sigma * sigma));

    Image out = img;
    Image tmp = img;
    const GridDims& d = img.dims;
    const int n[3] = {d.nx, d.ny, d.nz};
    const std::size_t stride[3] = {1, std::size_t(d.nx), std::size_t(d.nx) * d.ny};

    for (int axis = 0; axis < 3; ++axis) {
        if (n[axis] == 1) continue;
        const Image& src = out;
        std::size_t idx = 0;
        for (int z = 0; z < d.nz; ++z)
            for (int y = 0; y < d.ny; ++y)
                for (int x = 0; x < d.nx; ++x, ++idx) {
                    const int pos[3] = {x, y, z};
                    double acc = 0.0, wsum = 0.0;
                    for (int i = -radius; i <= radius; ++i) {
                        const int p = pos[axis] + i;
                        if (p < 0 || p >= n[axis]) continue;
                        const double w = kernel[i + radius];
                        acc += w * src.data[idx + (p - pos[axis]) * std::ptrdiff_t(stride[axis])];
                        wsum += w;
                    }
                    tmp.data[idx] = acc / wsum;
                }
        std::swap(out.data, tmp.data);
    }
    return out;
}

// Trilinear resample onto target_dims covering the same physical FOV.
// Voxel sizes rescale so n*voxel stays fixed per axis; border clamped.
inline Image resample_trilinear(const Image& img, const GridDims& target_dims)
{
    const GridDims& s = img.dims;
    VoxelSize tv = img.voxel;
    tv.x = img.voxel.x * s.nx / target_dims.nx;
    tv.y = img.voxel.y * s.ny / target_dims.ny;
    tv.z = s.nz == 1 ? img.voxel.z : img.voxel.z * s.nz / target_dims.nz;
    require(!(s.nz == 1) || target_dims.nz == 1,
            "resample_trilinear: cannot resample a 2D image to 3D");

    Image out(target_dims, tv, img.units);
    auto clampi = [](int v, int lo, int hi) { return std::max(lo, std::min(hi, v)); };

    std::size_t idx = 0;
    for (int z = 0; z < target_dims.nz; ++z)
        for (int y = 0; y < target_dims.ny; ++y)
            for (int x = 0; x < target_dims.nx; ++x, ++idx) {
                // physical position of the target voxel centre, then source index coords
                const double px = (x - target_dims.nx / 2) * tv.x;
                const double py = (y - target_dims.ny / 2) * tv.y;
                const double pz = (z - target_dims.nz / 2) * tv.z;
                const double fx = px / img.voxel.x + s.nx / 2;
                const double fy = py / img.voxel.y + s.ny / 2;
                const double fz = s.nz == 1 ? 0.0 : pz / img.voxel.z + s.nz / 2;

                const int x0 = clampi(int(std::floor(fx)), 0, s.nx - 1);
                const int y0 = clampi(int(std::floor(fy)), 0, s.ny - 1);
                const int z0 = clampi(int(std::floor(fz)), 0, s.nz - 1);
                const int x1 = clampi(x0 + 1, 0, s.nx - 1);
                const int y1 = clampi(y0 + 1, 0, s.ny - 1);
                const int z1 = clampi(z0 + 1, 0, s.nz - 1);
                const double tx = std::clamp(fx - x0, 0.0, 1.0);
                const double ty = std::clamp(fy - y0, 0.0, 1.0);
                const double tz = std::clamp(fz - z0, 0.0, 1.0);

                auto v = [&](int xi, int yi, int zi) { return img.at(xi, yi, zi); };
                const double c00 = v(x0, y0, z0) * (1 - tx) + v(x1, y0, z0) * tx;
                const double c10 = v(x0, y1, z0) * (1 - tx) + v(x1, y1, z0) * tx;
                const double c01 = v(x0, y0, z1) * (1 - tx) + v(x1, y0, z1) * tx;
                const double c11 = v(x0, y1, z1) * (1 - tx) + v(x1, y1, z1) * tx;
                const double c0 = c00 * (1 - ty) + c10 * ty;
                const double c1 = c01 * (1 - ty) + c11 * ty;
                out.data[idx] = c0 * (1 - tz) + c1 * tz;
            }
    return out;
}

namespace detail {

// Source index range covered by target cell t when mapping n_src onto n_tgt.
inline void cell_range(int t, int n_tgt, int n_src, int& lo, int& hi)
{
    lo = int(std::floor(double(t) * n_src / n_tgt));
    hi = int(std::ceil(double(t + 1) * n_src / n_tgt));
    hi = std::max(hi, lo + 1);
    lo = std::clamp(lo, 0, n_src - 1);
    hi = std::clamp(hi, lo + 1, n_src);
}

} // namespace detail

// Block-average downsample (or cell-average resample generally); same FOV.
inline Image downsample_mean(const Image& img, const GridDims& target_dims)
{
    const GridDims& s = img.dims;
    VoxelSize tv{img.voxel.x * s.nx / target_dims.nx, img.voxel.y * s.ny / target_dims.ny,
                 s.nz == 1 ? img.voxel.z : img.voxel.z * s.nz / target_dims.nz};
    Image out(target_dims, tv, img.units);

    std::size_t idx = 0;
    for (int z = 0; z < target_dims.nz; ++z) {
        int zlo, zhi;
        detail::cell_range(z, target_dims.nz, s.nz, zlo, zhi);
        for (int y = 0; y < target_dims.ny; ++y) {
            int ylo, yhi;
            detail::cell_range(y, target_dims.ny, s.ny, ylo, yhi);
            for (int x = 0; x < target_dims.nx; ++x, ++idx) {
                int xlo, xhi;
                detail::cell_range(x, target_dims.nx, s.nx, xlo, xhi);
                double acc = 0.0;
                long cnt = 0;
                for (int zz = zlo; zz < zhi; ++zz)
                    for (int yy = ylo; yy < yhi; ++yy)
                        for (int xx = xlo; xx < xhi; ++xx, ++cnt)
                            acc += img.at(xx, yy, zz);
                out.data[idx] = acc / cnt;
            }
        }
    }
    return out;
}

// Majority-vote resample of a boolean grid; ties count as outside.
inline MaskVolume resample_mask_majority(const MaskVolume& mask, const GridDims& target_dims)
{
    const GridDims& s = mask.dims;
    VoxelSize tv{mask.voxel.x * s.nx / target_dims.nx, mask.voxel.y * s.ny / target_dims.ny,
                 s.nz == 1 ? mask.voxel.z : mask.voxel.z * s.nz / target_dims.nz};
    MaskVolume out(target_dims, tv, mask.units);

    std::size_t idx = 0;
    for (int z = 0; z < target_dims.nz; ++z) {
        int zlo, zhi;
        detail::cell_range(z, target_dims.nz, s.nz, zlo, zhi);
        for (int y = 0; y < target_dims.ny; ++y) {
            int ylo, yhi;
            detail::cell_range(y, target_dims.ny, s.ny, ylo, yhi);
            for (int x = 0; x < target_dims.nx; ++x, ++idx) {
                int xlo, xhi;
                detail::cell_range(x, target_dims.nx, s.nx, xlo, xhi);
                long inside = 0, total = 0;
                for (int zz = zlo; zz < zhi; ++zz)
                    for (int yy = ylo; yy < yhi; ++yy)
                        for (int xx = xlo; xx < xhi; ++xx, ++total)
                            inside += mask.at(xx, yy, zz) ? 1 : 0;
                out.data[idx] = (2 * inside > total) ? 1 : 0;
            }
        }
    }
    return out;
}

// One face-connected (cross neighbourhood) erosion step, repeated `iters` times.
inline MaskVolume erode_mask(const MaskVolume& mask, int iters)
{
    require(iters >= 0, "erode_mask: iters must be >= 0");
    MaskVolume cur = mask;
    const GridDims& d = mask.dims;
    for (int it = 0; it < iters; ++it) {
        MaskVolume next = cur;
        std::size_t idx = 0;
        for (int z = 0; z < d.nz; ++z)
            for (int y = 0; y < d.ny; ++y)
                for (int x = 0; x < d.nx; ++x, ++idx) {
                    if (!cur.data[idx]) continue;
                    bool keep = true;
                    auto off = [&](int dx, int dy, int dz) {
                        const int xx = x + dx, yy = y + dy, zz = z + dz;
                        if (xx < 0 || xx >= d.nx || yy < 0 || yy >= d.ny || zz < 0 ||
                            zz >= d.nz)
                            return false; // outside grid counts as background
                        return cur.at(xx, yy, zz) != 0;
                    };
                    keep = off(-1, 0, 0) && off(1, 0, 0) && off(0, -1, 0) && off(0, 1, 0);
                    if (d.nz > 1) keep = keep && off(0, 0, -1) && off(0, 0, 1);
                    next.data[idx] = keep ? 1 : 0;
                }
        cur = std::move(next);
    }
    return cur;
}

inline MaskVolume dilate_mask(const MaskVolume& mask, int iters)
{
    require(iters >= 0, "dilate_mask: iters must be >= 0");
    MaskVolume cur = mask;
    const GridDims& d = mask.dims;
    for (int it = 0; it < iters; ++it) {
        MaskVolume next = cur;
        std::size_t idx = 0;
        for (int z = 0; z < d.nz; ++z)
            for (int y = 0; y < d.ny; ++y)
                for (int x = 0; x < d.nx; ++x, ++idx) {
                    if (cur.data[idx]) continue;
                    auto on = [&](int dx, int dy, int dz) {
                        const int xx = x + dx, yy = y + dy, zz = z + dz;
                        if (xx < 0 || xx >= d.nx || yy < 0 || yy >= d.ny || zz < 0 ||
                            zz >= d.nz)
                            return false;
                        return cur.at(xx, yy, zz) != 0;
                    };
                    if (on(-1, 0, 0) || on(1, 0, 0) || on(0, -1, 0) || on(0, 1, 0) ||
                        (d.nz > 1 && (on(0, 0, -1) || on(0, 0, 1))))
                        next.data[idx] = 1;
                }
        cur = std::move(next);
    }
    return cur;
}

// Linear-interpolated quantile, q in [0,1].
inline double quantile(std::vector<double> values, double q)
{
    require(!values.empty(), "quantile: empty sample");
    require(q >= 0.0 && q <= 1.0, "quantile: q must be in [0,1]");
    std::sort(values.begin(), values.end());
    const double pos = q * (values.size() - 1);
    const std::size_t lo = std::size_t(pos);
    if (lo + 1 >= values.size()) return values.back();
    const double t = pos - lo;
    return values[lo] * (1 - t) + values[lo + 1] * t;
}

} // namespace namri
