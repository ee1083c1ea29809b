// Image-quality metrics: windowed SSIM (Gaussian window, per-slice for 3D),
// RMSE, focus measure (variance of the 3x3 Laplacian), Dice overlap, line
// profiles, and trajectory PSF/FWHM analysis.

#pragma once

#include <array>
#include <cmath>
#include <vector>

#include "namri/core.hpp"
#include "namri/image_ops.hpp"
#include "namri/nufft.hpp"
#include "namri/phantom.hpp"
#include "namri/trajectory.hpp"

namespace namri {

struct SsimParams {
    int window = 11;
    double window_sigma = 1.5;
    double k1 = 0.01;
    double k2 = 0.03;
    double dynamic_range = 0.0; // 0 = derive from ref: max(ref) - min(ref)

    void validate() const
    {
        require(window >= 3 && window % 2 == 1, "SsimParams: window must be odd and >= 3");
        require(k1 > 0.0 && k2 > 0.0, "SsimParams: k1, k2 must be > 0");
        require(window_sigma > 0.0, "SsimParams: window_sigma must be > 0");
    }
};

struct SsimResult {
    double mean = 0.0;
    Image map;           // per-voxel scores; zero outside the interior
    MaskVolume interior; // voxels whose window lies fully inside the slice
};

// Windowed SSIM with Gaussian weights, evaluated per 2D slice (the interior
// excludes voxels whose window would leave the slice). The mean is taken
// over the interior, so it equals the mean of the returned map there.
inline SsimResult ssim(const Image& ref, const Image& test, SsimParams params = {})
{
    require_same_dims(ref.dims, test.dims, "ssim");
    params.validate();
    const GridDims& d = ref.dims;
    require(d.nx >= params.window && d.ny >= params.window, "ssim: window larger than image");

    double L = params.dynamic_range;
    if (L <= 0.0) L = max_value(ref) - min_value(ref);
    require(L > 0.0, "ssim: dynamic range must be > 0 (constant reference?)");
    const double c1 = (params.k1 * L) * (params.k1 * L);
    const double c2 = (params.k2 * L) * (params.k2 * L);

    const int hw = params.window / 2;
    std::vector<double> wk(std::size_t(params.window) * params.window);
    {
        double sum = 0.0;
        for (int j = -hw; j <= hw; ++j)
            for (int i = -hw; i <= hw; ++i) {
                const double w =
                    std::exp(-0.5 * (i * i + j * j) / (params.window_sigma * params.window_sigma));
                wk[(j + hw) * params.window + (i + hw)] = w;
                sum += w;
            }
        for (auto& w : wk) w /= sum;
    }

    SsimResult out;
    out.map = Image(d, ref.voxel, "ssim");
    out.interior = MaskVolume(d, ref.voxel, "mask");
    double acc = 0.0;
    std::size_t count = 0;

    for (int z = 0; z < d.nz; ++z)
        for (int y = hw; y < d.ny - hw; ++y)
            for (int x = hw; x < d.nx - hw; ++x) {
                double mu_r = 0, mu_t = 0;
                for (int j = -hw; j <= hw; ++j)
                    for (int i = -hw; i <= hw; ++i) {
                        const double w = wk[(j + hw) * params.window + (i + hw)];
                        mu_r += w * ref.at(x + i, y + j, z);
                        mu_t += w * test.at(x + i, y + j, z);
                    }
                double var_r = 0, var_t = 0, cov = 0;
                for (int j = -hw; j <= hw; ++j)
                    for (int i = -hw; i <= hw; ++i) {
                        const double w = wk[(j + hw) * params.window + (i + hw)];
                        const double dr = ref.at(x + i, y + j, z) - mu_r;
                        const double dt = test.at(x + i, y + j, z) - mu_t;
                        var_r += w * dr * dr;
                        var_t += w * dt * dt;
                        cov += w * dr * dt;
                    }
                const double score = ((2 * mu_r * mu_t + c1) * (2 * cov + c2)) /
                                     ((mu_r * mu_r + mu_t * mu_t + c1) * (var_r + var_t + c2));
                const std::size_t idx = d.index(x, y, z);
                out.map.data[idx] = score;
                out.interior.data[idx] = 1;
                acc += score;
                ++count;
            }

    require(count > 0, "ssim: empty interior");
    out.mean = acc / double(count);
    return out;
}

inline double rmse(const Image& ref, const Image& test)
{
    require_same_dims(ref.dims, test.dims, "rmse");
    double acc = 0.0;
    for (std::size_t i = 0; i < ref.data.size(); ++i) {
        const double diff = ref.data[i] - test.data[i];
        acc += diff * diff;
    }
    return std::sqrt(acc / double(ref.data.size()));
}

// Variance of the 3x3 Laplacian response, per slice over interior voxels,
// averaged across slices. Higher = sharper.
inline double focus_measure(const Image& img)
{
    const GridDims& d = img.dims;
    require(d.nx >= 3 && d.ny >= 3, "focus_measure: in-plane dims must be >= 3");

    double slice_acc = 0.0;
    for (int z = 0; z < d.nz; ++z) {
        double sum = 0.0, sum2 = 0.0;
        std::size_t count = 0;
        for (int y = 1; y < d.ny - 1; ++y)
            for (int x = 1; x < d.nx - 1; ++x) {
                const double lap = img.at(x - 1, y, z) + img.at(x + 1, y, z) +
                                   img.at(x, y - 1, z) + img.at(x, y + 1, z) -
                                   4.0 * img.at(x, y, z);
                sum += lap;
                sum2 += lap * lap;
                ++count;
            }
        const double mean = sum / double(count);
        slice_acc += sum2 / double(count) - mean * mean; // population variance
    }
    return slice_acc / double(d.nz);
}

inline double dice(const MaskVolume& a, const MaskVolume& b)
{
    require_same_dims(a.dims, b.dims, "dice");
    std::size_t na = 0, nb = 0, inter = 0;
    for (std::size_t i = 0; i < a.data.size(); ++i) {
        const bool va = a.data[i] != 0, vb = b.data[i] != 0;
        na += va;
        nb += vb;
        inter += va && vb;
    }
    if (na + nb == 0) return 1.0;
    return 2.0 * double(inter) / double(na + nb);
}

inline double dice(const RegionMask& a, const RegionMask& b) { return dice(a.voxels, b.voxels); }

struct LineProfile {
    std::array<double, 3> p0{0, 0, 0}; // physical mm, centred frame
    std::array<double, 3> p1{0, 0, 0};
    std::vector<double> values;
};

// n samples linearly interpolated from p0 to p1 (inclusive); sample j sits at
// ((n-1-j)*p0 + j*p1)/(n-1), so reversing the endpoints reverses the values.
inline LineProfile line_profile(const Image& img, const std::array<double, 3>& p0,
                                const std::array<double, 3>& p1, int n)
{
    require(n >= 2, "line_profile: need at least 2 samples");
    const GridDims& d = img.dims;

    auto to_index = [&](const std::array<double, 3>& p, double out[3]) {
        out[0] = p[0] / img.voxel.x + d.nx / 2;
        out[1] = p[1] / img.voxel.y + d.ny / 2;
        out[2] = d.nz == 1 ? 0.0 : p[2] / img.voxel.z + d.nz / 2;
        require(out[0] >= -1e-9 && out[0] <= d.nx - 1 + 1e-9 && out[1] >= -1e-9 &&
                    out[1] <= d.ny - 1 + 1e-9 &&
                    (d.nz == 1 || (out[2] >= -1e-9 && out[2] <= d.nz - 1 + 1e-9)),
                "line_profile: endpoint outside field of view");
    };
    double i0[3], i1[3];
    to_index(p0, i0);
    to_index(p1, i1);

    LineProfile prof;
    prof.p0 = p0;
    prof.p1 = p1;
    prof.values.resize(n);

    auto clampi = [](int v, int lo, int hi) { return std::max(lo, std::min(hi, v)); };
    for (int j = 0; j < n; ++j) {
        const double a = double(n - 1 - j) / (n - 1), bq = double(j) / (n - 1);
        const double fx = a * i0[0] + bq * i1[0];
        const double fy = a * i0[1] + bq * i1[1];
        const double fz = a * i0[2] + bq * i1[2];
        const int x0 = clampi(int(std::floor(fx)), 0, d.nx - 1);
        const int y0 = clampi(int(std::floor(fy)), 0, d.ny - 1);
        const int z0 = clampi(int(std::floor(fz)), 0, d.nz - 1);
        const int x1 = clampi(x0 + 1, 0, d.nx - 1);
        const int y1 = clampi(y0 + 1, 0, d.ny - 1);
        const int z1 = clampi(z0 + 1, 0, d.nz - 1);
        const double tx = std::clamp(fx - x0, 0.0, 1.0);
        const double ty = std::clamp(fy - y0, 0.0, 1.0);
        const double tz = std::clamp(fz - z0, 0.0, 1.0);
        const double c00 = img.at(x0, y0, z0) * (1 - tx) + img.at(x1, y0, z0) * tx;
        const double c10 = img.at(x0, y1, z0) * (1 - tx) + img.at(x1, y1, z0) * tx;
        const double c01 = img.at(x0, y0, z1) * (1 - tx) + img.at(x1, y0, z1) * tx;
        const double c11 = img.at(x0, y1, z1) * (1 - tx) + img.at(x1, y1, z1) * tx;
        const double c0 = c00 * (1 - ty) + c10 * ty;
        const double c1 = c01 * (1 - ty) + c11 * ty;
        prof.values[j] = c0 * (1 - tz) + c1 * tz;
    }
    return prof;
}

struct PsfResult {
    Image psf; // real part of the weighted adjoint of a centred impulse, peak = 1
    std::array<double, 3> fwhm{0, 0, 0}; // voxels, per active axis
    bool peak_centered = true;
};

namespace detail {

// Continuous intensity profile of the PSF along one axis, normalized to 1 at
// t = 0 and evaluated analytically so sub-voxel FWHM differences between
// trajectories are resolved. The PSF is the real part of the adjoint (the
// acquisition is Hermitian-symmetric for real objects), so the profile is the
// squared cosine sum; a one-sided spoke set would otherwise leak an odd
// imaginary term into the width.
inline double psf_axis_halfwidth(const Trajectory& traj, int axis, double t_max)
{
    const double two_pi = 2.0 * 3.14159265358979323846;
    auto profile = [&](double t) {
        double re = 0.0;
        for (int j = 0; j < traj.n_spokes; ++j)
            for (int s = 0; s < traj.samples_per_spoke; ++s) {
                const double k = traj.directions[j][axis] * traj.radii[s];
                re += traj.weights[s] * std::cos(two_pi * k * t);
            }
        return re * re;
    };
    const double peak = profile(0.0);
    if (peak <= 0.0) return 0.0;

    const double dt = 1.0 / 64.0;
    double prev = 1.0;
    for (double t = dt; t <= t_max; t += dt) {
        const double val = profile(t) / peak;
        if (val < 0.5) {
            const double t0 = t - dt;
            return t0 + dt * (prev - 0.5) / (prev - val); // linear interpolation
        }
        prev = val;
    }
    return t_max; // never fell below half maximum within range
}

} // namespace detail

// PSF of a trajectory: density-weighted adjoint of the forward model applied
// to a centred unit impulse (single unit coil). The returned image is the
// real part, normalized to 1 at the impulse voxel. FWHM per axis is measured
// on the continuous intensity (squared-magnitude) profile through the peak,
// with linear interpolation of the half-maximum crossing.
inline PsfResult psf_fwhm(const Trajectory& traj, const GridDims& dims,
                          NufftPath path = NufftPath::Auto)
{
    // impulse at the grid centre has unit-modulus samples: all ones
    std::vector<cdouble> samples(traj.n_samples_total());
    for (std::size_t i = 0; i < samples.size(); ++i)
        samples[i] = cdouble(traj.weights[i % traj.samples_per_spoke], 0.0);

    const bool direct = dims.total() <= 64 * 64 || path == NufftPath::Direct;
    std::vector<cdouble> adj;
    if (direct) {
        adj = nufft_adjoint_direct(dims, samples, traj);
    } else {
        GriddedNufft plan(dims, traj);
        adj = plan.adjoint(samples);
    }

    PsfResult out;
    out.psf = Image(dims, VoxelSize{1, 1, 1}, "a.u.");
    const std::size_t center = dims.index(dims.nx / 2, dims.ny / 2, dims.nz / 2);
    std::size_t peak_idx = 0;
    double peak_mag = -1.0;
    for (std::size_t i = 0; i < adj.size(); ++i) {
        out.psf.data[i] = adj[i].real();
        if (std::fabs(adj[i].real()) > peak_mag) {
            peak_mag = std::fabs(adj[i].real());
            peak_idx = i;
        }
    }
    out.peak_centered = (peak_idx == center);
    const double peak = out.psf.data[center];
    require(peak != 0.0, "psf_fwhm: zero response at the impulse location");
    for (auto& v : out.psf.data) v /= peak;

    const int na[3] = {dims.nx, dims.ny, dims.nz};
    for (int a = 0; a < 3; ++a) {
        if (na[a] == 1) continue;
        out.fwhm[a] = 2.0 * detail::psf_axis_halfwidth(traj, a, na[a] / 2.0);
    }
    return out;
}

// Deterministic tumor segmentation of a sodium image: threshold at 50% of the
// 99th-percentile intensity inside a dilated ground-truth bounding region.
inline RegionMask make_tumor_mask(const Image& img, const RegionMask& gt_tumor,
                                  int dilate_voxels = 2)
{
    require_same_dims(img.dims, gt_tumor.voxels.dims, "make_tumor_mask");
    MaskVolume box = dilate_mask(gt_tumor.voxels, dilate_voxels);

    std::vector<double> vals;
    for (std::size_t i = 0; i < img.data.size(); ++i)
        if (box.data[i]) vals.push_back(img.data[i]);
    require(!vals.empty(), "make_tumor_mask: empty search region");
    const double thresh = 0.5 * quantile(vals, 0.99);

    RegionMask mask;
    mask.region_name = "tumor-detected";
    mask.voxels = MaskVolume(img.dims, img.voxel, "mask");
    for (std::size_t i = 0; i < img.data.size(); ++i)
        mask.voxels.data[i] = (box.data[i] && img.data[i] >= thresh) ? 1 : 0;
    return mask;
}

} // namespace namri
