// Non-uniform Fourier forward/adjoint operators over radial trajectories.
//
// Two evaluation paths share one contract:
//   direct  - exact summation  F(k) = sum_x u(x) exp(-2*pi*i k.x)
//   gridded - Kaiser-Bessel interpolation on a 1.5x oversampled FFT grid
//             (kernel width 4 cells, Beatty beta, analytic deapodisation)
// x is the integer voxel offset from the grid centre voxel floor(n/2), k is
// in cycles/voxel. The gridded pair is an exact adjoint pair by construction;
// its agreement with the direct path is validated by tests rather than
// assumed.

#pragma once

#include <array>
#include <cmath>
#include <memory>
#include <vector>

#include "namri/coils.hpp"
#include "namri/core.hpp"
#include "namri/fft.hpp"
#include "namri/kspace.hpp"
#include "namri/trajectory.hpp"

namespace namri {

enum class NufftPath { Auto, Direct, Gridded };

namespace detail {

// Modified Bessel function I0, polynomial approximation (Abramowitz-Stegun).
inline double bessel_i0(double x)
{
    double ax = std::fabs(x), ans, y;
    if (ax < 3.75) {
        y = x / 3.75;
        y *= y;
        ans = 1.0 + y * (3.5156229 + y * (3.0899424 +
                                          y * (1.2067492 +
                                               y * (0.2659732 + y * (0.360768e-1 + y * 0.45813e-2)))));
    } else {
        y = 3.75 / ax;
        ans = (std::exp(ax) / std::sqrt(ax)) *
              (0.39894228 +
               y * (0.1328592e-1 +
                    y * (0.225319e-2 +
                         y * (-0.157565e-2 +
                              y * (0.916281e-2 +
                                   y * (-0.2057706e-1 +
                                        y * (0.2635537e-1 +
                                             y * (-0.1647633e-1 + y * 0.392377e-2))))))));
    }
    return ans;
}

inline constexpr double kKernelWidth = 4.0;   // in oversampled grid cells
inline constexpr double kOversampling = 1.5;

inline double kb_beta(double width, double os)
{
    const double pi = 3.14159265358979323846;
    const double a = (width / os) * (os - 0.5);
    return pi * std::sqrt(a * a - 0.8);
}

inline double kb_kernel(double t, double beta)
{
    const double u = 2.0 * t / kKernelWidth;
    const double arg = 1.0 - u * u;
    if (arg < 0.0) return 0.0;
    return bessel_i0(beta * std::sqrt(arg));
}

// Continuous Fourier transform of kb_kernel, used for deapodisation.
inline double kb_kernel_ft(double nu, double beta)
{
    const double pi = 3.14159265358979323846;
    const double z = pi * kKernelWidth * nu;
    const double d = beta * beta - z * z;
    if (d > 1e-12) {
        const double s = std::sqrt(d);
        return kKernelWidth * std::sinh(s) / s;
    }
    if (d < -1e-12) {
        const double s = std::sqrt(-d);
        return kKernelWidth * std::sin(s) / s;
    }
    return kKernelWidth;
}

inline int oversampled_size(int n)
{
    if (n == 1) return 1;
    return 2 * int(std::ceil(kOversampling * n / 2.0));
}

} // namespace detail

// ---------------------------------------------------------------------------
// Direct path (exact summation). Quadratic cost; intended for small grids and
// as the oracle the gridded path is validated against.
// ---------------------------------------------------------------------------

inline std::vector<cdouble> nufft_forward_direct(const GridDims& dims,
                                                 const std::vector<cdouble>& img,
                                                 const Trajectory& traj)
{
    const double two_pi = 2.0 * 3.14159265358979323846;
    std::vector<cdouble> out(traj.n_samples_total(), cdouble(0, 0));
    const int cx = dims.nx / 2, cy = dims.ny / 2, cz = dims.nz / 2;

    for (int j = 0; j < traj.n_spokes; ++j) {
        for (int s = 0; s < traj.samples_per_spoke; ++s) {
            const auto k = traj.k_at(j, s);
            cdouble acc(0, 0);
            std::size_t idx = 0;
            for (int z = 0; z < dims.nz; ++z)
                for (int y = 0; y < dims.ny; ++y)
                    for (int x = 0; x < dims.nx; ++x, ++idx) {
                        const double phase = -two_pi * (k[0] * (x - cx) + k[1] * (y - cy) +
                                                        k[2] * (z - cz));
                        acc += img[idx] * cdouble(std::cos(phase), std::sin(phase));
                    }
            out[std::size_t(j) * traj.samples_per_spoke + s] = acc;
        }
    }
    return out;
}

inline std::vector<cdouble> nufft_adjoint_direct(const GridDims& dims,
                                                 const std::vector<cdouble>& samples,
                                                 const Trajectory& traj)
{
    const double two_pi = 2.0 * 3.14159265358979323846;
    std::vector<cdouble> out(dims.total(), cdouble(0, 0));
    const int cx = dims.nx / 2, cy = dims.ny / 2, cz = dims.nz / 2;

    for (int j = 0; j < traj.n_spokes; ++j) {
        for (int s = 0; s < traj.samples_per_spoke; ++s) {
            const auto k = traj.k_at(j, s);
            const cdouble v = samples[std::size_t(j) * traj.samples_per_spoke + s];
            if (v == cdouble(0, 0)) continue;
            std::size_t idx = 0;
            for (int z = 0; z < dims.nz; ++z)
                for (int y = 0; y < dims.ny; ++y)
                    for (int x = 0; x < dims.nx; ++x, ++idx) {
                        const double phase = two_pi * (k[0] * (x - cx) + k[1] * (y - cy) +
                                                       k[2] * (z - cz));
                        out[idx] += v * cdouble(std::cos(phase), std::sin(phase));
                    }
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Gridded path. The interpolation table is precomputed per (dims, trajectory)
// pair; forward and adjoint reuse it, which also makes them exact adjoints.
// ---------------------------------------------------------------------------

class GriddedNufft {
public:
    GriddedNufft(GridDims dims, const Trajectory& traj) : dims_(dims)
    {
        os_ = {detail::oversampled_size(dims.nx), detail::oversampled_size(dims.ny),
               detail::oversampled_size(dims.nz)};

        for (int a = 0; a < 3; ++a) {
            const int n = dims[a];
            deapod_[a].assign(n, 1.0);
            if (n == 1) continue;
            const double beta = detail::kb_beta(detail::kKernelWidth, double(os_[a]) / n);
            beta_[a] = beta;
            for (int i = 0; i < n; ++i) {
                const double nu = double(i - n / 2) / os_[a];
                deapod_[a][i] = detail::kb_kernel_ft(nu, beta);
            }
        }
        build_table(traj);
    }

    const GridDims& dims() const { return dims_; }

    // img (dims, x-fastest) -> samples along the trajectory.
    std::vector<cdouble> forward(const std::vector<cdouble>& img) const
    {
        std::vector<cdouble> buf(std::size_t(os_[0]) * os_[1] * os_[2], cdouble(0, 0));
        scatter_deapodised(img, buf);
        fft_forward(GridDims{os_[0], os_[1], os_[2]}, buf);

        std::vector<cdouble> out(n_samples_);
        for (std::size_t s = 0; s < n_samples_; ++s) {
            cdouble acc(0, 0);
            for (std::size_t e = offsets_[s]; e < offsets_[s + 1]; ++e)
                acc += buf[entry_index_[e]] * entry_weight_[e];
            out[s] = acc;
        }
        return out;
    }

    // Exact adjoint of forward().
    std::vector<cdouble> adjoint(const std::vector<cdouble>& samples) const
    {
        std::vector<cdouble> buf(std::size_t(os_[0]) * os_[1] * os_[2], cdouble(0, 0));
        for (std::size_t s = 0; s < n_samples_; ++s) {
            const cdouble v = samples[s];
            for (std::size_t e = offsets_[s]; e < offsets_[s + 1]; ++e)
                buf[entry_index_[e]] += v * entry_weight_[e];
        }
        fft_backward(GridDims{os_[0], os_[1], os_[2]}, buf);

        std::vector<cdouble> out(dims_.total());
        gather_deapodised(buf, out);
        return out;
    }

private:
    void scatter_deapodised(const std::vector<cdouble>& img, std::vector<cdouble>& buf) const
    {
        std::size_t idx = 0;
        for (int z = 0; z < dims_.nz; ++z) {
            const int bz = wrap(z - dims_.nz / 2, os_[2]);
            for (int y = 0; y < dims_.ny; ++y) {
                const int by = wrap(y - dims_.ny / 2, os_[1]);
                const double dyz = deapod_[1][y] * deapod_[2][z];
                for (int x = 0; x < dims_.nx; ++x, ++idx) {
                    const int bx = wrap(x - dims_.nx / 2, os_[0]);
                    buf[flat_os(bx, by, bz)] = img[idx] / (deapod_[0][x] * dyz);
                }
            }
        }
    }

    void gather_deapodised(const std::vector<cdouble>& buf, std::vector<cdouble>& out) const
    {
        std::size_t idx = 0;
        for (int z = 0; z < dims_.nz; ++z) {
            const int bz = wrap(z - dims_.nz / 2, os_[2]);
            for (int y = 0; y < dims_.ny; ++y) {
                const int by = wrap(y - dims_.ny / 2, os_[1]);
                const double dyz = deapod_[1][y] * deapod_[2][z];
                for (int x = 0; x < dims_.nx; ++x, ++idx) {
                    const int bx = wrap(x - dims_.nx / 2, os_[0]);
                    out[idx] = buf[flat_os(bx, by, bz)] / (deapod_[0][x] * dyz);
                }
            }
        }
    }

    void build_table(const Trajectory& traj)
    {
        n_samples_ = traj.n_samples_total();
        offsets_.assign(n_samples_ + 1, 0);
        entry_index_.clear();
        entry_weight_.clear();

        const double half_w = 0.5 * detail::kKernelWidth;
        std::array<std::vector<int>, 3> nbr;
        std::array<std::vector<double>, 3> wgt;

        std::size_t s_flat = 0;
        for (int j = 0; j < traj.n_spokes; ++j) {
            for (int s = 0; s < traj.samples_per_spoke; ++s, ++s_flat) {
                const auto k = traj.k_at(j, s);
                for (int a = 0; a < 3; ++a) {
                    nbr[a].clear();
                    wgt[a].clear();
                    if (os_[a] == 1) {
                        nbr[a].push_back(0);
                        wgt[a].push_back(1.0);
                        continue;
                    }
                    const double kappa = k[a] * os_[a];
                    const int lo = int(std::ceil(kappa - half_w));
                    const int hi = int(std::floor(kappa + half_w));
                    for (int n = lo; n <= hi; ++n) {
                        const double w = detail::kb_kernel(kappa - n, beta_[a]);
                        if (w == 0.0) continue;
                        nbr[a].push_back(wrap(n, os_[a]));
                        wgt[a].push_back(w);
                    }
                }
                for (std::size_t iz = 0; iz < nbr[2].size(); ++iz)
                    for (std::size_t iy = 0; iy < nbr[1].size(); ++iy)
                        for (std::size_t ix = 0; ix < nbr[0].size(); ++ix) {
                            entry_index_.push_back(
                                flat_os(nbr[0][ix], nbr[1][iy], nbr[2][iz]));
                            entry_weight_.push_back(wgt[0][ix] * wgt[1][iy] * wgt[2][iz]);
                        }
                offsets_[s_flat + 1] = entry_index_.size();
            }
        }
    }

    static int wrap(int n, int size)
    {
        int r = n % size;
        return r < 0 ? r + size : r;
    }

    std::size_t flat_os(int x, int y, int z) const
    {
        return std::size_t(x) + std::size_t(os_[0]) * (std::size_t(y) + std::size_t(os_[1]) * z);
    }

    GridDims dims_;
    std::array<int, 3> os_{1, 1, 1};
    std::array<double, 3> beta_{0, 0, 0};
    std::array<std::vector<double>, 3> deapod_;
    std::size_t n_samples_ = 0;
    std::vector<std::size_t> offsets_;
    std::vector<std::size_t> entry_index_;
    std::vector<double> entry_weight_;
};

// ---------------------------------------------------------------------------
// Model-level operators (multi-coil).
// ---------------------------------------------------------------------------

namespace detail {

inline bool use_direct(NufftPath path, const GridDims& dims)
{
    if (path == NufftPath::Direct) return true;
    if (path == NufftPath::Gridded) return false;
    return dims.total() <= 400; // Auto: tiny grids go direct
}

} // namespace detail

// Multi-coil acquisition operator A : image -> stacked coil samples.
// Holds the gridded plan so solvers can apply it repeatedly.
class AcqOperator {
public:
    AcqOperator(GridDims dims, const Trajectory& traj, const CoilSensitivities& coils,
                NufftPath path = NufftPath::Auto)
        : dims_(dims), traj_(traj), coils_(coils),
          direct_(detail::use_direct(path, dims))
    {
        require_same_dims(dims, coils.dims, "AcqOperator");
        if (!direct_) plan_ = std::make_unique<GriddedNufft>(dims, traj);
    }

    std::size_t n_image() const { return dims_.total(); }
    std::size_t n_data() const { return std::size_t(coils_.n_coils) * traj_.n_samples_total(); }
    int n_coils() const { return coils_.n_coils; }
    const GridDims& dims() const { return dims_; }
    const Trajectory& traj() const { return traj_; }

    std::vector<cdouble> forward(const std::vector<cdouble>& img) const
    {
        std::vector<cdouble> out;
        out.reserve(n_data());
        std::vector<cdouble> weighted(img.size());
        for (int c = 0; c < coils_.n_coils; ++c) {
            const auto& sens = coils_.maps[c];
            for (std::size_t i = 0; i < img.size(); ++i) weighted[i] = sens[i] * img[i];
            auto coil_samples = direct_ ? nufft_forward_direct(dims_, weighted, traj_)
                                        : plan_->forward(weighted);
            out.insert(out.end(), coil_samples.begin(), coil_samples.end());
        }
        return out;
    }

    std::vector<cdouble> adjoint(const std::vector<cdouble>& data) const
    {
        const std::size_t m = traj_.n_samples_total();
        std::vector<cdouble> acc(n_image(), cdouble(0, 0));
        std::vector<cdouble> coil_data(m);
        for (int c = 0; c < coils_.n_coils; ++c) {
            std::copy(data.begin() + c * m, data.begin() + (c + 1) * m, coil_data.begin());
            auto img = direct_ ? nufft_adjoint_direct(dims_, coil_data, traj_)
                               : plan_->adjoint(coil_data);
            const auto& sens = coils_.maps[c];
            for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += std::conj(sens[i]) * img[i];
        }
        return acc;
    }

    // Real-restricted operator pair used by the solvers: images are real,
    // the adjoint returns the real part of A^H y.
    std::vector<cdouble> forward_real(const std::vector<double>& u) const
    {
        std::vector<cdouble> img(u.size());
        for (std::size_t i = 0; i < u.size(); ++i) img[i] = cdouble(u[i], 0.0);
        return forward(img);
    }

    std::vector<double> adjoint_real(const std::vector<cdouble>& data) const
    {
        auto img = adjoint(data);
        std::vector<double> out(img.size());
        for (std::size_t i = 0; i < img.size(); ++i) out[i] = img[i].real();
        return out;
    }

    // Largest singular value, deterministic power iteration.
    double estimate_norm(int iters = 30) const
    {
        Rng rng(derive_seed(0x6e61u, "opnorm"));
        std::vector<double> u(n_image());
        for (auto& v : u) v = rng.gaussian();
        double norm = 0.0;
        for (int it = 0; it < iters; ++it) {
            auto w = adjoint_real(forward_real(u));
            norm = norm2(w);
            if (norm == 0.0) return 0.0;
            for (auto& v : w) v /= norm;
            u.swap(w);
        }
        return std::sqrt(norm);
    }

private:
    GridDims dims_;
    Trajectory traj_;
    const CoilSensitivities& coils_;
    bool direct_;
    std::unique_ptr<GriddedNufft> plan_;
};

// Synthesise multi-coil k-space data from a real-valued image.
inline KSpaceData forward_model(const Image& image, const Trajectory& traj,
                                const CoilSensitivities& coils, NufftPath path = NufftPath::Auto)
{
    require_same_dims(image.dims, coils.dims, "forward_model");
    for (double v : image.data)
        require(std::isfinite(v), "forward_model: image values must be finite");

    AcqOperator op(image.dims, traj, coils, path);
    KSpaceData data;
    data.dims = image.dims;
    data.traj = traj;
    data.n_coils = coils.n_coils;
    data.samples = op.forward_real(image.data);
    return data;
}

// Per-coil regridded images: g_c = E^H [w] y_c (no sensitivity applied).
// apply_density_weights=false gives the exact per-coil adjoint; true gives
// the density-compensated regridding reconstruction.
inline std::vector<CImage> adjoint_model(const KSpaceData& data, const Trajectory& traj,
                                         const CoilSensitivities& coils,
                                         bool apply_density_weights,
                                         NufftPath path = NufftPath::Auto)
{
    require(data.shape_consistent(), "adjoint_model: sample count inconsistent with trajectory");
    require(data.n_coils == coils.n_coils, "adjoint_model: coil count mismatch");
    const GridDims dims = coils.dims;
    const std::size_t m = traj.n_samples_total();

    const bool direct = detail::use_direct(path, dims);
    std::unique_ptr<GriddedNufft> plan;
    if (!direct) plan = std::make_unique<GriddedNufft>(dims, traj);

    std::vector<CImage> out;
    out.reserve(data.n_coils);
    std::vector<cdouble> coil_data(m);
    for (int c = 0; c < data.n_coils; ++c) {
        for (std::size_t s = 0; s < m; ++s) {
            cdouble v = data.samples[c * m + s];
            if (apply_density_weights) v *= traj.weights[s % traj.samples_per_spoke];
            coil_data[s] = v;
        }
        CImage img(dims);
        img.data = direct ? nufft_adjoint_direct(dims, coil_data, traj)
                          : plan->adjoint(coil_data);
        out.push_back(std::move(img));
    }
    return out;
}

} // namespace namri
