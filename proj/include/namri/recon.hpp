// Reconstruction methods:
//   ADC   - density-weighted per-coil adjoint + adaptive combine
//   TV / wTV / dTV - nonnegative regularized least squares, 1/2|Au-b|^2 +
//           alpha*J(u) over u >= 0, solved by ADMM (CG for the quadratic
//           u-update, dual fast gradient projection for the TV prox)
//   AG-TV - constrained model: min lam_xyz*|m.grad u|_2,1 + lam_bm*|BM u|_2
//           s.t. |Au-f|^2 < sigma^2, solved by Split-Bregman with outer
//           Bregman continuation on the fidelity constraint.
//
// The acquisition operator is spectrally normalized (deterministic power
// iteration) so the default penalty parameters are well scaled; logged
// objectives and residuals are reported in unscaled units.

#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "namri/combine.hpp"
#include "namri/core.hpp"
#include "namri/grad.hpp"
#include "namri/kspace.hpp"
#include "namri/nufft.hpp"
#include "namri/prior_maps.hpp"
#include "namri/tv.hpp"

namespace namri {

enum class ReconMethod { ADC, TV, WTV, DTV, AGTV };

inline std::string to_string(ReconMethod m)
{
    switch (m) {
    case ReconMethod::ADC: return "adc";
    case ReconMethod::TV: return "tv";
    case ReconMethod::WTV: return "wtv";
    case ReconMethod::DTV: return "dtv";
    case ReconMethod::AGTV: return "agtv";
    }
    return "?";
}

inline ReconMethod parse_method(const std::string& s)
{
    if (s == "adc") return ReconMethod::ADC;
    if (s == "tv") return ReconMethod::TV;
    if (s == "wtv") return ReconMethod::WTV;
    if (s == "dtv") return ReconMethod::DTV;
    if (s == "agtv") return ReconMethod::AGTV;
    throw std::invalid_argument("unknown recon method '" + s + "'");
}

struct ReconConfig {
    ReconMethod method = ReconMethod::TV;
    double alpha = 0.01;     // regularization weight
    double admm_rho = 1.0;   // ADMM penalty; also the Split-Bregman beta
    int max_outer_iters = 200;
    int fgp_inner_iters = 20;
    double eta = 0.0;        // prior edge scale; 0 = auto (0.01 * max|grad v|)
    double gamma = 0.95;     // dTV directional strength
    double lambda_xyz = 1.0;
    double lambda_bm = 1.0;
    double omega = 0.1;      // AG-TV threshold floor
    double sigma_sq = 0.0;   // AG-TV fidelity budget (unscaled units)
    double tol = 1e-5;
    int adc_window = 5;
    std::uint64_t seed = 0;

    void validate() const
    {
        require(alpha >= 0.0, "ReconConfig: alpha must be >= 0");
        require(gamma >= 0.0 && gamma <= 1.0, "ReconConfig: gamma must be in [0,1]");
        require(omega >= 0.0 && omega <= 1.0, "ReconConfig: omega must be in [0,1]");
        require(max_outer_iters >= 1 && fgp_inner_iters >= 1,
                "ReconConfig: iteration budgets must be >= 1");
        require(admm_rho > 0.0, "ReconConfig: admm_rho must be > 0");
        require(tol > 0.0, "ReconConfig: tol must be > 0");
        require(sigma_sq >= 0.0, "ReconConfig: sigma_sq must be >= 0");
        require(adc_window >= 1 && adc_window % 2 == 1, "ReconConfig: adc_window must be odd");
    }
};

struct ConvRow {
    int iter = 0;
    double objective = 0.0;
    double data_residual = 0.0; // |Au-b|^2
    double primal_residual = 0.0;
    double dual_residual = 0.0;
};

struct ReconResult {
    Image image;
    std::vector<ConvRow> log;
    ReconMethod method = ReconMethod::TV;
    bool converged = false;
    int iterations = 0;
    double final_data_residual = 0.0;
    double adjoint_objective = 0.0; // objective at the init (weighted adjoint) image
};

namespace detail {

// Conjugate gradient on a symmetric positive definite apply(), warm-started.
template <typename ApplyFn>
inline int conjugate_gradient(const ApplyFn& apply, const std::vector<double>& rhs,
                              std::vector<double>& x, double rel_tol, int max_iters)
{
    const std::size_t n = rhs.size();
    std::vector<double> r(n), p(n), ap(n);
    apply(x, ap);
    for (std::size_t i = 0; i < n; ++i) r[i] = rhs[i] - ap[i];
    p = r;
    double rs = dot(r, r);
    const double rhs_norm = std::sqrt(dot(rhs, rhs));
    if (rhs_norm == 0.0) {
        std::fill(x.begin(), x.end(), 0.0);
        return 0;
    }
    int it = 0;
    for (; it < max_iters; ++it) {
        if (std::sqrt(rs) <= rel_tol * rhs_norm) break;
        apply(p, ap);
        const double den = dot(p, ap);
        if (den <= 0.0) break;
        const double a = rs / den;
        for (std::size_t i = 0; i < n; ++i) {
            x[i] += a * p[i];
            r[i] -= a * ap[i];
        }
        const double rs_new = dot(r, r);
        for (std::size_t i = 0; i < n; ++i) p[i] = r[i] + (rs_new / rs) * p[i];
        rs = rs_new;
    }
    return it;
}

// Density-weighted, coil-combined adjoint image (clipped to >= 0): the
// standard initialization and the reference point for objective comparisons.
inline std::vector<double> weighted_adjoint_init(const AcqOperator& op,
                                                 const KSpaceData& data)
{
    const Trajectory& traj = op.traj();
    std::vector<cdouble> weighted = data.samples;
    const std::size_t m = traj.n_samples_total();
    for (std::size_t i = 0; i < weighted.size(); ++i)
        weighted[i] *= traj.weights[(i % m) % traj.samples_per_spoke];
    auto img = op.adjoint_real(weighted);
    for (auto& v : img) v = std::max(0.0, v);
    return img;
}

} // namespace detail

// Baseline: density-weighted regridding per coil + adaptive combine.
inline ReconResult recon_adc(const KSpaceData& data, const Trajectory& traj,
                             const CoilSensitivities& coils, const VoxelSize& voxel,
                             const ReconConfig& cfg, NufftPath path = NufftPath::Auto)
{
    cfg.validate();
    auto per_coil = adjoint_model(data, traj, coils, /*apply_density_weights=*/true, path);
    for (auto& ci : per_coil) ci.voxel = voxel;
    ReconResult res;
    res.method = ReconMethod::ADC;
    res.image = adaptive_combine(per_coil, cfg.adc_window);
    res.image.voxel = voxel;
    res.image.units = "a.u.";
    res.converged = true;
    res.iterations = 1;
    return res;
}

// ADMM for method in {TV, wTV, dTV}. `prior` must be supplied (already at
// recon dims) for wTV/dTV; it is ignored for plain TV.
inline ReconResult recon_admm(const KSpaceData& data, const Trajectory& traj,
                              const CoilSensitivities& coils, const VoxelSize& voxel,
                              const ReconConfig& cfg, const Image* prior = nullptr,
                              NufftPath path = NufftPath::Auto)
{
    cfg.validate();
    require(cfg.method == ReconMethod::TV || cfg.method == ReconMethod::WTV ||
                cfg.method == ReconMethod::DTV,
            "recon_admm: method must be tv, wtv, or dtv");
    require(data.shape_consistent(), "recon_admm: data shape inconsistent with trajectory");
    const GridDims dims = coils.dims;
    if (cfg.method != ReconMethod::TV)
        require(prior != nullptr, "recon_admm: wtv/dtv require a prior image");
    if (prior) require_same_dims(prior->dims, dims, "recon_admm prior");

    // prior-derived weighting (kept alive for the whole solve)
    EdgeWeightMap wmap;
    DirectionField dfield;
    TvWeighting wgt = TvWeighting::plain();
    if (cfg.method == ReconMethod::WTV) {
        const double eta = cfg.eta > 0.0 ? cfg.eta : default_eta(dims, prior->data);
        wmap = compute_wtv_weights(*prior, eta);
        wgt = TvWeighting::weighted(wmap);
    } else if (cfg.method == ReconMethod::DTV) {
        const double eta = cfg.eta > 0.0 ? cfg.eta : default_eta(dims, prior->data);
        dfield = compute_dtv_field(*prior, eta, cfg.gamma);
        wgt = TvWeighting::directional(dfield);
    }

    AcqOperator op(dims, traj, coils, path);
    const double opn = op.estimate_norm();
    const double s = opn > 0.0 ? opn : 1.0;
    const double inv_s = 1.0 / s;

    // scaled problem: Abar = A/s, bbar = b/s, alpha_bar = alpha/s^2
    std::vector<cdouble> bbar = data.samples;
    for (auto& v : bbar) v *= inv_s;
    const double alpha_bar = cfg.alpha / (s * s);
    const double rho = cfg.admm_rho;

    const std::size_t n = dims.total();
    auto normal_apply = [&](const std::vector<double>& u, std::vector<double>& out) {
        out = op.adjoint_real(op.forward_real(u));
        for (std::size_t i = 0; i < n; ++i) out[i] = out[i] * (inv_s * inv_s) + rho * u[i];
    };
    std::vector<double> atb = op.adjoint_real(bbar);
    for (auto& v : atb) v *= inv_s;

    auto objective_of = [&](const std::vector<double>& img) {
        auto pred = op.forward_real(img);
        double fid = 0.0;
        for (std::size_t i = 0; i < pred.size(); ++i) fid += std::norm(pred[i] - data.samples[i]);
        return std::make_pair(0.5 * fid + cfg.alpha * tv_value(dims, img, wgt), fid);
    };

    std::vector<double> u = detail::weighted_adjoint_init(op, data);
    std::vector<double> z = u, lam(n, 0.0), rhs(n), v(n);

    ReconResult res;
    res.method = cfg.method;
    res.adjoint_objective = objective_of(u).first;

    int it = 1;
    for (; it <= cfg.max_outer_iters; ++it) {
        for (std::size_t i = 0; i < n; ++i) rhs[i] = atb[i] + rho * (z[i] - lam[i]);
        detail::conjugate_gradient(normal_apply, rhs, u, 1e-8, 50);

        for (std::size_t i = 0; i < n; ++i) v[i] = u[i] + lam[i];
        std::vector<double> z_new =
            tv_prox(dims, v, alpha_bar / rho, wgt, cfg.fgp_inner_iters);
        for (auto& zv : z_new) zv = std::max(0.0, zv);

        double r_pri = 0.0, r_dua = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double d1 = u[i] - z_new[i];
            const double d2 = z_new[i] - z[i];
            r_pri += d1 * d1;
            r_dua += d2 * d2;
            lam[i] += d1;
        }
        r_pri = std::sqrt(r_pri);
        r_dua = rho * std::sqrt(r_dua);
        z = std::move(z_new);

        auto [obj, fid] = objective_of(z);
        res.log.push_back({it, obj, fid, r_pri, r_dua});

        const double eps_pri = cfg.tol * std::max({norm2(u), norm2(z), 1e-12});
        const double eps_dua = cfg.tol * std::max(rho * norm2(lam), 1e-12);
        if (r_pri <= eps_pri && r_dua <= eps_dua) {
            res.converged = true;
            ++it;
            break;
        }
    }
    res.iterations = int(res.log.size());
    res.final_data_residual = res.log.empty() ? 0.0 : res.log.back().data_residual;
    res.image = Image(dims, voxel, "a.u.");
    res.image.data = std::move(z);
    return res;
}

// Split-Bregman for the constrained AG-TV model. `prior` may be null (or
// omega = 1), in which case the threshold maps are identically 1 and the
// solve reduces to the prior-free variant. `bm` marks the air region.
inline ReconResult recon_agtv(const KSpaceData& data, const Trajectory& traj,
                              const CoilSensitivities& coils, const VoxelSize& voxel,
                              const Image* prior, const MaskVolume& bm, const ReconConfig& cfg,
                              NufftPath path = NufftPath::Auto)
{
    cfg.validate();
    require(cfg.method == ReconMethod::AGTV, "recon_agtv: method must be agtv");
    require(data.shape_consistent(), "recon_agtv: data shape inconsistent with trajectory");
    const GridDims dims = coils.dims;
    require_same_dims(bm.dims, dims, "recon_agtv background mask");
    if (prior) require_same_dims(prior->dims, dims, "recon_agtv prior");

    std::array<std::vector<double>, 3> maps;
    if (prior && cfg.omega < 1.0) {
        maps = compute_agtv_maps(*prior, cfg.omega);
    } else {
        for (auto& m : maps) m.assign(dims.total(), 1.0);
    }

    AcqOperator op(dims, traj, coils, path);
    const double opn = op.estimate_norm();
    const double s = opn > 0.0 ? opn : 1.0;
    const double inv_s = 1.0 / s;

    std::vector<cdouble> fbar = data.samples; // scaled measured data
    for (auto& v : fbar) v *= inv_s;
    const double sigma_sq_bar = cfg.sigma_sq * inv_s * inv_s;

    const double mu = 1.0;
    const double beta = cfg.admm_rho;
    // Shrinkage weights live in the normalized problem, same as alpha in
    // recon_admm; the logged objective below stays in user units.
    const double lam_xyz = cfg.lambda_xyz * inv_s * inv_s;
    const double lam_bm = cfg.lambda_bm * inv_s * inv_s;
    const std::size_t n = dims.total();
    const int axes[3] = {dims.nx, dims.ny, dims.nz};

    // u-solve operator: mu*Abar^T Abar + beta * sum_a (m_a d_a)^T (m_a d_a) + beta*diag(bm)
    GradField gf, gf2;
    auto apply_M = [&](const std::vector<double>& u, std::vector<double>& out) {
        out = op.adjoint_real(op.forward_real(u));
        for (auto& v : out) v *= mu * inv_s * inv_s;
        gradient(dims, u, gf);
        for (int a = 0; a < 3; ++a)
            for (std::size_t i = 0; i < n; ++i) gf[a][i] *= maps[a][i] * maps[a][i];
        std::vector<double> div;
        gradient_adjoint(dims, gf, div);
        for (std::size_t i = 0; i < n; ++i) {
            out[i] += beta * div[i];
            if (bm.data[i]) out[i] += beta * u[i];
        }
    };

    std::vector<double> u = detail::weighted_adjoint_init(op, data);
    std::array<std::vector<double>, 3> e, b;
    for (int a = 0; a < 3; ++a) {
        e[a].assign(n, 0.0);
        b[a].assign(n, 0.0);
    }
    std::vector<double> e_bm(n, 0.0), b_bm(n, 0.0);
    std::vector<cdouble> fk = fbar;

    ReconResult res;
    res.method = ReconMethod::AGTV;

    auto objective_of = [&](const std::vector<double>& img) {
        gradient(dims, img, gf2);
        double tv = 0.0, bme = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double s2 = 0.0;
            for (int a = 0; a < 3; ++a) {
                const double g = maps[a][i] * gf2[a][i];
                s2 += g * g;
            }
            tv += std::sqrt(s2);
            if (bm.data[i]) bme += img[i] * img[i];
        }
        return cfg.lambda_xyz * tv + cfg.lambda_bm * std::sqrt(bme);
    };
    res.adjoint_objective = objective_of(u);

    std::vector<double> rhs(n), u_prev(n);
    double res_unscaled = 0.0;
    int it = 1;
    for (; it <= cfg.max_outer_iters; ++it) {
        u_prev = u;

        // u-update
        auto atf = op.adjoint_real(fk);
        for (std::size_t i = 0; i < n; ++i) rhs[i] = mu * inv_s * atf[i];
        for (int a = 0; a < 3; ++a) {
            gf[a].resize(n);
            for (std::size_t i = 0; i < n; ++i) gf[a][i] = maps[a][i] * (e[a][i] - b[a][i]);
        }
        std::vector<double> div;
        gradient_adjoint(dims, gf, div);
        for (std::size_t i = 0; i < n; ++i) {
            rhs[i] += beta * div[i];
            if (bm.data[i]) rhs[i] += beta * (e_bm[i] - b_bm[i]);
        }
        detail::conjugate_gradient(apply_M, rhs, u, 1e-8, 50);

        // e-update: joint isotropic shrinkage over axes, plus the global
        // group shrinkage for the background term
        gradient(dims, u, gf);
        for (std::size_t i = 0; i < n; ++i) {
            double v[3], s2 = 0.0;
            for (int a = 0; a < 3; ++a) {
                v[a] = maps[a][i] * gf[a][i] + b[a][i];
                s2 += v[a] * v[a];
            }
            const double mag = std::sqrt(s2);
            const double shrink =
                mag > 0.0 ? std::max(0.0, 1.0 - (lam_xyz / beta) / mag) : 0.0;
            for (int a = 0; a < 3; ++a) e[a][i] = shrink * v[a];
        }
        double bm_mag = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            if (bm.data[i]) {
                const double v = u[i] + b_bm[i];
                e_bm[i] = v;
                bm_mag += v * v;
            }
        bm_mag = std::sqrt(bm_mag);
        const double bm_shrink =
            bm_mag > 0.0 ? std::max(0.0, 1.0 - (lam_bm / beta) / bm_mag) : 0.0;
        for (std::size_t i = 0; i < n; ++i)
            if (bm.data[i]) e_bm[i] *= bm_shrink;

        // Bregman variable updates
        for (int a = 0; a < 3; ++a)
            for (std::size_t i = 0; i < n; ++i) b[a][i] += maps[a][i] * gf[a][i] - e[a][i];
        for (std::size_t i = 0; i < n; ++i)
            if (bm.data[i]) b_bm[i] += u[i] - e_bm[i];

        // outer Bregman add-back on the fidelity constraint
        auto au = op.forward_real(u);
        double res_bar = 0.0;
        for (std::size_t i = 0; i < au.size(); ++i) {
            const cdouble pred = au[i] * inv_s;
            res_bar += std::norm(pred - fbar[i]);
            fk[i] += fbar[i] - pred;
        }
        res_unscaled = res_bar * s * s;

        double du = 0.0, nu = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double d = u[i] - u_prev[i];
            du += d * d;
            nu += u[i] * u[i];
        }
        const double rel_change = nu > 0.0 ? std::sqrt(du / nu) : 0.0;

        res.log.push_back({it, objective_of(u), res_unscaled, rel_change, 0.0});

        if (res_bar <= sigma_sq_bar && rel_change < cfg.tol) {
            res.converged = true;
            ++it;
            break;
        }
    }
    res.iterations = int(res.log.size());
    res.final_data_residual = res_unscaled;
    res.image = Image(dims, voxel, "a.u.");
    res.image.data = std::move(u);
    return res;
}

} // namespace namri
