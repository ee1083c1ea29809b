// Proximal operator of alpha * J(u), J(u) = sum_x |D(x) grad u(x)|_2, solved
// by fast gradient projection on the dual. D(x) is the identity (plain TV),
// a scalar weight (wTV), or the symmetric projection I - gamma^2 xi xi^T
// (dTV); all have operator norm <= 1, keeping the dual step size uniform.

#pragma once

#include <array>
#include <cmath>
#include <vector>

#include "namri/core.hpp"
#include "namri/grad.hpp"
#include "namri/prior_maps.hpp"

namespace namri {

struct TvWeighting {
    const std::vector<double>* scalar_w = nullptr;              // wTV
    const std::vector<std::array<double, 3>>* xi = nullptr;     // dTV
    double gamma = 0.0;

    static TvWeighting plain() { return {}; }
    static TvWeighting weighted(const EdgeWeightMap& m) { return {&m.w, nullptr, 0.0}; }
    static TvWeighting directional(const DirectionField& f)
    {
        return {nullptr, &f.xi, f.gamma};
    }

    // g <- D(x) g ; D is symmetric, so the same routine serves D^T.
    void apply(std::size_t i, double& gx, double& gy, double& gz) const
    {
        if (scalar_w) {
            const double w = (*scalar_w)[i];
            gx *= w;
            gy *= w;
            gz *= w;
        }
        if (xi && gamma > 0.0) {
            const auto& v = (*xi)[i];
            const double dot = v[0] * gx + v[1] * gy + v[2] * gz;
            const double g2 = gamma * gamma;
            gx -= g2 * dot * v[0];
            gy -= g2 * dot * v[1];
            gz -= g2 * dot * v[2];
        }
    }
};

inline double tv_value(const GridDims& dims, const std::vector<double>& u,
                       const TvWeighting& wgt)
{
    GradField g;
    gradient(dims, u, g);
    double total = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        double gx = g[0][i], gy = g[1][i], gz = g[2][i];
        wgt.apply(i, gx, gy, gz);
        total += std::sqrt(gx * gx + gy * gy + gz * gz);
    }
    return total;
}

// argmin_u 1/2 |u - z|^2 + alpha_eff * J(u), via `inner_iters` FGP steps.
inline std::vector<double> tv_prox(const GridDims& dims, const std::vector<double>& z,
                                   double alpha_eff, const TvWeighting& wgt, int inner_iters)
{
    require(alpha_eff >= 0.0, "tv_prox: alpha_eff must be >= 0");
    require(inner_iters >= 1, "tv_prox: inner_iters must be >= 1");
    if (alpha_eff == 0.0) return z;

    const std::size_t n = z.size();
    const double step = 1.0 / (4.0 * active_axes(dims) * alpha_eff);

    GradField p, q, g;
    for (int a = 0; a < 3; ++a) {
        p[a].assign(n, 0.0);
        q[a].assign(n, 0.0);
    }
    std::vector<double> u(n), div(n);
    double t = 1.0;

    for (int it = 0; it < inner_iters; ++it) {
        // u = z - alpha * grad^T D q
        GradField dq = q;
        for (std::size_t i = 0; i < n; ++i) wgt.apply(i, dq[0][i], dq[1][i], dq[2][i]);
        gradient_adjoint(dims, dq, div);
        for (std::size_t i = 0; i < n; ++i) u[i] = z[i] - alpha_eff * div[i];

        gradient(dims, u, g);
        const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
        const double momentum = (t - 1.0) / t_next;

        for (std::size_t i = 0; i < n; ++i) {
            double gx = g[0][i], gy = g[1][i], gz = g[2][i];
            wgt.apply(i, gx, gy, gz);
            double px = q[0][i] + step * gx;
            double py = q[1][i] + step * gy;
            double pz = q[2][i] + step * gz;
            const double mag = std::sqrt(px * px + py * py + pz * pz);
            if (mag > 1.0) {
                px /= mag;
                py /= mag;
                pz /= mag;
            }
            q[0][i] = px + momentum * (px - p[0][i]);
            q[1][i] = py + momentum * (py - p[1][i]);
            q[2][i] = pz + momentum * (pz - p[2][i]);
            p[0][i] = px;
            p[1][i] = py;
            p[2][i] = pz;
        }
        t = t_next;
    }

    // final primal point from the last feasible dual iterate p
    GradField dp = p;
    for (std::size_t i = 0; i < n; ++i) wgt.apply(i, dp[0][i], dp[1][i], dp[2][i]);
    gradient_adjoint(dims, dp, div);
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = z[i] - alpha_eff * div[i];
    return out;
}

} // namespace namri
