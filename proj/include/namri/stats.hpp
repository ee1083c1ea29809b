// Paired t-test and Pearson correlation with p-values from the regularized
// incomplete beta function (continued-fraction evaluation, no statistics
// dependency). The t quantile for confidence intervals is inverted by
// bisection on the two-sided tail probability.

#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "namri/core.hpp"

namespace namri {
namespace detail {

inline double gammln(double xx)
{
    static const double cof[6] = {76.18009172947146,  -86.50532032941677, 24.01409824083091,
                                  -1.231739572450155, 0.1208650973866179e-2,
                                  -0.5395239384953e-5};
    double x = xx, y = xx;
    double tmp = x + 5.5;
    tmp -= (x + 0.5) * std::log(tmp);
    double ser = 1.000000000190015;
    for (int j = 0; j <= 5; ++j) ser += cof[j] / ++y;
    return -tmp + std::log(2.5066282746310005 * ser / x);
}

inline double betacf(double a, double b, double x)
{
    const int kMaxIter = 200;
    const double kEps = 3.0e-14, kFpMin = 1.0e-300;

    const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < kFpMin) d = kFpMin;
    d = 1.0 / d;
    double h = d;
    int m;
    for (m = 1; m <= kMaxIter; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kFpMin) d = kFpMin;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kFpMin) c = kFpMin;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kFpMin) d = kFpMin;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kFpMin) c = kFpMin;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) <= kEps) break;
    }
    if (m > kMaxIter) throw std::runtime_error("betacf: continued fraction did not converge");
    return h;
}

// Regularized incomplete beta I_x(a, b).
inline double betai(double a, double b, double x)
{
    require(x >= 0.0 && x <= 1.0, "betai: x must be in [0,1]");
    if (x == 0.0 || x == 1.0) return x;
    const double bt = std::exp(gammln(a + b) - gammln(a) - gammln(b) + a * std::log(x) +
                               b * std::log(1.0 - x));
    if (x < (a + 1.0) / (a + b + 2.0)) return bt * betacf(a, b, x) / a;
    return 1.0 - bt * betacf(b, a, 1.0 - x) / b;
}

} // namespace detail

// Two-sided tail probability of Student's t with nu degrees of freedom.
inline double t_two_sided_p(double t, double nu)
{
    require(nu >= 1.0, "t_two_sided_p: dof must be >= 1");
    if (!std::isfinite(t)) return 0.0;
    return detail::betai(0.5 * nu, 0.5, nu / (nu + t * t));
}

// Quantile t such that P(|T| <= t) = conf, by bisection.
inline double t_quantile_two_sided(double conf, double nu)
{
    require(conf > 0.0 && conf < 1.0, "t_quantile_two_sided: conf must be in (0,1)");
    const double target = 1.0 - conf; // two-sided tail mass
    double lo = 0.0, hi = 1.0;
    while (t_two_sided_p(hi, nu) > target) hi *= 2.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (t_two_sided_p(mid, nu) > target)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

struct PairedTestResult {
    double mean_diff = 0.0;
    double sd_diff = 0.0; // sample SD (n-1 denominator)
    int n = 0;
    double ci95_lo = 0.0;
    double ci95_hi = 0.0;
    double t_stat = 0.0;
    double p_two_sided = 1.0;
    bool degenerate = false; // all differences equal (sd = 0)
};

inline PairedTestResult paired_ttest(const std::vector<double>& diffs)
{
    const int n = int(diffs.size());
    require(n >= 2, "paired_ttest: need at least 2 differences");
    double mean = 0.0;
    for (double d : diffs) {
        require(std::isfinite(d), "paired_ttest: differences must be finite");
        mean += d;
    }
    mean /= n;
    double ss = 0.0;
    for (double d : diffs) ss += (d - mean) * (d - mean);
    const double sd = std::sqrt(ss / (n - 1));

    PairedTestResult res;
    res.mean_diff = mean;
    res.sd_diff = sd;
    res.n = n;

    if (sd == 0.0) {
        res.degenerate = true;
        res.t_stat = mean == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
        res.p_two_sided = 0.0; // reporting convention for a zero-variance sample
        res.ci95_lo = res.ci95_hi = mean;
        return res;
    }

    const double se = sd / std::sqrt(double(n));
    res.t_stat = mean / se;
    res.p_two_sided = t_two_sided_p(res.t_stat, n - 1);
    const double tq = t_quantile_two_sided(0.95, n - 1);
    res.ci95_lo = mean - tq * se;
    res.ci95_hi = mean + tq * se;
    return res;
}

struct PearsonResult {
    double r = 0.0;
    double p_two_sided = 1.0;
    int n = 0;
};

inline PearsonResult pearson(const std::vector<double>& x, const std::vector<double>& y)
{
    require(x.size() == y.size(), "pearson: length mismatch");
    const int n = int(x.size());
    require(n >= 3, "pearson: need at least 3 points");

    double mx = 0, my = 0;
    for (int i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0, syy = 0, sxy = 0;
    for (int i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    require(sxx > 0.0 && syy > 0.0, "pearson: zero variance makes correlation undefined");

    PearsonResult res;
    res.n = n;
    res.r = sxy / std::sqrt(sxx * syy);
    const double r2 = std::min(1.0, res.r * res.r);
    if (r2 >= 1.0) {
        res.p_two_sided = 0.0;
    } else {
        const double t = res.r * std::sqrt((n - 2) / (1.0 - r2));
        res.p_two_sided = t_two_sided_p(t, n - 2);
    }
    return res;
}

// Differences with prescribed sample mean and SD, for reporting paired tests
// that are published only as summary statistics: pairs mean +- delta (plus
// one exactly at the mean when n is odd).
inline std::vector<double> make_synthetic_diffs(double mean, double sd, int n)
{
    require(n >= 2, "make_synthetic_diffs: n must be >= 2");
    require(sd >= 0.0, "make_synthetic_diffs: sd must be >= 0");
    std::vector<double> out;
    out.reserve(std::size_t(n));
    const bool odd = n % 2 != 0;
    const double delta = odd ? sd : sd * std::sqrt(double(n - 1) / n);
    for (int i = 0; i < n / 2; ++i) {
        out.push_back(mean + delta);
        out.push_back(mean - delta);
    }
    if (odd) out.push_back(mean);
    return out;
}

} // namespace namri
