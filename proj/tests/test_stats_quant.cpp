#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "namri/quant.hpp"
#include "namri/stats.hpp"

using namespace namri;

namespace {

double sample_mean(const std::vector<double>& v)
{
    double s = 0;
    for (double x : v) s += x;
    return s / double(v.size());
}

double sample_sd(const std::vector<double>& v)
{
    const double m = sample_mean(v);
    double ss = 0;
    for (double x : v) ss += (x - m) * (x - m);
    return std::sqrt(ss / double(v.size() - 1));
}

} // namespace

TEST_CASE("two-point calibration through the reference vials")
{
    const auto curve = fit_calibration({770.0, 1540.0}, {77.0, 154.0});
    CHECK(curve.slope == 10.0);
    CHECK(curve.intercept == 0.0);
    CHECK(curve.to_concentration(770.0) == 77.0);
    CHECK(std::fabs(curve.to_signal(100.0) - 1000.0) <= 1e-12);

    SECTION("offset data produces a nonzero intercept")
    {
        const auto c2 = fit_calibration({820.0, 1590.0}, {77.0, 154.0});
        CHECK(std::fabs(c2.slope - 10.0) <= 1e-12);
        CHECK(std::fabs(c2.intercept - 50.0) <= 1e-9);
    }
    SECTION("degenerate fits are rejected")
    {
        CHECK_THROWS_AS(fit_calibration({100.0, 100.0}, {77.0, 154.0}), std::invalid_argument);
        CHECK_THROWS_AS(fit_calibration({770.0, 1540.0}, {77.0, 77.0}), std::invalid_argument);
        CHECK_THROWS_AS(
            fit_calibration({std::numeric_limits<double>::quiet_NaN(), 1.0}, {77.0, 154.0}),
            std::invalid_argument);
    }
}

TEST_CASE("noiseless phantom vials round-trip through the calibration")
{
    const GridDims dims{64, 64, 1};
    const auto ph = build_breast_phantom(dims, {3, 3, 3}, PhantomGeometry{}, 9);
    const Image sig = signal_map(ph);

    const auto vial_lo = make_mask(ph, "vial77", dims, 1);
    const auto vial_hi = make_mask(ph, "vial154", dims, 1);
    const auto curve = fit_calibration(sig, vial_lo, vial_hi);

    const auto tsc_lo = quantify_tsc(sig, vial_lo, curve, false);
    const auto tsc_hi = quantify_tsc(sig, vial_hi, curve, false);
    CHECK(tsc_lo.mean == 77.0);
    CHECK(std::fabs(tsc_hi.mean - 154.0) <= 1e-12);
    CHECK(tsc_lo.sd == 0.0);
    CHECK_FALSE(tsc_lo.water_corrected);

    SECTION("tissue regions invert the signal model exactly")
    {
        const auto gland = make_mask(ph, "glandular", dims, 0);
        const auto adipose = make_mask(ph, "adipose", dims, 0);
        const auto tsc_g = quantify_tsc(sig, gland, curve, true);
        const auto tsc_a = quantify_tsc(sig, adipose, curve, true);
        CHECK(std::fabs(tsc_g.mean - 40.0) <= 1e-12);
        CHECK(std::fabs(tsc_a.mean - 20.0) <= 1e-12);
        CHECK(tsc_g.water_corrected);
    }
}

TEST_CASE("water correction behaviour")
{
    const GridDims dims{16, 16, 1};
    Image img(dims);
    RegionMask mask;
    mask.region_name = "roi";
    mask.voxels = MaskVolume(dims);
    for (int x = 4; x < 8; ++x) {
        img.at(x, 5) = 30.0;
        mask.voxels.at(x, 5) = 1;
    }
    const auto curve = fit_calibration({77.0, 154.0}, {77.0, 154.0});

    const auto plain = quantify_tsc(img, mask, curve, false);
    const auto unit_wf = quantify_tsc(img, mask, curve, true, 1.0);
    const auto corrected = quantify_tsc(img, mask, curve, true, 0.75);

    CHECK(unit_wf.mean == plain.mean);
    CHECK(corrected.mean >= plain.mean);
    CHECK(std::fabs(corrected.mean - plain.mean / 0.75) <= 1e-12);

    SECTION("invalid inputs")
    {
        CHECK_THROWS_AS(quantify_tsc(img, mask, CalibrationCurve{}, false), std::invalid_argument);
        CHECK_THROWS_AS(quantify_tsc(img, mask, curve, true, 0.0), std::invalid_argument);
        CHECK_THROWS_AS(quantify_tsc(img, mask, curve, true, 1.5), std::invalid_argument);
        RegionMask empty;
        empty.voxels = MaskVolume(dims);
        CHECK_THROWS_AS(quantify_tsc(img, empty, curve, false), std::invalid_argument);
    }
}

TEST_CASE("quantification is invariant to a global intensity scale")
{
    const GridDims dims{48, 48, 1};
    const auto ph = build_breast_phantom(dims, {4, 4, 4}, PhantomGeometry{}, 13);
    Image sig = signal_map(ph);
    const auto vial_lo = make_mask(ph, "vial77", dims, 0);
    const auto vial_hi = make_mask(ph, "vial154", dims, 0);
    const auto gland = make_mask(ph, "glandular", dims, 0);

    const auto base =
        quantify_tsc(sig, gland, fit_calibration(sig, vial_lo, vial_hi), true);

    Image scaled = sig;
    for (auto& v : scaled.data) v *= 3.7e-3;
    const auto redo =
        quantify_tsc(scaled, gland, fit_calibration(scaled, vial_lo, vial_hi), true);

    CHECK(std::fabs(base.mean - redo.mean) <= 1e-10);
    CHECK(std::fabs(base.sd - redo.sd) <= 1e-10);
}

TEST_CASE("region statistics use the population SD")
{
    const GridDims dims{4, 4, 1};
    Image img(dims);
    RegionMask mask;
    mask.voxels = MaskVolume(dims);
    img.at(0, 0) = 0.0;
    img.at(1, 0) = 2.0;
    mask.voxels.at(0, 0) = 1;
    mask.voxels.at(1, 0) = 1;

    const auto st = region_stats(img, mask);
    CHECK(st.mean == 1.0);
    CHECK(st.sd == 1.0);
    CHECK(st.min == 0.0);
    CHECK(st.max == 2.0);
    CHECK(st.n == 2);

    RegionMask empty;
    empty.voxels = MaskVolume(dims);
    CHECK_THROWS_AS(region_stats(img, empty), std::invalid_argument);
}

TEST_CASE("t tail probabilities match closed forms at low dof")
{
    // dof 1 is Cauchy: p = 1 - 2*atan(t)/pi; dof 2: p = 1 - t/sqrt(2+t^2)
    for (double t : {0.5, 1.0, 2.0, 5.0}) {
        CHECK(std::fabs(t_two_sided_p(t, 1.0) - (1.0 - 2.0 * std::atan(t) / M_PI)) <= 1e-10);
        CHECK(std::fabs(t_two_sided_p(t, 2.0) - (1.0 - t / std::sqrt(2.0 + t * t))) <= 1e-10);
    }
    CHECK(t_two_sided_p(0.0, 5.0) == 1.0);

    SECTION("quantile inverts the tail probability")
    {
        const double q = t_quantile_two_sided(0.95, 7.0);
        CHECK(std::fabs(t_two_sided_p(q, 7.0) - 0.05) <= 1e-10);
        CHECK(std::fabs(t_quantile_two_sided(0.95, 1.0) - 12.7062047) <= 1e-3);
        CHECK(std::fabs(t_quantile_two_sided(0.95, 11.0) - 2.20098516) <= 1e-4);
    }
}

TEST_CASE("synthetic differences reproduce the prescribed summary statistics")
{
    for (int n : {2, 5, 12, 13}) {
        const auto d = make_synthetic_diffs(3.1, 1.7, n);
        REQUIRE(int(d.size()) == n);
        CHECK(std::fabs(sample_mean(d) - 3.1) <= 1e-12);
        CHECK(std::fabs(sample_sd(d) - 1.7) <= 1e-12);
    }
    const auto flat = make_synthetic_diffs(2.0, 0.0, 6);
    for (double v : flat) CHECK(v == 2.0);
}

TEST_CASE("paired t-test on published summary rows")
{
    SECTION("strong effect: mean 10.72, sd 4.20, n 12")
    {
        const auto res = paired_ttest(make_synthetic_diffs(10.72, 4.20, 12));
        CHECK(res.n == 12);
        CHECK(std::fabs(res.ci95_lo - 8.05) <= 0.02);
        CHECK(std::fabs(res.ci95_hi - 13.38) <= 0.02);
        CHECK(res.p_two_sided < 0.001);
        CHECK_FALSE(res.degenerate);
    }
    SECTION("borderline effect: mean 2.83, sd 4.16, n 12")
    {
        const auto res = paired_ttest(make_synthetic_diffs(2.83, 4.16, 12));
        CHECK(std::fabs(res.ci95_lo - 0.19) <= 0.02);
        CHECK(std::fabs(res.ci95_hi - 5.48) <= 0.02);
        CHECK(std::fabs(res.p_two_sided - 0.038) <= 0.003);
    }
}

TEST_CASE("paired t-test statistics follow the textbook formulas")
{
    const std::vector<double> diffs{1.0, 2.0, 3.0, 4.0, 5.0};
    const auto res = paired_ttest(diffs);

    const double mean = sample_mean(diffs);
    const double sd = sample_sd(diffs);
    const double t = mean / (sd / std::sqrt(5.0));
    CHECK(res.mean_diff == mean);
    CHECK(std::fabs(res.sd_diff - sd) <= 1e-14);
    CHECK(std::fabs(res.t_stat - t) <= 1e-12);
    CHECK(std::fabs(res.p_two_sided - t_two_sided_p(t, 4.0)) <= 1e-14);

    SECTION("sign symmetry")
    {
        std::vector<double> neg;
        for (double d : diffs) neg.push_back(-d);
        const auto res_neg = paired_ttest(neg);
        CHECK(res_neg.p_two_sided == res.p_two_sided);
        CHECK(res_neg.t_stat == -res.t_stat);
    }
}

TEST_CASE("paired t-test degenerate and invalid inputs")
{
    const auto res = paired_ttest({2.5, 2.5, 2.5, 2.5});
    CHECK(res.degenerate);
    CHECK(res.p_two_sided == 0.0);
    CHECK(res.ci95_lo == 2.5);
    CHECK(res.ci95_hi == 2.5);
    CHECK(std::isinf(res.t_stat));

    const auto zero = paired_ttest({0.0, 0.0, 0.0});
    CHECK(zero.degenerate);
    CHECK(zero.t_stat == 0.0);

    CHECK_THROWS_AS(paired_ttest({1.0}), std::invalid_argument);
    CHECK_THROWS_AS(paired_ttest({1.0, std::numeric_limits<double>::infinity()}),
                    std::invalid_argument);
}

TEST_CASE("p-values shrink as the standardized effect grows")
{
    double prev = 1.1;
    for (double mean : {0.5, 1.0, 2.0, 4.0}) {
        const auto res = paired_ttest(make_synthetic_diffs(mean, 2.0, 10));
        CHECK(res.p_two_sided < prev);
        prev = res.p_two_sided;
    }
}

TEST_CASE("Pearson correlation basics")
{
    const std::vector<double> x{1.0, 2.0, 3.0, 4.0, 5.0};
    std::vector<double> y;

    SECTION("perfect linear relation")
    {
        for (double v : x) y.push_back(2.0 * v + 1.0);
        const auto res = pearson(x, y);
        CHECK(std::fabs(res.r - 1.0) <= 1e-12);
        CHECK(res.p_two_sided <= 1e-10);
    }
    SECTION("perfect anticorrelation")
    {
        for (double v : x) y.push_back(-v);
        const auto res = pearson(x, y);
        CHECK(std::fabs(res.r + 1.0) <= 1e-12);
        CHECK(res.p_two_sided <= 1e-10);
    }
    SECTION("zero variance is rejected")
    {
        y.assign(x.size(), 3.0);
        CHECK_THROWS_AS(pearson(x, y), std::invalid_argument);
        CHECK_THROWS_AS(pearson(y, x), std::invalid_argument);
    }
    SECTION("length mismatch and short inputs are rejected")
    {
        CHECK_THROWS_AS(pearson(x, {1.0, 2.0}), std::invalid_argument);
        CHECK_THROWS_AS(pearson({1.0, 2.0}, {2.0, 1.0}), std::invalid_argument);
    }
}

TEST_CASE("Pearson correlation matches the covariance oracle")
{
    const std::vector<double> x{1.0, 2.0, 3.0, 4.0};
    const std::vector<double> y{1.0, 2.0, 3.0, 5.0};
    const auto res = pearson(x, y);

    const int n = int(x.size());
    double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
    for (int i = 0; i < n; ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        syy += y[i] * y[i];
        sxy += x[i] * y[i];
    }
    const double r = (n * sxy - sx * sy) /
                     std::sqrt((n * sxx - sx * sx) * (n * syy - sy * sy));
    CHECK(std::fabs(res.r - r) <= 1e-12);

    const double t = r * std::sqrt((n - 2) / (1.0 - r * r));
    CHECK(std::fabs(res.p_two_sided - t_two_sided_p(t, double(n - 2))) <= 1e-12);
    CHECK(res.n == n);
}
