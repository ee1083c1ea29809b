#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "namri/prior_maps.hpp"
#include "namri/rng.hpp"
#include "namri/tv.hpp"

using namespace namri;

namespace {

std::vector<double> random_vec(std::size_t n, Rng& rng)
{
    std::vector<double> v(n);
    for (auto& x : v) x = rng.gaussian();
    return v;
}

double field_dot(const GradField& a, const GradField& b)
{
    double s = 0;
    for (int ax = 0; ax < 3; ++ax)
        for (std::size_t i = 0; i < a[ax].size(); ++i) s += a[ax][i] * b[ax][i];
    return s;
}

} // namespace

TEST_CASE("forward-difference gradient on a tiny grid")
{
    const GridDims d{3, 1, 1};
    const std::vector<double> u{1, 4, 9};
    GradField g;
    gradient(d, u, g);
    CHECK(g[0] == std::vector<double>{3, 5, 0});
    CHECK(g[1] == std::vector<double>{0, 0, 0});
    CHECK(g[2] == std::vector<double>{0, 0, 0});
}

TEST_CASE("gradient and its adjoint satisfy the inner-product identity")
{
    for (GridDims d : {GridDims{8, 8, 1}, GridDims{5, 4, 3}, GridDims{16, 1, 1}}) {
        Rng rng(derive_seed(1, "grad-adjoint"));
        const auto u = random_vec(d.total(), rng);
        GradField p;
        for (int a = 0; a < 3; ++a) p[a] = random_vec(d.total(), rng);

        GradField gu;
        gradient(d, u, gu);
        std::vector<double> gtp;
        gradient_adjoint(d, p, gtp);

        const double lhs = field_dot(gu, p);
        const double rhs = dot(u, gtp);
        CHECK(std::abs(lhs - rhs) <= 1e-12 * (std::abs(lhs) + 1.0));
    }
}

TEST_CASE("plain TV value on a 2x2 example")
{
    const GridDims d{2, 2, 1};
    const std::vector<double> u{0, 1, 2, 3};
    const double tv = tv_value(d, u, TvWeighting::plain());
    CHECK(tv == Catch::Approx(std::sqrt(5.0) + 3.0).margin(1e-12));
}

TEST_CASE("tv_prox degenerate cases")
{
    const GridDims d{8, 8, 1};
    Rng rng(derive_seed(9, "prox"));
    const auto z = random_vec(d.total(), rng);

    SECTION("alpha 0 returns z unchanged")
    {
        const auto out = tv_prox(d, z, 0.0, TvWeighting::plain(), 5);
        CHECK(out == z);
    }
    SECTION("constant input is a fixed point")
    {
        std::vector<double> c(d.total(), 3.25);
        const auto out = tv_prox(d, c, 0.7, TvWeighting::plain(), 30);
        for (double v : out) CHECK(v == Catch::Approx(3.25).margin(1e-12));
    }
    SECTION("invalid arguments rejected")
    {
        CHECK_THROWS_AS(tv_prox(d, z, -1.0, TvWeighting::plain(), 5), std::invalid_argument);
        CHECK_THROWS_AS(tv_prox(d, z, 1.0, TvWeighting::plain(), 0), std::invalid_argument);
    }
}

TEST_CASE("two-point prox matches the closed form")
{
    const GridDims d{2, 1, 1};
    const std::vector<double> z{0.0, 10.0};

    struct Case {
        double alpha;
        double move;
    };
    for (const Case& tc : {Case{3.0, 3.0}, Case{10.0, 5.0}, Case{0.25, 0.25}}) {
        const auto out = tv_prox(d, z, tc.alpha, TvWeighting::plain(), 400);
        CHECK(out[0] == Catch::Approx(0.0 + tc.move).margin(1e-6));
        CHECK(out[1] == Catch::Approx(10.0 - tc.move).margin(1e-6));
    }
}

TEST_CASE("unit weights and zero gamma reduce to plain TV")
{
    const GridDims d{12, 10, 1};
    Rng rng(derive_seed(21, "reduction"));
    const auto z = random_vec(d.total(), rng);
    const auto plain = tv_prox(d, z, 0.8, TvWeighting::plain(), 40);

    SECTION("wTV with w == 1")
    {
        EdgeWeightMap w1;
        w1.dims = d;
        w1.w.assign(d.total(), 1.0);
        const auto out = tv_prox(d, z, 0.8, TvWeighting::weighted(w1), 40);
        for (std::size_t i = 0; i < out.size(); ++i) CHECK(out[i] == plain[i]);
    }
    SECTION("dTV with gamma == 0")
    {
        DirectionField f;
        f.dims = d;
        f.gamma = 0.0;
        f.xi.assign(d.total(), {0.3, 0.9, 0.0});
        const auto out = tv_prox(d, z, 0.8, TvWeighting::directional(f), 40);
        for (std::size_t i = 0; i < out.size(); ++i) CHECK(out[i] == plain[i]);
    }
}

TEST_CASE("wTV weight formula")
{
    SECTION("constant prior gives unit weights")
    {
        Image prior({16, 16, 1});
        for (auto& v : prior.data) v = 2.0;
        const auto map = compute_wtv_weights(prior, 0.5);
        for (double w : map.w) CHECK(w == 1.0);
    }
    SECTION("gradient equal to eta gives 1/sqrt(2)")
    {
        Image prior({16, 16, 1});
        const double slope = 0.37;
        for (int y = 0; y < 16; ++y)
            for (int x = 0; x < 16; ++x) prior.at(x, y) = slope * x;
        const auto map = compute_wtv_weights(prior, slope);
        // interior voxels see |grad| = slope; the far-x column is Neumann-flat
        for (int y = 0; y < 16; ++y)
            for (int x = 0; x < 15; ++x)
                CHECK(map.w[prior.index(x, y)] == Catch::Approx(1.0 / std::sqrt(2.0)).margin(1e-12));
        for (int y = 0; y < 16; ++y) CHECK(map.w[prior.index(15, y)] == 1.0);
    }
    SECTION("step edge minimises the weight on the edge line")
    {
        Image prior({16, 16, 1});
        for (int y = 0; y < 16; ++y)
            for (int x = 0; x < 16; ++x) prior.at(x, y) = x >= 8 ? 1.0 : 0.0;
        const auto map = compute_wtv_weights(prior, 0.05);
        for (int y = 0; y < 16; ++y) {
            int argmin = 0;
            double best = 2.0;
            for (int x = 0; x < 16; ++x)
                if (map.w[prior.index(x, y)] < best) {
                    best = map.w[prior.index(x, y)];
                    argmin = x;
                }
            CHECK(argmin == 7); // forward difference puts the jump at x = 7
            CHECK(best < 0.1);
        }
    }
    SECTION("eta must be positive")
    {
        Image prior({8, 8, 1});
        CHECK_THROWS_AS(compute_wtv_weights(prior, 0.0), std::invalid_argument);
    }
}

TEST_CASE("dTV direction field formula")
{
    SECTION("constant prior gives zero directions")
    {
        Image prior({12, 12, 1});
        for (auto& v : prior.data) v = 5.0;
        const auto f = compute_dtv_field(prior, 0.1, 0.95);
        for (const auto& xi : f.xi) {
            CHECK(xi[0] == 0.0);
            CHECK(xi[1] == 0.0);
            CHECK(xi[2] == 0.0);
        }
    }
    SECTION("directions never exceed unit norm")
    {
        Image prior({16, 16, 1});
        for (int y = 0; y < 16; ++y)
            for (int x = 0; x < 16; ++x) prior.at(x, y) = std::sin(0.7 * x) + 0.4 * y;
        const auto f = compute_dtv_field(prior, 0.01, 0.9);
        for (const auto& xi : f.xi)
            CHECK(xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2] <= 1.0 + 1e-12);
    }
    SECTION("projection attenuates gradients across a sharp edge by 1 - gamma^2")
    {
        Image prior({16, 16, 1});
        for (int y = 0; y < 16; ++y)
            for (int x = 0; x < 16; ++x) prior.at(x, y) = x >= 8 ? 100.0 : 0.0;
        const double gamma = 0.95;
        const auto f = compute_dtv_field(prior, 1e-4, gamma);

        const std::size_t edge = prior.index(7, 8);
        CHECK(std::abs(f.xi[edge][0]) == Catch::Approx(1.0).epsilon(1e-6));

        const auto wgt = TvWeighting::directional(f);
        double gx = 1.0, gy = 0.0, gz = 0.0;
        wgt.apply(edge, gx, gy, gz);
        const double mag = std::sqrt(gx * gx + gy * gy + gz * gz);
        CHECK(mag == Catch::Approx(1.0 - gamma * gamma).epsilon(0.01));
    }
    SECTION("parameter validation")
    {
        Image prior({8, 8, 1});
        CHECK_THROWS_AS(compute_dtv_field(prior, 0.0, 0.5), std::invalid_argument);
        CHECK_THROWS_AS(compute_dtv_field(prior, 0.1, 1.5), std::invalid_argument);
    }
}

TEST_CASE("default eta follows the prior gradient scale")
{
    Image prior({16, 16, 1});
    for (int y = 0; y < 16; ++y)
        for (int x = 0; x < 16; ++x) prior.at(x, y) = x >= 8 ? 3.0 : 0.0;
    CHECK(default_eta(prior.dims, prior.data) == Catch::Approx(0.03).margin(1e-12));

    Image flat({16, 16, 1});
    CHECK(default_eta(flat.dims, flat.data) == 1.0);
}

TEST_CASE("threshold maps invert the prior derivatives")
{
    SECTION("flat prior gives all-ones maps")
    {
        Image prior({12, 12, 1});
        for (auto& v : prior.data) v = 1.5;
        const auto maps = compute_agtv_maps(prior, 0.1);
        for (int a = 0; a < 3; ++a)
            for (double m : maps[a]) CHECK(m == 1.0);
    }
    SECTION("omega = 1 saturates the floor")
    {
        Image prior({12, 12, 1});
        for (int y = 0; y < 12; ++y)
            for (int x = 0; x < 12; ++x) prior.at(x, y) = double(x * y);
        const auto maps = compute_agtv_maps(prior, 1.0);
        for (int a = 0; a < 3; ++a)
            for (double m : maps[a]) CHECK(m == 1.0);
    }
    SECTION("edges floor at omega, flats stay 1, axes separate")
    {
        Image prior({16, 16, 1});
        for (int y = 0; y < 16; ++y)
            for (int x = 0; x < 16; ++x) prior.at(x, y) = x >= 8 ? 1.0 : 0.0; // x-edge only
        const double omega = 0.2;
        const auto maps = compute_agtv_maps(prior, omega);

        for (int y = 0; y < 16; ++y) {
            CHECK(maps[0][prior.index(7, y)] == Catch::Approx(omega).margin(1e-12));
            CHECK(maps[0][prior.index(2, y)] == 1.0);
        }
        for (double m : maps[1]) CHECK(m == 1.0); // no y variation
        for (double m : maps[2]) CHECK(m == 1.0); // 2D grid
        for (int a = 0; a < 3; ++a)
            for (double m : maps[a]) {
                CHECK(m >= omega);
                CHECK(m <= 1.0);
            }
    }
    SECTION("omega outside [0,1] rejected")
    {
        Image prior({8, 8, 1});
        CHECK_THROWS_AS(compute_agtv_maps(prior, -0.1), std::invalid_argument);
        CHECK_THROWS_AS(compute_agtv_maps(prior, 1.1), std::invalid_argument);
    }
}

TEST_CASE("tv_prox with weights respects prior edges")
{
    // denoise a noisy step with a perfectly aligned prior: wTV should keep the
    // step sharper (larger jump) than plain TV at equal alpha
    const GridDims d{32, 1, 1};
    Rng rng(derive_seed(33, "edge-keep"));
    std::vector<double> clean(32), noisy(32);
    for (int x = 0; x < 32; ++x) {
        clean[x] = x >= 16 ? 1.0 : 0.0;
        noisy[x] = clean[x] + 0.08 * rng.gaussian();
    }
    Image prior(d);
    prior.data = clean;
    const auto wmap = compute_wtv_weights(prior, 0.01);

    const auto plain = tv_prox(d, noisy, 0.3, TvWeighting::plain(), 200);
    const auto guided = tv_prox(d, noisy, 0.3, TvWeighting::weighted(wmap), 200);

    const double jump_plain = plain[17] - plain[14];
    const double jump_guided = guided[17] - guided[14];
    CHECK(jump_guided > jump_plain);
    CHECK(jump_guided > 0.8);
}
