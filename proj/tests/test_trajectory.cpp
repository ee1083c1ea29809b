#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "namri/trajectory.hpp"

using namespace namri;

namespace {

constexpr double kPi = 3.14159265358979323846;

// Independent shell-measure oracle: numerically integrate the mirrored shell
// volume between the Voronoi midpoints of neighbouring sample radii.
double shell_measure_numeric(const std::vector<double>& radii, int i, int ndim)
{
    const int m = int(radii.size());
    const double lo = (i == 0) ? 0.0 : 0.5 * (radii[i - 1] + radii[i]);
    const double hi = (i == m - 1) ? radii[m - 1] + 0.5 * (radii[m - 1] - radii[m - 2])
                                   : 0.5 * (radii[i] + radii[i + 1]);
    const int steps = 20000;
    const double h = (hi - lo) / steps;
    double s = 0.0;
    for (int j = 0; j <= steps; ++j) {
        const double r = lo + j * h;
        const double surf = (ndim == 2) ? 2.0 * kPi * r : 4.0 * kPi * r * r;
        const double w = (j == 0 || j == steps) ? 0.5 : 1.0;
        s += w * surf;
    }
    return s * h;
}

} // namespace

TEST_CASE("uniform 2D spokes partition the half-plane")
{
    const auto traj = make_radial_trajectory(4, 16, {64, 64, 1});
    REQUIRE(traj.ndim == 2);
    REQUIRE(traj.n_spokes == 4);
    REQUIRE(traj.directions.size() == 4);
    for (int j = 0; j < 4; ++j) {
        const double theta = kPi * j / 4.0;
        CHECK(traj.directions[j][0] == Catch::Approx(std::cos(theta)).margin(1e-15));
        CHECK(traj.directions[j][1] == Catch::Approx(std::sin(theta)).margin(1e-15));
        CHECK(traj.directions[j][2] == 0.0);
    }
}

TEST_CASE("radii are nondecreasing and span [0, 0.5]")
{
    for (TrajMode mode : {TrajMode::UniformRadial, TrajMode::DensityAdapted}) {
        for (GridDims dims : {GridDims{64, 64, 1}, GridDims{32, 32, 32}}) {
            const auto traj = make_radial_trajectory(12, 48, dims, mode);
            REQUIRE(traj.radii.size() == 48);
            CHECK(traj.radii.front() == 0.0);
            CHECK(traj.radii.back() == 0.5);
            for (std::size_t i = 1; i < traj.radii.size(); ++i)
                CHECK(traj.radii[i] > traj.radii[i - 1]);
        }
    }
}

TEST_CASE("spoke directions are unit vectors")
{
    for (GridDims dims : {GridDims{64, 64, 1}, GridDims{24, 24, 24}}) {
        const auto traj = make_radial_trajectory(33, 16, dims, TrajMode::DensityAdapted);
        for (const auto& d : traj.directions) {
            const double n = std::sqrt(d[0] * d[0] + d[1] * d[1] + d[2] * d[2]);
            CHECK(std::abs(n - 1.0) <= 1e-12);
        }
    }
}

TEST_CASE("3D spokes cover the half-sphere without duplicates")
{
    const auto traj = make_radial_trajectory(64, 16, {24, 24, 24});
    for (const auto& d : traj.directions) CHECK(d[2] > 0.0);
    for (int a = 0; a < traj.n_spokes; ++a)
        for (int b = a + 1; b < traj.n_spokes; ++b) {
            const auto& da = traj.directions[a];
            const auto& db = traj.directions[b];
            const double dot = da[0] * db[0] + da[1] * db[1] + da[2] * db[2];
            CHECK(dot < 1.0 - 1e-6);
        }
}

TEST_CASE("density-adapted 3D shells enclose equal volume beyond k0")
{
    const double k0_fraction = 0.2;
    const auto traj =
        make_radial_trajectory(8, 64, {32, 32, 32}, TrajMode::DensityAdapted, k0_fraction);
    const double k0 = k0_fraction * kMaxRadius;

    std::vector<double> diffs;
    for (std::size_t i = 1; i < traj.radii.size(); ++i) {
        if (traj.radii[i - 1] >= k0 * (1.0 - 1e-9)) {
            const double lo3 = std::pow(traj.radii[i - 1], 3);
            const double hi3 = std::pow(traj.radii[i], 3);
            diffs.push_back(hi3 - lo3);
        }
    }
    REQUIRE(diffs.size() >= 10);
    const double c = diffs[diffs.size() / 2];
    for (double d : diffs) CHECK(std::abs(d - c) <= 1e-10 * c);
}

TEST_CASE("density-adapted 2D shells enclose equal area beyond k0")
{
    const auto traj = make_radial_trajectory(8, 64, {64, 64, 1}, TrajMode::DensityAdapted, 0.25);
    const double k0 = 0.25 * kMaxRadius;

    std::vector<double> diffs;
    for (std::size_t i = 1; i < traj.radii.size(); ++i)
        if (traj.radii[i - 1] >= k0 * (1.0 - 1e-9))
            diffs.push_back(traj.radii[i] * traj.radii[i] - traj.radii[i - 1] * traj.radii[i - 1]);
    REQUIRE(diffs.size() >= 10);
    const double c = diffs[diffs.size() / 2];
    for (double d : diffs) CHECK(std::abs(d - c) <= 1e-10 * c);
}

TEST_CASE("weights match the shell-measure oracle")
{
    struct Case {
        GridDims dims;
        TrajMode mode;
    };
    for (const Case& tc : {Case{{64, 64, 1}, TrajMode::UniformRadial},
                           Case{{64, 64, 1}, TrajMode::DensityAdapted},
                           Case{{24, 24, 24}, TrajMode::UniformRadial},
                           Case{{24, 24, 24}, TrajMode::DensityAdapted}}) {
        const int n_spokes = 10;
        const auto traj = make_radial_trajectory(n_spokes, 40, tc.dims, tc.mode);
        for (int i = 0; i < traj.samples_per_spoke; ++i) {
            const double oracle = shell_measure_numeric(traj.radii, i, traj.ndim) / n_spokes;
            // weight * local density should be constant; equivalently weight
            // approximates the per-spoke share of the local shell measure.
            CHECK(traj.weights[i] == Catch::Approx(oracle).epsilon(0.01));
        }
    }
}

TEST_CASE("weights are positive for nonzero radii")
{
    const auto traj = make_radial_trajectory(4, 32, {64, 64, 1}, TrajMode::DensityAdapted);
    for (int i = 0; i < traj.samples_per_spoke; ++i)
        if (traj.radii[i] > 0.0) CHECK(traj.weights[i] > 0.0);
}

TEST_CASE("invalid arguments are rejected")
{
    CHECK_THROWS_AS(make_radial_trajectory(4, 16, {64, 64, 1}, TrajMode::DensityAdapted, 0.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(make_radial_trajectory(4, 16, {64, 64, 1}, TrajMode::DensityAdapted, 0.6),
                    std::invalid_argument);
    CHECK_THROWS_AS(make_radial_trajectory(4, 16, {64, 64, 1}, TrajMode::DensityAdapted, -0.1),
                    std::invalid_argument);
    CHECK_THROWS_AS(make_radial_trajectory(0, 16, {64, 64, 1}), std::invalid_argument);
    CHECK_THROWS_AS(make_radial_trajectory(4, 4, {64, 64, 1}), std::invalid_argument);
}
