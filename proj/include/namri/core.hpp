// Core grid/volume containers shared by every module.
//
// Volumes are dense scalar grids (2D slices are nz == 1) stored x-fastest:
// index = x + nx*(y + ny*z). Physical coordinates are measured from the grid
// centre voxel floor(n/2), so a "centered" impulse sits at integer index
// (nx/2, ny/2, nz/2).

#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace namri {

using cdouble = std::complex<double>;

struct GridDims {
    int nx = 0;
    int ny = 0;
    int nz = 1;

    std::size_t total() const { return std::size_t(nx) * ny * nz; }
    bool is_2d() const { return nz == 1; }
    int ndim() const { return is_2d() ? 2 : 3; }
    int operator[](int axis) const { return axis == 0 ? nx : (axis == 1 ? ny : nz); }

    // x-fastest linear index; callers must pass in-range coordinates.
    std::size_t index(int x, int y, int z) const
    {
        return std::size_t(x) + std::size_t(nx) * (std::size_t(y) + std::size_t(ny) * z);
    }

    bool operator==(const GridDims& o) const { return nx == o.nx && ny == o.ny && nz == o.nz; }
    bool operator!=(const GridDims& o) const { return !(*this == o); }

    std::string str() const
    {
        return std::to_string(nx) + "x" + std::to_string(ny) + "x" + std::to_string(nz);
    }
};

struct VoxelSize {
    double x = 1.0;
    double y = 1.0;
    double z = 1.0;

    double operator[](int axis) const { return axis == 0 ? x : (axis == 1 ? y : z); }
    bool operator==(const VoxelSize& o) const { return x == o.x && y == o.y && z == o.z; }
};

template <typename T>
struct Volume {
    GridDims dims;
    VoxelSize voxel;
    std::string units = "a.u.";
    std::vector<T> data;

    Volume() = default;
    explicit Volume(GridDims d, VoxelSize vs = {}, std::string units_label = "a.u.")
        : dims(d), voxel(vs), units(std::move(units_label)), data(d.total(), T{})
    {
    }

    std::size_t index(int x, int y, int z = 0) const
    {
        return std::size_t(x) + std::size_t(dims.nx) * (std::size_t(y) + std::size_t(dims.ny) * z);
    }
    T& at(int x, int y, int z = 0) { return data[index(x, y, z)]; }
    const T& at(int x, int y, int z = 0) const { return data[index(x, y, z)]; }

    std::size_t size() const { return data.size(); }

    // Physical position (mm) of a voxel centre relative to the grid centre voxel.
    std::array<double, 3> position(int x, int y, int z = 0) const
    {
        return {(x - dims.nx / 2) * voxel.x, (y - dims.ny / 2) * voxel.y,
                (z - dims.nz / 2) * voxel.z};
    }
};

using Image = Volume<double>;
using CImage = Volume<cdouble>;
using LabelVolume = Volume<std::uint8_t>;
using MaskVolume = Volume<std::uint8_t>;

inline void require(bool cond, const std::string& what)
{
    if (!cond) throw std::invalid_argument(what);
}

inline void require_same_dims(const GridDims& a, const GridDims& b, const char* where)
{
    if (a != b)
        throw std::invalid_argument(std::string(where) + ": dimension mismatch " + a.str() +
                                    " vs " + b.str());
}

template <typename T>
double min_value(const Volume<T>& v)
{
    double m = v.data.empty() ? 0.0 : double(v.data[0]);
    for (const T& x : v.data) m = std::min(m, double(x));
    return m;
}

template <typename T>
double max_value(const Volume<T>& v)
{
    double m = v.data.empty() ? 0.0 : double(v.data[0]);
    for (const T& x : v.data) m = std::max(m, double(x));
    return m;
}

inline double norm2(const std::vector<double>& v)
{
    double s = 0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

inline double norm2(const std::vector<cdouble>& v)
{
    double s = 0;
    for (const cdouble& x : v) s += std::norm(x);
    return std::sqrt(s);
}

inline double dot(const std::vector<double>& a, const std::vector<double>& b)
{
    double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline cdouble cdot(const std::vector<cdouble>& a, const std::vector<cdouble>& b)
{
    cdouble s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
    return s;
}

// Root-mean-square error between two equally sized value arrays.
inline double rms_diff(const std::vector<double>& a, const std::vector<double>& b)
{
    double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return std::sqrt(s / double(a.size()));
}

} // namespace namri
