// Digital breast phantom: labelled compartments on a grid, synthetic 1H-like
// prior images (with deliberate mismatch modes), and region masks.
//
// Geometry is specified in fractions of the field of view, so the same
// phantom can be rendered at any resolution (sodium grid, high-res prior,
// oracle grids) with sub-voxel-consistent boundaries. The glandular texture
// is a continuous seeded value-noise field evaluated in physical
// coordinates for the same reason.

#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "namri/core.hpp"
#include "namri/image_ops.hpp"
#include "namri/rng.hpp"

namespace namri {

struct GeometryConflict : std::runtime_error {
    explicit GeometryConflict(const std::string& what) : std::runtime_error(what) {}
};

enum : std::uint8_t {
    kLabelBackground = 0,
    kLabelAdipose = 1,
    kLabelGlandular = 2,
    kLabelTumor = 3,
    kLabelVial77 = 4,
    kLabelVial154 = 5,
    kLabelSkin = 6,
};

struct Compartment {
    int label = 0;
    std::string name;
    double concentration = 0.0;  // mmol/L
    double water_fraction = 0.0; // [0,1]
};

inline std::vector<Compartment> default_compartments(double tumor_concentration = 80.0)
{
    return {
        {kLabelBackground, "background", 0.0, 0.0},
        {kLabelAdipose, "adipose", 20.0, 0.75},
        {kLabelGlandular, "glandular", 40.0, 0.75},
        {kLabelTumor, "tumor", tumor_concentration, 0.75},
        {kLabelVial77, "vial77", 77.0, 1.0},
        {kLabelVial154, "vial154", 154.0, 1.0},
        {kLabelSkin, "skin", 30.0, 0.75},
    };
}

// All lengths are fractions of the FOV (centres per axis, radii of the
// minimum FOV extent), so a geometry renders consistently at any grid size.
struct PhantomGeometry {
    std::array<double, 3> breast_center{0.38, 0.50, 0.50};
    double breast_radius = 0.30;
    double skin_thickness = 0.012;
    double glandular_scale = 0.05;    // texture correlation length
    double glandular_fraction = 0.45; // fill fraction of the breast interior
    std::array<double, 3> tumor_center{0.44, 0.40, 0.50};
    double tumor_radius = 0.055; // 0 disables the tumor
    std::array<double, 3> vial77_center{0.84, 0.26, 0.50};
    std::array<double, 3> vial154_center{0.84, 0.74, 0.50};
    double vial_radius = 0.055;
    double tumor_concentration = 80.0;
    bool skin_enabled = true;
};

namespace detail {

// Smooth seeded value noise: uniform values on an integer lattice, quintic
// interpolation between them. Pure function of (seed, position).
class ValueNoise {
public:
    ValueNoise(std::uint64_t seed, double cell_size, bool three_d)
        : seed_(seed), cell_(cell_size), three_d_(three_d)
    {
        require(cell_size > 0.0, "ValueNoise: cell size must be > 0");
    }

    double operator()(double x, double y, double z) const
    {
        const double fx = x / cell_, fy = y / cell_, fz = three_d_ ? z / cell_ : 0.0;
        const long ix = lfloor(fx), iy = lfloor(fy), iz = lfloor(fz);
        const double tx = fade(fx - ix), ty = fade(fy - iy), tz = fade(fz - iz);

        auto corner = [&](long dx, long dy, long dz) {
            return lattice(ix + dx, iy + dy, three_d_ ? iz + dz : 0);
        };
        const double c00 = corner(0, 0, 0) * (1 - tx) + corner(1, 0, 0) * tx;
        const double c10 = corner(0, 1, 0) * (1 - tx) + corner(1, 1, 0) * tx;
        double v0 = c00 * (1 - ty) + c10 * ty;
        if (!three_d_) return v0;
        const double c01 = corner(0, 0, 1) * (1 - tx) + corner(1, 0, 1) * tx;
        const double c11 = corner(0, 1, 1) * (1 - tx) + corner(1, 1, 1) * tx;
        const double v1 = c01 * (1 - ty) + c11 * ty;
        return v0 * (1 - tz) + v1 * tz;
    }

private:
    static long lfloor(double v) { return long(std::floor(v)); }
    static double fade(double t) { return t * t * t * (t * (t * 6 - 15) + 10); }

    double lattice(long i, long j, long k) const
    {
        std::uint64_t h = seed_;
        h ^= std::uint64_t(i) * 0x9E3779B97F4A7C15ull;
        h = splitmix64(h);
        h ^= std::uint64_t(j) * 0xC2B2AE3D27D4EB4Full;
        h = splitmix64(h);
        h ^= std::uint64_t(k) * 0x165667B19E3779F9ull;
        h = splitmix64(h);
        return double(h >> 11) * (2.0 / 9007199254740992.0) - 1.0; // [-1, 1)
    }

    std::uint64_t seed_;
    double cell_;
    bool three_d_;
};

} // namespace detail

struct DigitalPhantom {
    LabelVolume labels;
    std::vector<Compartment> compartments;
    PhantomGeometry geometry;
    std::uint64_t seed = 0;

    const Compartment& compartment(int label) const
    {
        for (const auto& c : compartments)
            if (c.label == label) return c;
        throw std::runtime_error("phantom: unknown label " + std::to_string(label));
    }

    const Compartment* find(const std::string& name) const
    {
        for (const auto& c : compartments)
            if (c.name == name) return &c;
        return nullptr;
    }
};

struct RegionMask {
    MaskVolume voxels;
    std::string region_name;

    std::size_t count() const
    {
        std::size_t n = 0;
        for (auto v : voxels.data) n += v ? 1 : 0;
        return n;
    }
};

enum class PriorMismatch { None, Shift, ExtraEdge, DeleteTumor };

struct MismatchSpec {
    PriorMismatch mode = PriorMismatch::None;
    std::array<double, 3> shift_mm{0.0, 0.0, 0.0};
    std::string describe() const
    {
        switch (mode) {
        case PriorMismatch::None: return "none";
        case PriorMismatch::Shift:
            return "shift " + std::to_string(shift_mm[0]) + "," + std::to_string(shift_mm[1]) +
                   "," + std::to_string(shift_mm[2]) + " mm";
        case PriorMismatch::ExtraEdge: return "extra-edge";
        case PriorMismatch::DeleteTumor: return "delete-tumor";
        }
        return "?";
    }
};

struct PriorImage {
    Image values; // nonnegative, prior resolution
    MismatchSpec mismatch;
};

namespace detail {

// Everything needed to evaluate "which compartment is at physical point p".
struct GeometryEval {
    PhantomGeometry geo;
    std::array<double, 3> fov{0, 0, 0}; // mm, per axis (0 on inactive axes)
    double min_fov = 0.0;
    bool three_d = false;
    ValueNoise noise;
    double gland_threshold = 0.0;

    static double min_fov_of(const GridDims& dims, const VoxelSize& voxel)
    {
        double m = std::min(dims.nx * voxel.x, dims.ny * voxel.y);
        if (dims.nz > 1) m = std::min(m, dims.nz * voxel.z);
        return m;
    }

    GeometryEval(const PhantomGeometry& g, const GridDims& dims, const VoxelSize& voxel,
                 std::uint64_t seed)
        : geo(g),
          three_d(dims.nz > 1),
          noise(derive_seed(seed, "glandular-texture"),
                g.glandular_scale * min_fov_of(dims, voxel), dims.nz > 1)
    {
        fov = {dims.nx * voxel.x, dims.ny * voxel.y, three_d ? dims.nz * voxel.z : 0.0};
        min_fov = min_fov_of(dims, voxel);
        gland_threshold = compute_threshold();
    }

    // centred physical coordinates of a fractional FOV point
    std::array<double, 3> frac_to_mm(const std::array<double, 3>& f) const
    {
        return {(f[0] - 0.5) * fov[0], (f[1] - 0.5) * fov[1],
                three_d ? (f[2] - 0.5) * fov[2] : 0.0};
    }

    double dist(const std::array<double, 3>& a, const std::array<double, 3>& b) const
    {
        const double dx = a[0] - b[0], dy = a[1] - b[1];
        const double dz = three_d ? a[2] - b[2] : 0.0;
        return std::sqrt(dx * dx + dy * dy + dz * dz);
    }

    double breast_radius_mm() const { return geo.breast_radius * min_fov; }
    double skin_mm() const { return geo.skin_enabled ? geo.skin_thickness * min_fov : 0.0; }
    double tumor_radius_mm() const { return geo.tumor_radius * min_fov; }
    double vial_radius_mm() const { return geo.vial_radius * min_fov; }

    std::uint8_t label_at(const std::array<double, 3>& p) const
    {
        const auto bc = frac_to_mm(geo.breast_center);
        if (geo.tumor_radius > 0.0 &&
            dist(p, frac_to_mm(geo.tumor_center)) <= tumor_radius_mm())
            return kLabelTumor;
        if (dist(p, frac_to_mm(geo.vial77_center)) <= vial_radius_mm()) return kLabelVial77;
        if (dist(p, frac_to_mm(geo.vial154_center)) <= vial_radius_mm()) return kLabelVial154;
        const double db = dist(p, bc);
        if (db <= breast_radius_mm()) {
            if (db > breast_radius_mm() - skin_mm()) return kLabelSkin;
            return noise(p[0], p[1], p[2]) > gland_threshold ? kLabelGlandular : kLabelAdipose;
        }
        return kLabelBackground;
    }

    void validate() const
    {
        const auto bc = frac_to_mm(geo.breast_center);
        const auto v1 = frac_to_mm(geo.vial77_center);
        const auto v2 = frac_to_mm(geo.vial154_center);
        const double br = breast_radius_mm(), vr = vial_radius_mm(), tr = tumor_radius_mm();

        if (dist(v1, v2) < 2 * vr)
            throw GeometryConflict("geometry conflict: calibration vials overlap");
        if (dist(v1, bc) < vr + br || dist(v2, bc) < vr + br)
            throw GeometryConflict("geometry conflict: vial overlaps breast outline");
        if (geo.tumor_radius > 0.0) {
            const auto tc = frac_to_mm(geo.tumor_center);
            if (dist(tc, bc) + tr > br - skin_mm())
                throw GeometryConflict("geometry conflict: tumor extends outside breast interior");
            if (dist(tc, v1) < tr + vr || dist(tc, v2) < tr + vr)
                throw GeometryConflict("geometry conflict: tumor overlaps a vial");
        }
        auto inside_fov = [&](const std::array<double, 3>& c, double r) {
            for (int a = 0; a < (three_d ? 3 : 2); ++a)
                if (std::fabs(c[a]) + r > 0.5 * fov[a]) return false;
            return true;
        };
        if (!inside_fov(v1, vr) || !inside_fov(v2, vr))
            throw GeometryConflict("geometry conflict: vial outside field of view");
        if (!inside_fov(bc, br))
            throw GeometryConflict("geometry conflict: breast outline outside field of view");
    }

private:
    // Quantile of the noise over the breast interior, sampled on a fixed
    // lattice so the threshold is independent of the output grid.
    double compute_threshold() const
    {
        const auto bc = frac_to_mm(geo.breast_center);
        const double br = breast_radius_mm();
        const int n = 48;
        const int nzp = three_d ? n : 1;
        std::vector<double> vals;
        vals.reserve(std::size_t(n) * n * nzp);
        for (int k = 0; k < nzp; ++k)
            for (int j = 0; j < n; ++j)
                for (int i = 0; i < n; ++i) {
                    std::array<double, 3> p{bc[0] + br * (2.0 * (i + 0.5) / n - 1.0),
                                            bc[1] + br * (2.0 * (j + 0.5) / n - 1.0),
                                            three_d
                                                ? bc[2] + br * (2.0 * (k + 0.5) / n - 1.0)
                                                : 0.0};
                    if (dist(p, bc) > br) continue;
                    vals.push_back(noise(p[0], p[1], p[2]));
                }
        if (vals.empty()) return 0.0;
        const double fill = std::clamp(geo.glandular_fraction, 0.0, 1.0);
        return quantile(vals, 1.0 - fill);
    }
};

} // namespace detail

inline DigitalPhantom build_breast_phantom(const GridDims& dims, const VoxelSize& voxel,
                                           const PhantomGeometry& geometry, std::uint64_t seed)
{
    require(dims.nx >= 16 && dims.ny >= 16, "build_breast_phantom: dims must be >= 16 per axis");
    require(dims.nz == 1 || dims.nz >= 16,
            "build_breast_phantom: 3D phantoms need nz >= 16 (nz == 1 for 2D)");
    require(voxel.x > 0 && voxel.y > 0 && voxel.z > 0,
            "build_breast_phantom: voxel size must be > 0");

    detail::GeometryEval eval(geometry, dims, voxel, seed);
    eval.validate();

    DigitalPhantom ph;
    ph.labels = LabelVolume(dims, voxel, "label");
    ph.compartments = default_compartments(geometry.tumor_concentration);
    ph.geometry = geometry;
    ph.seed = seed;

    std::size_t idx = 0;
    for (int z = 0; z < dims.nz; ++z)
        for (int y = 0; y < dims.ny; ++y)
            for (int x = 0; x < dims.nx; ++x, ++idx)
                ph.labels.data[idx] = eval.label_at(ph.labels.position(x, y, z));
    return ph;
}

inline Image map_compartment_field(const DigitalPhantom& ph, double Compartment::*field,
                                   const std::string& units)
{
    std::array<double, 256> lut{};
    for (const auto& c : ph.compartments) lut[std::size_t(c.label)] = c.*field;
    Image out(ph.labels.dims, ph.labels.voxel, units);
    for (std::size_t i = 0; i < out.data.size(); ++i) out.data[i] = lut[ph.labels.data[i]];
    return out;
}

inline Image concentration_map(const DigitalPhantom& ph)
{
    return map_compartment_field(ph, &Compartment::concentration, "mmol/L");
}

inline Image water_fraction_map(const DigitalPhantom& ph)
{
    return map_compartment_field(ph, &Compartment::water_fraction, "fraction");
}

// Simulated sodium signal: concentration x water fraction (a.u.).
inline Image signal_map(const DigitalPhantom& ph)
{
    Image conc = concentration_map(ph);
    Image wf = water_fraction_map(ph);
    Image out(conc.dims, conc.voxel, "a.u.");
    for (std::size_t i = 0; i < out.data.size(); ++i) out.data[i] = conc.data[i] * wf.data[i];
    return out;
}

// Synthetic 1H-like prior: per-compartment brightness rendered directly from
// the stored geometry at prior resolution, lightly smoothed. Mismatch modes
// are applied in continuous coordinates (shift) or geometry space (tumor
// deletion, extra edge).
inline PriorImage render_prior(const DigitalPhantom& ph, const GridDims& prior_dims,
                               const MismatchSpec& mismatch = {})
{
    const GridDims& pd = ph.labels.dims;
    require(prior_dims.nx >= pd.nx && prior_dims.ny >= pd.ny &&
                (pd.nz == 1 ? prior_dims.nz == 1 : prior_dims.nz >= pd.nz),
            "render_prior: prior dims must be >= phantom dims (same dimensionality)");

    VoxelSize pv{ph.labels.voxel.x * pd.nx / prior_dims.nx,
                 ph.labels.voxel.y * pd.ny / prior_dims.ny,
                 pd.nz == 1 ? ph.labels.voxel.z : ph.labels.voxel.z * pd.nz / prior_dims.nz};

    PhantomGeometry geo = ph.geometry;
    if (mismatch.mode == PriorMismatch::DeleteTumor) geo.tumor_radius = 0.0;

    detail::GeometryEval eval(geo, pd, ph.labels.voxel, ph.seed);

    std::array<double, 3> shift{0, 0, 0};
    if (mismatch.mode == PriorMismatch::Shift) {
        shift = mismatch.shift_mm;
        const double fovx = pd.nx * ph.labels.voxel.x, fovy = pd.ny * ph.labels.voxel.y;
        const double fovz = pd.nz * ph.labels.voxel.z;
        require(std::fabs(shift[0]) <= fovx && std::fabs(shift[1]) <= fovy &&
                    std::fabs(shift[2]) <= fovz,
                "render_prior: mismatch shift exceeds field of view");
    }

    // 1H-like brightness: adipose bright, glandular mid, tumor mid-low, vials low
    std::array<double, 256> bright{};
    bright[kLabelBackground] = 0.02;
    bright[kLabelAdipose] = 1.00;
    bright[kLabelGlandular] = 0.55;
    bright[kLabelTumor] = 0.40;
    bright[kLabelVial77] = 0.12;
    bright[kLabelVial154] = 0.12;
    bright[kLabelSkin] = 0.75;

    PriorImage prior;
    prior.mismatch = mismatch;
    prior.values = Image(prior_dims, pv, "a.u.");

    // extra-edge mode: a synthetic bright ring inside the breast
    const auto bc = eval.frac_to_mm(geo.breast_center);
    const double ring_r = 0.55 * eval.breast_radius_mm();
    const double ring_w = std::max(pv.x, pv.y);

    std::size_t idx = 0;
    for (int z = 0; z < prior_dims.nz; ++z)
        for (int y = 0; y < prior_dims.ny; ++y)
            for (int x = 0; x < prior_dims.nx; ++x, ++idx) {
                auto p = prior.values.position(x, y, z);
                p[0] -= shift[0];
                p[1] -= shift[1];
                p[2] -= shift[2];
                double v = bright[eval.label_at(p)];
                if (mismatch.mode == PriorMismatch::ExtraEdge &&
                    std::fabs(eval.dist(p, bc) - ring_r) <= ring_w)
                    v += 0.4;
                prior.values.data[idx] = v;
            }

    prior.values = gaussian_smooth(prior.values, 0.6);
    return prior;
}

inline RegionMask make_mask(const DigitalPhantom& ph, const std::string& region_name,
                            const GridDims& target_dims, int erosion_voxels)
{
    const Compartment* comp = ph.find(region_name);
    require(comp != nullptr, "make_mask: unknown region '" + region_name + "'");
    require(erosion_voxels >= 0, "make_mask: erosion must be >= 0");

    MaskVolume src(ph.labels.dims, ph.labels.voxel, "mask");
    for (std::size_t i = 0; i < src.data.size(); ++i)
        src.data[i] = (ph.labels.data[i] == comp->label) ? 1 : 0;

    RegionMask mask;
    mask.region_name = region_name;
    mask.voxels = resample_mask_majority(src, target_dims);
    if (erosion_voxels > 0) mask.voxels = erode_mask(mask.voxels, erosion_voxels);
    if (mask.count() == 0)
        throw std::runtime_error("make_mask: region '" + region_name +
                                 "' is empty after resampling/erosion");
    return mask;
}

// Air region for the AG-TV background penalty: background label shrunk away
// from the object so it stays disjoint from the breast/vial support.
inline MaskVolume make_background_mask(const DigitalPhantom& ph, const GridDims& target_dims,
                                       int margin_voxels = 2)
{
    MaskVolume src(ph.labels.dims, ph.labels.voxel, "mask");
    for (std::size_t i = 0; i < src.data.size(); ++i)
        src.data[i] = (ph.labels.data[i] == kLabelBackground) ? 1 : 0;
    MaskVolume bm = resample_mask_majority(src, target_dims);
    if (margin_voxels > 0) bm = erode_mask(bm, margin_voxels);
    return bm;
}

} // namespace namri
