// Tissue sodium concentration: two-point linear calibration through the
// reference vials, with the water-content correction for tissue regions
// (apparent concentration divided by the tissue water fraction, so the
// simulator's signal = concentration x water_fraction model inverts exactly).

#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "namri/core.hpp"
#include "namri/phantom.hpp"

namespace namri {

struct CalibrationCurve {
    double slope = 0.0;     // (a.u.) per (mmol/L)
    double intercept = 0.0; // a.u.
    std::array<double, 2> vial_concentrations{0, 0};
    std::array<double, 2> vial_means{0, 0};

    double to_concentration(double signal) const { return (signal - intercept) / slope; }
    double to_signal(double conc) const { return slope * conc + intercept; }
};

struct TscResult {
    std::string region_name;
    double mean = 0.0; // mmol/L
    double sd = 0.0;   // mmol/L, population SD over the region
    std::size_t n_voxels = 0;
    bool water_corrected = false;
};

struct RegionStats {
    double mean = 0.0;
    double sd = 0.0; // population SD
    double min = 0.0;
    double max = 0.0;
    std::size_t n = 0;
};

inline RegionStats region_stats(const Image& img, const RegionMask& mask)
{
    require_same_dims(img.dims, mask.voxels.dims, "region_stats");
    RegionStats st;
    double sum = 0.0;
    st.min = std::numeric_limits<double>::infinity();
    st.max = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < img.data.size(); ++i) {
        if (!mask.voxels.data[i]) continue;
        const double v = img.data[i];
        sum += v;
        st.min = std::min(st.min, v);
        st.max = std::max(st.max, v);
        ++st.n;
    }
    require(st.n > 0, "region_stats: empty mask");
    st.mean = sum / double(st.n);
    double ss = 0.0; // second pass: stable for near-constant regions
    for (std::size_t i = 0; i < img.data.size(); ++i)
        if (mask.voxels.data[i]) {
            const double d = img.data[i] - st.mean;
            ss += d * d;
        }
    st.sd = std::sqrt(ss / double(st.n));
    return st;
}

inline CalibrationCurve fit_calibration(const std::array<double, 2>& vial_means,
                                        const std::array<double, 2>& vial_conc)
{
    require(std::isfinite(vial_means[0]) && std::isfinite(vial_means[1]),
            "fit_calibration: vial means must be finite");
    if (vial_conc[0] == vial_conc[1])
        throw std::invalid_argument("fit_calibration: degenerate fit (equal concentrations)");
    if (vial_means[0] == vial_means[1])
        throw std::invalid_argument(
            "fit_calibration: degenerate fit (equal means at distinct concentrations)");

    CalibrationCurve curve;
    curve.vial_concentrations = vial_conc;
    curve.vial_means = vial_means;
    curve.slope = (vial_means[1] - vial_means[0]) / (vial_conc[1] - vial_conc[0]);
    curve.intercept = vial_means[0] - curve.slope * vial_conc[0];
    return curve;
}

// Calibrate directly from an image: vial means over the two masks.
inline CalibrationCurve fit_calibration(const Image& img, const RegionMask& vial_lo,
                                        const RegionMask& vial_hi,
                                        const std::array<double, 2>& vial_conc = {77.0, 154.0})
{
    const double m0 = region_stats(img, vial_lo).mean;
    const double m1 = region_stats(img, vial_hi).mean;
    return fit_calibration({m0, m1}, vial_conc);
}

inline TscResult quantify_tsc(const Image& img, const RegionMask& mask,
                              const CalibrationCurve& curve, bool is_tissue,
                              double water_fraction = 0.75)
{
    require_same_dims(img.dims, mask.voxels.dims, "quantify_tsc");
    require(curve.slope != 0.0, "quantify_tsc: invalid calibration curve");
    require(water_fraction > 0.0 && water_fraction <= 1.0,
            "quantify_tsc: water fraction must be in (0,1]");

    std::vector<double> conc;
    for (std::size_t i = 0; i < img.data.size(); ++i) {
        if (!mask.voxels.data[i]) continue;
        double c = curve.to_concentration(img.data[i]);
        if (is_tissue) c /= water_fraction;
        conc.push_back(c);
    }
    require(!conc.empty(), "quantify_tsc: empty mask");

    TscResult res;
    res.region_name = mask.region_name;
    res.n_voxels = conc.size();
    res.water_corrected = is_tissue;
    double sum = 0.0;
    for (double c : conc) sum += c;
    res.mean = sum / double(conc.size());
    double ss = 0.0;
    for (double c : conc) {
        const double d = c - res.mean;
        ss += d * d;
    }
    res.sd = std::sqrt(ss / double(conc.size()));
    return res;
}

} // namespace namri
