// Versioned JSON pipeline configuration. Parsing is fail-closed: unknown
// keys anywhere in the document are rejected so experiment configs cannot
// silently drift.

#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "namri/core.hpp"
#include "namri/phantom.hpp"
#include "namri/recon.hpp"
#include "namri/trajectory.hpp"

namespace namri {

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

inline constexpr int kConfigVersion = 1;

struct AcquisitionConfig {
    std::vector<int> spokes{8, 16, 32, 64};
    int samples_per_spoke = 64;
    TrajMode mode = TrajMode::UniformRadial;
    double k0_fraction = 0.2;
    int n_coils = 4;
    double sigma = 0.02;
};

struct PriorConfig {
    GridDims dims{192, 192, 1};
    MismatchSpec mismatch;
};

struct ReconSweepConfig {
    GridDims dims{64, 64, 1};
    VoxelSize voxel{3.0, 3.0, 3.0};
    std::vector<ReconMethod> methods{ReconMethod::ADC, ReconMethod::WTV, ReconMethod::DTV,
                                     ReconMethod::AGTV};
    // Regularization weight against the unnormalized data term; the solver
    // rescales it internally along with the operator norm.
    std::map<ReconMethod, double> alpha{
        {ReconMethod::TV, 700.0}, {ReconMethod::WTV, 700.0}, {ReconMethod::DTV, 700.0}};
    int max_outer_iters = 60;
    int fgp_inner_iters = 20;
    double admm_rho = 1.0;
    double tol = 1e-5;
    double gamma = 0.95;
    double eta = 0.0; // 0 -> automatic from prior gradients
    double lambda_xyz = 1.0;
    double lambda_bm = 1000.0;
    double omega = 0.1;
    double agtv_beta = 0.05; // Split-Bregman coupling; the ADMM rho is too stiff here
    double agtv_tol = 1e-3;
    int agtv_max_outer = 200; // Bregman add-back needs a longer leash than ADMM
    int adc_window = 5;
};

struct TscConfig {
    std::vector<std::string> regions{"glandular", "adipose", "tumor"};
    double water_fraction = 0.75;
    int mask_erosion_voxels = 1;
};

struct PipelineConfig {
    GridDims phantom_dims{192, 192, 1};
    VoxelSize phantom_voxel{1.0, 1.0, 1.0};
    PhantomGeometry geometry;
    AcquisitionConfig acquisition;
    PriorConfig prior;
    ReconSweepConfig recon;
    TscConfig tsc;
    int ssim_window = 11;
    std::filesystem::path out_dir = "out";
    std::uint64_t master_seed = 20260818;
    bool render_panels = true;

    void validate() const
    {
        if (acquisition.spokes.empty()) throw ConfigError("acquisition.spokes must be nonempty");
        for (int s : acquisition.spokes)
            if (s < 1) throw ConfigError("spoke counts must be positive");
        if (acquisition.samples_per_spoke < 8)
            throw ConfigError("samples_per_spoke must be at least 8");
        if (acquisition.n_coils < 1) throw ConfigError("n_coils must be positive");
        if (acquisition.sigma < 0.0) throw ConfigError("sigma must be nonnegative");
        if (acquisition.k0_fraction <= 0.0 || acquisition.k0_fraction > 0.5)
            throw ConfigError("k0_fraction must lie in (0, 0.5]");
        if (recon.methods.empty()) throw ConfigError("recon.methods must be nonempty");
        if (tsc.water_fraction <= 0.0 || tsc.water_fraction > 1.0)
            throw ConfigError("tsc.water_fraction must lie in (0, 1]");
    }
};

namespace detail {

using json = nlohmann::json;

inline void check_keys(const json& j, const std::set<std::string>& allowed,
                       const std::string& where)
{
    if (!j.is_object()) throw ConfigError(where + " must be a JSON object");
    for (const auto& item : j.items())
        if (!allowed.count(item.key()))
            throw ConfigError("unknown key '" + item.key() + "' in " + where);
}

template <typename T>
void maybe_get(const json& j, const char* key, T& out)
{
    if (j.contains(key)) out = j.at(key).get<T>();
}

inline void maybe_get_dims(const json& j, const char* key, GridDims& out)
{
    if (!j.contains(key)) return;
    const auto v = j.at(key).get<std::vector<int>>();
    if (v.size() != 3) throw ConfigError(std::string(key) + " must hold 3 integers");
    out = {v[0], v[1], v[2]};
}

inline void maybe_get_voxel(const json& j, const char* key, VoxelSize& out)
{
    if (!j.contains(key)) return;
    const auto v = j.at(key).get<std::vector<double>>();
    if (v.size() != 3) throw ConfigError(std::string(key) + " must hold 3 numbers");
    out = {v[0], v[1], v[2]};
}

inline void maybe_get_frac3(const json& j, const char* key, std::array<double, 3>& out)
{
    if (!j.contains(key)) return;
    const auto v = j.at(key).get<std::vector<double>>();
    if (v.size() != 3) throw ConfigError(std::string(key) + " must hold 3 numbers");
    out = {v[0], v[1], v[2]};
}

inline void parse_geometry(const json& j, PhantomGeometry& g)
{
    check_keys(j,
               {"breast_center", "breast_radius", "skin_thickness", "glandular_scale",
                "glandular_fraction", "tumor_center", "tumor_radius", "vial77_center",
                "vial154_center", "vial_radius", "tumor_concentration", "skin_enabled"},
               "geometry");
    maybe_get_frac3(j, "breast_center", g.breast_center);
    maybe_get(j, "breast_radius", g.breast_radius);
    maybe_get(j, "skin_thickness", g.skin_thickness);
    maybe_get(j, "glandular_scale", g.glandular_scale);
    maybe_get(j, "glandular_fraction", g.glandular_fraction);
    maybe_get_frac3(j, "tumor_center", g.tumor_center);
    maybe_get(j, "tumor_radius", g.tumor_radius);
    maybe_get_frac3(j, "vial77_center", g.vial77_center);
    maybe_get_frac3(j, "vial154_center", g.vial154_center);
    maybe_get(j, "vial_radius", g.vial_radius);
    maybe_get(j, "tumor_concentration", g.tumor_concentration);
    maybe_get(j, "skin_enabled", g.skin_enabled);
}

inline void parse_acquisition(const json& j, AcquisitionConfig& a)
{
    check_keys(j, {"spokes", "samples_per_spoke", "mode", "k0_fraction", "n_coils", "sigma"},
               "acquisition");
    maybe_get(j, "spokes", a.spokes);
    maybe_get(j, "samples_per_spoke", a.samples_per_spoke);
    if (j.contains("mode")) {
        const auto s = j.at("mode").get<std::string>();
        if (s == "uniform")
            a.mode = TrajMode::UniformRadial;
        else if (s == "density_adapted")
            a.mode = TrajMode::DensityAdapted;
        else
            throw ConfigError("acquisition.mode must be 'uniform' or 'density_adapted'");
    }
    maybe_get(j, "k0_fraction", a.k0_fraction);
    maybe_get(j, "n_coils", a.n_coils);
    maybe_get(j, "sigma", a.sigma);
}

inline void parse_prior(const json& j, PriorConfig& p)
{
    check_keys(j, {"dims", "mismatch", "shift_mm"}, "prior");
    maybe_get_dims(j, "dims", p.dims);
    if (j.contains("mismatch")) {
        const auto s = j.at("mismatch").get<std::string>();
        if (s == "none")
            p.mismatch.mode = PriorMismatch::None;
        else if (s == "shift")
            p.mismatch.mode = PriorMismatch::Shift;
        else if (s == "extra_edge")
            p.mismatch.mode = PriorMismatch::ExtraEdge;
        else if (s == "delete_tumor")
            p.mismatch.mode = PriorMismatch::DeleteTumor;
        else
            throw ConfigError("prior.mismatch must be one of none|shift|extra_edge|delete_tumor");
    }
    maybe_get_frac3(j, "shift_mm", p.mismatch.shift_mm);
}

inline void parse_recon(const json& j, ReconSweepConfig& r)
{
    check_keys(j,
               {"dims", "voxel_mm", "methods", "alpha", "max_outer_iters", "fgp_inner_iters",
                "admm_rho", "tol", "gamma", "eta", "lambda_xyz", "lambda_bm", "omega",
                "agtv_beta", "agtv_tol", "agtv_max_outer", "adc_window"},
               "recon");
    maybe_get_dims(j, "dims", r.dims);
    maybe_get_voxel(j, "voxel_mm", r.voxel);
    if (j.contains("methods")) {
        r.methods.clear();
        for (const auto& m : j.at("methods").get<std::vector<std::string>>())
            r.methods.push_back(parse_method(m));
    }
    if (j.contains("alpha")) {
        const json& ja = j.at("alpha");
        check_keys(ja, {"tv", "wtv", "dtv"}, "recon.alpha");
        for (const auto& item : ja.items())
            r.alpha[parse_method(item.key())] = item.value().get<double>();
    }
    maybe_get(j, "max_outer_iters", r.max_outer_iters);
    maybe_get(j, "fgp_inner_iters", r.fgp_inner_iters);
    maybe_get(j, "admm_rho", r.admm_rho);
    maybe_get(j, "tol", r.tol);
    maybe_get(j, "gamma", r.gamma);
    maybe_get(j, "eta", r.eta);
    maybe_get(j, "lambda_xyz", r.lambda_xyz);
    maybe_get(j, "lambda_bm", r.lambda_bm);
    maybe_get(j, "omega", r.omega);
    maybe_get(j, "agtv_beta", r.agtv_beta);
    maybe_get(j, "agtv_tol", r.agtv_tol);
    maybe_get(j, "agtv_max_outer", r.agtv_max_outer);
    maybe_get(j, "adc_window", r.adc_window);
}

inline void parse_tsc(const json& j, TscConfig& t)
{
    check_keys(j, {"regions", "water_fraction", "mask_erosion_voxels"}, "tsc");
    maybe_get(j, "regions", t.regions);
    maybe_get(j, "water_fraction", t.water_fraction);
    maybe_get(j, "mask_erosion_voxels", t.mask_erosion_voxels);
}

} // namespace detail

inline PipelineConfig parse_pipeline_config(const nlohmann::json& j)
{
    detail::check_keys(j,
                       {"version", "master_seed", "out_dir", "phantom_dims", "phantom_voxel_mm",
                        "geometry", "acquisition", "prior", "recon", "tsc", "ssim_window",
                        "render_panels"},
                       "config root");
    if (!j.contains("version")) throw ConfigError("config is missing required key 'version'");
    const int version = j.at("version").get<int>();
    if (version != kConfigVersion)
        throw ConfigError("unsupported config version " + std::to_string(version) +
                          " (expected " + std::to_string(kConfigVersion) + ")");

    PipelineConfig cfg;
    detail::maybe_get(j, "master_seed", cfg.master_seed);
    if (j.contains("out_dir")) cfg.out_dir = j.at("out_dir").get<std::string>();
    detail::maybe_get_dims(j, "phantom_dims", cfg.phantom_dims);
    detail::maybe_get_voxel(j, "phantom_voxel_mm", cfg.phantom_voxel);
    if (j.contains("geometry")) detail::parse_geometry(j.at("geometry"), cfg.geometry);
    if (j.contains("acquisition")) detail::parse_acquisition(j.at("acquisition"), cfg.acquisition);
    if (j.contains("prior")) detail::parse_prior(j.at("prior"), cfg.prior);
    if (j.contains("recon")) detail::parse_recon(j.at("recon"), cfg.recon);
    if (j.contains("tsc")) detail::parse_tsc(j.at("tsc"), cfg.tsc);
    detail::maybe_get(j, "ssim_window", cfg.ssim_window);
    detail::maybe_get(j, "render_panels", cfg.render_panels);
    cfg.validate();
    return cfg;
}

inline PipelineConfig load_pipeline_config(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("config parse failure in " + path.string() + ": " + e.what());
    }
    try {
        return parse_pipeline_config(j);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("config type error in " + path.string() + ": " + e.what());
    }
}

} // namespace namri
