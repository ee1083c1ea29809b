// End-to-end experiment orchestration.
//
// The pipeline simulates acquisition on the fine phantom grid, scales the
// samples to recon-grid units, and reconstructs every (method × spoke-count)
// cell on the coarse grid. Cells are independent: each derives its RNG
// streams from the master seed plus the cell identity, runs in isolation
// (optionally concurrently), and persists its artifacts atomically. All
// report tables are recomputed from the persisted 32-bit volumes so reruns
// are byte-identical and nothing depends on in-memory state.

#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "namri/coils.hpp"
#include "namri/combine.hpp"
#include "namri/config.hpp"
#include "namri/core.hpp"
#include "namri/csv.hpp"
#include "namri/image_ops.hpp"
#include "namri/kspace.hpp"
#include "namri/kspace_io.hpp"
#include "namri/metrics.hpp"
#include "namri/nufft.hpp"
#include "namri/phantom.hpp"
#include "namri/prior_maps.hpp"
#include "namri/quant.hpp"
#include "namri/recon.hpp"
#include "namri/render.hpp"
#include "namri/rng.hpp"
#include "namri/stats.hpp"
#include "namri/trajectory.hpp"
#include "namri/volume_io.hpp"

namespace namri {

// Simulated signals are divided by this so image values live near [0, 1];
// quantification is calibration-based and unaffected by the common scale.
inline constexpr double kSignalScale = 154.0;

struct CellId {
    ReconMethod method = ReconMethod::ADC;
    int spokes = 0;

    std::string label() const { return to_string(method) + "_s" + std::to_string(spokes); }
};

struct CellStatus {
    CellId id;
    bool ok = false;
    std::string message;
};

struct MetricRow {
    std::string method;
    int spokes = 0;
    double ssim = 0.0, rmse = 0.0, fm = 0.0, dice = 0.0;
};

struct TscRow {
    std::string method;
    int spokes = 0;
    std::string region;
    double mean = 0.0, sd = 0.0;
    long n = 0;
};

struct PairRow {
    std::string method_a, method_b;
    PairedTestResult test;
};

struct CorrelationRow {
    std::string method;
    PearsonResult corr;
};

struct ReportBundle {
    std::vector<CellStatus> cells;
    std::vector<MetricRow> metrics;
    std::vector<TscRow> tsc;
    std::vector<PairRow> pairs;
    std::vector<CorrelationRow> correlations;
    bool all_ok = false;
};

struct PipelinePaths {
    std::filesystem::path root;

    explicit PipelinePaths(std::filesystem::path r) : root(std::move(r)) {}

    std::filesystem::path gt_full() const { return root / "phantom" / "gt_full.snav"; }
    std::filesystem::path gt_recon() const { return root / "phantom" / "gt_recon.snav"; }
    std::filesystem::path prior_full() const { return root / "phantom" / "prior.snav"; }
    std::filesystem::path prior_recon() const { return root / "phantom" / "prior_recon.snav"; }
    std::filesystem::path kspace(int spokes) const
    {
        return root / "kspace" / ("spokes_" + std::to_string(spokes) + ".snak");
    }
    std::filesystem::path volume(const CellId& id) const
    {
        return root / "recon" / (id.label() + ".snav");
    }
    std::filesystem::path convergence(const CellId& id) const
    {
        return root / "recon" / (id.label() + "_convergence.csv");
    }
    std::filesystem::path metrics_csv() const { return root / "report" / "metrics.csv"; }
    std::filesystem::path tsc_csv() const { return root / "report" / "tsc.csv"; }
    std::filesystem::path pairs_csv() const { return root / "report" / "paired_tests.csv"; }
    std::filesystem::path correlations_csv() const
    {
        return root / "report" / "correlations.csv";
    }
    std::filesystem::path cells_csv() const { return root / "report" / "cells.csv"; }
    std::filesystem::path profiles_csv() const { return root / "report" / "line_profiles.csv"; }
    std::filesystem::path psf_csv() const { return root / "report" / "psf.csv"; }
    std::filesystem::path panel(int spokes) const
    {
        return root / "panels" / ("spokes_" + std::to_string(spokes) + ".pgm");
    }
};

namespace detail {

// The phantom and recon grids must describe the same physical FOV with one
// isotropic grid ratio on the active axes; the trajectory is specified in
// recon-grid cycles/voxel and rescaled for simulation on the fine grid.
inline double grid_ratio(const PipelineConfig& cfg)
{
    const GridDims& pd = cfg.phantom_dims;
    const GridDims& rd = cfg.recon.dims;
    const double axes_p[3] = {pd.nx * cfg.phantom_voxel.x, pd.ny * cfg.phantom_voxel.y,
                              pd.nz * cfg.phantom_voxel.z};
    const double axes_r[3] = {rd.nx * cfg.recon.voxel.x, rd.ny * cfg.recon.voxel.y,
                              rd.nz * cfg.recon.voxel.z};
    double ratio = 0.0;
    for (int a = 0; a < 3; ++a) {
        const int np = pd[a], nr = rd[a];
        if (np == 1 && nr == 1) continue;
        if (np == 1 || nr == 1)
            throw ConfigError("phantom and recon grids must agree on which axes are active");
        if (std::abs(axes_p[a] - axes_r[a]) > 1e-9 * std::max(axes_p[a], axes_r[a]))
            throw ConfigError("phantom and recon grids must cover the same FOV");
        const double r = double(nr) / np;
        if (ratio == 0.0)
            ratio = r;
        else if (std::abs(r - ratio) > 1e-12)
            throw ConfigError("phantom/recon grid ratio must match on all active axes");
    }
    if (ratio == 0.0) throw ConfigError("grids have no active axis");
    return ratio;
}

inline Trajectory scale_trajectory(const Trajectory& traj, double ratio)
{
    Trajectory out = traj;
    for (double& r : out.radii) r *= ratio;
    out.k0_fraction = traj.k0_fraction * ratio;
    out.weights = shell_weights(out.radii, out.n_spokes, out.ndim);
    return out;
}

inline double rms_magnitude(const std::vector<cdouble>& v)
{
    if (v.empty()) return 0.0;
    double s = 0.0;
    for (const cdouble& z : v) s += std::norm(z);
    return std::sqrt(s / double(v.size()));
}

struct SimContext {
    DigitalPhantom phantom;
    Image gt_full;       // scaled ground-truth signal, phantom grid
    Image gt_recon;      // box-averaged reference on the recon grid
    PriorImage prior;    // rendered prior at its native grid
    Image prior_recon;   // prior resampled to the recon grid
    CoilSensitivities coils_sim;
    CoilSensitivities coils_rec;
    double ratio = 1.0;  // recon-grid cycles/voxel per phantom-grid cycle/voxel
};

inline SimContext build_context(const PipelineConfig& cfg)
{
    SimContext ctx{build_breast_phantom(cfg.phantom_dims, cfg.phantom_voxel, cfg.geometry,
                                        derive_seed(cfg.master_seed, "phantom")),
                   Image({1, 1, 1}),
                   Image({1, 1, 1}),
                   PriorImage{Image({1, 1, 1}), {}},
                   Image({1, 1, 1}),
                   {},
                   {},
                   grid_ratio(cfg)};

    ctx.gt_full = signal_map(ctx.phantom);
    for (double& v : ctx.gt_full.data) v /= kSignalScale;
    ctx.gt_full.units = "a.u.";
    ctx.gt_recon = downsample_mean(ctx.gt_full, cfg.recon.dims);
    ctx.gt_recon.voxel = cfg.recon.voxel;

    ctx.prior = render_prior(ctx.phantom, cfg.prior.dims, cfg.prior.mismatch);
    ctx.prior_recon = resample_prior(ctx.prior, cfg.recon.dims);
    ctx.prior_recon.voxel = cfg.recon.voxel;

    const std::uint64_t coil_seed = derive_seed(cfg.master_seed, "coils");
    ctx.coils_sim = make_coils(cfg.phantom_dims, cfg.acquisition.n_coils, coil_seed);
    ctx.coils_rec = make_coils(cfg.recon.dims, cfg.acquisition.n_coils, coil_seed);
    return ctx;
}

inline ReconConfig cell_recon_config(const PipelineConfig& cfg, const CellId& id,
                                     const KSpaceData& data)
{
    const ReconSweepConfig& r = cfg.recon;
    ReconConfig rc;
    rc.method = id.method;
    auto it = r.alpha.find(id.method);
    rc.alpha = it != r.alpha.end() ? it->second : 0.0;
    rc.admm_rho = r.admm_rho;
    rc.max_outer_iters = r.max_outer_iters;
    rc.fgp_inner_iters = r.fgp_inner_iters;
    rc.eta = r.eta;
    rc.gamma = r.gamma;
    rc.lambda_xyz = r.lambda_xyz;
    rc.lambda_bm = r.lambda_bm;
    rc.omega = r.omega;
    rc.tol = r.tol;
    rc.adc_window = r.adc_window;
    rc.seed = derive_seed(cfg.master_seed, "recon-" + id.label());
    if (id.method == ReconMethod::AGTV) {
        rc.admm_rho = r.agtv_beta;
        rc.tol = r.agtv_tol;
        rc.max_outer_iters = r.agtv_max_outer;
        // Discrepancy target: expected squared noise norm with 10% slack,
        // floored at a tiny fraction of the data energy so noiseless runs
        // remain feasible.
        const double m = double(data.samples.size());
        const double nb2 = norm2(data.samples);
        rc.sigma_sq = std::max(2.2 * m * data.noise_sigma * data.noise_sigma,
                               1e-6 * nb2 * nb2);
    }
    return rc;
}

} // namespace detail

inline void stage_phantom(const PipelineConfig& cfg, const detail::SimContext& ctx)
{
    const PipelinePaths paths(cfg.out_dir);
    write_volume(ctx.gt_full, paths.gt_full(), cfg.master_seed);
    write_volume(ctx.gt_recon, paths.gt_recon(), cfg.master_seed);
    write_volume(ctx.prior.values, paths.prior_full(), cfg.master_seed);
    write_volume(ctx.prior_recon, paths.prior_recon(), cfg.master_seed);
}

inline void stage_acquire(const PipelineConfig& cfg, const detail::SimContext& ctx)
{
    const PipelinePaths paths(cfg.out_dir);
    const AcquisitionConfig& acq = cfg.acquisition;
    for (int n : acq.spokes) {
        Trajectory traj_rec = make_radial_trajectory(n, acq.samples_per_spoke, cfg.recon.dims,
                                                     acq.mode, acq.k0_fraction);
        Trajectory traj_sim = detail::scale_trajectory(traj_rec, ctx.ratio);

        KSpaceData sim = forward_model(ctx.gt_full, traj_sim, ctx.coils_sim);
        const double amp = double(cfg.recon.dims.total()) / double(cfg.phantom_dims.total());
        for (cdouble& s : sim.samples) s *= amp;

        KSpaceData data;
        data.dims = cfg.recon.dims;
        data.traj = std::move(traj_rec);
        data.n_coils = sim.n_coils;
        data.samples = std::move(sim.samples);

        // Config sigma is relative to the RMS sample magnitude so one value
        // describes a comparable noise level at every spoke count.
        const double sigma_abs = acq.sigma * detail::rms_magnitude(data.samples);
        data = add_noise(data, sigma_abs,
                         derive_seed(cfg.master_seed, "noise-s" + std::to_string(n)));
        write_kspace(data, paths.kspace(n));
    }
}

inline CellStatus run_recon_cell(const PipelineConfig& cfg, const detail::SimContext& ctx,
                                 const CellId& id)
{
    CellStatus status;
    status.id = id;
    try {
        const PipelinePaths paths(cfg.out_dir);
        const KSpaceData data = read_kspace(paths.kspace(id.spokes));
        require_same_dims(data.dims, cfg.recon.dims, "recon cell k-space grid");
        const ReconConfig rc = detail::cell_recon_config(cfg, id, data);

        ReconResult result;
        switch (id.method) {
        case ReconMethod::ADC:
            result = recon_adc(data, data.traj, ctx.coils_rec, cfg.recon.voxel, rc);
            break;
        case ReconMethod::TV:
            result = recon_admm(data, data.traj, ctx.coils_rec, cfg.recon.voxel, rc, nullptr);
            break;
        case ReconMethod::WTV:
        case ReconMethod::DTV:
            result = recon_admm(data, data.traj, ctx.coils_rec, cfg.recon.voxel, rc,
                                &ctx.prior_recon);
            break;
        case ReconMethod::AGTV: {
            const MaskVolume bm = make_background_mask(ctx.phantom, cfg.recon.dims, 2);
            result = recon_agtv(data, data.traj, ctx.coils_rec, cfg.recon.voxel,
                                &ctx.prior_recon, bm, rc);
            break;
        }
        }

        write_volume(result.image, paths.volume(id), rc.seed);
        write_convergence_csv(result.log, paths.convergence(id));
        status.ok = true;
        status.message = result.converged ? "converged"
                                          : "iteration budget reached (result kept)";
    } catch (const std::exception& e) {
        status.ok = false;
        status.message = e.what();
    }
    return status;
}

namespace detail {

inline std::vector<CellId> cell_list(const PipelineConfig& cfg)
{
    std::vector<CellId> cells;
    for (ReconMethod m : cfg.recon.methods)
        for (int n : cfg.acquisition.spokes) cells.push_back({m, n});
    // Report order is by (method name, spokes) so removing one method leaves
    // every other row byte-identical.
    std::sort(cells.begin(), cells.end(), [](const CellId& a, const CellId& b) {
        const std::string an = to_string(a.method), bn = to_string(b.method);
        return an != bn ? an < bn : a.spokes < b.spokes;
    });
    return cells;
}

struct RegionSet {
    RegionMask vial77, vial154, tumor_gt;
    std::vector<std::pair<std::string, RegionMask>> tsc_regions;
    std::map<std::string, double> true_conc;
};

inline RegionSet build_regions(const PipelineConfig& cfg, const DigitalPhantom& phantom)
{
    RegionSet rs{make_mask(phantom, "vial77", cfg.recon.dims, cfg.tsc.mask_erosion_voxels),
                 make_mask(phantom, "vial154", cfg.recon.dims, cfg.tsc.mask_erosion_voxels),
                 make_mask(phantom, "tumor", cfg.recon.dims, 0),
                 {},
                 {}};
    for (const std::string& region : cfg.tsc.regions) {
        const Compartment* comp = phantom.find(region);
        require(comp != nullptr, "tsc region '" + region + "' is not a phantom compartment");
        rs.tsc_regions.emplace_back(
            region, make_mask(phantom, region, cfg.recon.dims, cfg.tsc.mask_erosion_voxels));
        rs.true_conc[region] = comp->concentration;
    }
    return rs;
}

} // namespace detail

inline ReportBundle stage_report(const PipelineConfig& cfg, const detail::SimContext& ctx,
                                 const std::vector<CellStatus>& cell_statuses)
{
    const PipelinePaths paths(cfg.out_dir);
    const Image gt = read_image(paths.gt_recon());
    const detail::RegionSet regions = detail::build_regions(cfg, ctx.phantom);

    ReportBundle bundle;
    bundle.cells = cell_statuses;

    SsimParams sp;
    sp.window = cfg.ssim_window;

    std::map<std::string, std::map<std::pair<int, std::string>, double>> tsc_by_method;
    std::map<int, std::vector<std::pair<std::string, Image>>> panel_images;

    for (const CellStatus& cs : bundle.cells) {
        if (!cs.ok) continue;
        const Image img = read_image(paths.volume(cs.id));
        const std::string method = to_string(cs.id.method);

        MetricRow mr;
        mr.method = method;
        mr.spokes = cs.id.spokes;
        mr.ssim = ssim(gt, img, sp).mean;
        mr.rmse = rmse(gt, img);
        mr.fm = focus_measure(img);
        mr.dice = dice(make_tumor_mask(img, regions.tumor_gt), regions.tumor_gt);
        bundle.metrics.push_back(mr);

        const Compartment* v77 = ctx.phantom.find("vial77");
        const Compartment* v154 = ctx.phantom.find("vial154");
        require(v77 && v154, "phantom is missing the calibration vials");
        const CalibrationCurve curve = fit_calibration(
            img, regions.vial77, regions.vial154, {v77->concentration, v154->concentration});
        for (const auto& [region, mask] : regions.tsc_regions) {
            const bool is_tissue = region.rfind("vial", 0) != 0;
            const TscResult t =
                quantify_tsc(img, mask, curve, is_tissue, cfg.tsc.water_fraction);
            bundle.tsc.push_back({method, cs.id.spokes, region, t.mean, t.sd, long(t.n_voxels)});
            tsc_by_method[method][{cs.id.spokes, region}] = t.mean;
        }
        panel_images[cs.id.spokes].emplace_back(method, img);
    }

    // Paired tests across every (spokes × region) cell the two methods share.
    std::vector<std::string> methods;
    for (const auto& [m, _] : tsc_by_method) methods.push_back(m);
    for (std::size_t i = 0; i < methods.size(); ++i)
        for (std::size_t j = i + 1; j < methods.size(); ++j) {
            const auto& ma = tsc_by_method[methods[i]];
            const auto& mb = tsc_by_method[methods[j]];
            std::vector<double> diffs;
            for (const auto& [key, va] : ma) {
                auto it = mb.find(key);
                if (it != mb.end()) diffs.push_back(va - it->second);
            }
            if (diffs.size() < 2) continue;
            bundle.pairs.push_back({methods[i], methods[j], paired_ttest(diffs)});
        }

    // Per-method correlation of recovered TSC against prepared concentrations.
    for (const std::string& m : methods) {
        std::vector<double> est, truth;
        for (const auto& [key, v] : tsc_by_method[m]) {
            est.push_back(v);
            truth.push_back(regions.true_conc.at(key.second));
        }
        if (est.size() < 3) continue;
        try {
            bundle.correlations.push_back({m, pearson(est, truth)});
        } catch (const std::invalid_argument&) {
            // Degenerate spread (e.g., single region); skip the row.
        }
    }

    CsvTable mt({"method", "spokes", "ssim", "rmse", "focus_measure", "dice"});
    for (const MetricRow& r : bundle.metrics)
        mt.add_row({r.method, csv_int(r.spokes), csv_num(r.ssim), csv_num(r.rmse), csv_num(r.fm),
                    csv_num(r.dice)});
    write_csv(mt, paths.metrics_csv());

    CsvTable tt({"method", "spokes", "region", "mean_mmol_l", "sd_mmol_l", "n_voxels"});
    for (const TscRow& r : bundle.tsc)
        tt.add_row({r.method, csv_int(r.spokes), r.region, csv_num(r.mean), csv_num(r.sd),
                    csv_int(r.n)});
    write_csv(tt, paths.tsc_csv());

    CsvTable pt({"method_a", "method_b", "n", "mean_diff", "sd_diff", "ci95_lo", "ci95_hi",
                 "t_stat", "p_two_sided", "degenerate"});
    for (const PairRow& r : bundle.pairs)
        pt.add_row({r.method_a, r.method_b, csv_int(r.test.n), csv_num(r.test.mean_diff),
                    csv_num(r.test.sd_diff), csv_num(r.test.ci95_lo), csv_num(r.test.ci95_hi),
                    csv_num(r.test.t_stat), csv_num(r.test.p_two_sided),
                    r.test.degenerate ? "1" : "0"});
    write_csv(pt, paths.pairs_csv());

    CsvTable ct({"method", "n", "pearson_r", "p_two_sided"});
    for (const CorrelationRow& r : bundle.correlations)
        ct.add_row({r.method, csv_int(r.corr.n), csv_num(r.corr.r), csv_num(r.corr.p_two_sided)});
    write_csv(ct, paths.correlations_csv());

    CsvTable cells_t({"method", "spokes", "ok", "message"});
    for (const CellStatus& cs : bundle.cells)
        cells_t.add_row({to_string(cs.id.method), csv_int(cs.id.spokes), cs.ok ? "1" : "0",
                         cs.message});
    write_csv(cells_t, paths.cells_csv());

    // Line profiles through the tumor along x at the widest spoke count.
    {
        const int n_max = *std::max_element(cfg.acquisition.spokes.begin(),
                                            cfg.acquisition.spokes.end());
        const GridDims rd = cfg.recon.dims;
        const VoxelSize rv = cfg.recon.voxel;
        const double fy = rd.ny * rv.y, fz = rd.nz * rv.z;
        const double y_mm = (cfg.geometry.tumor_center[1] - 0.5) * fy;
        const double z_mm = rd.nz == 1 ? 0.0 : (cfg.geometry.tumor_center[2] - 0.5) * fz;
        const std::array<double, 3> p0{-(rd.nx / 2) * rv.x, y_mm, z_mm};
        const std::array<double, 3> p1{(rd.nx / 2 - 1) * rv.x, y_mm, z_mm};
        const int n_pts = 2 * rd.nx;

        CsvTable lp({"method", "sample", "pos_mm", "value"});
        auto add_profile = [&](const std::string& name, const Image& img) {
            const LineProfile prof = line_profile(img, p0, p1, n_pts);
            for (int s = 0; s < n_pts; ++s) {
                const double t = double(s) / (n_pts - 1);
                lp.add_row({name, csv_int(s), csv_num(p0[0] + t * (p1[0] - p0[0])),
                            csv_num(prof.values[std::size_t(s)])});
            }
        };
        add_profile("reference", gt);
        for (const CellStatus& cs : bundle.cells)
            if (cs.ok && cs.id.spokes == n_max)
                add_profile(to_string(cs.id.method), read_image(paths.volume(cs.id)));
        write_csv(lp, paths.profiles_csv());
    }

    // PSF width of both trajectory modes at every configured spoke count.
    {
        CsvTable pf({"spokes", "mode", "fwhm_x", "fwhm_y", "fwhm_z", "fwhm_mean"});
        for (int n : cfg.acquisition.spokes)
            for (TrajMode mode : {TrajMode::UniformRadial, TrajMode::DensityAdapted}) {
                const Trajectory traj =
                    make_radial_trajectory(n, cfg.acquisition.samples_per_spoke, cfg.recon.dims,
                                           mode, cfg.acquisition.k0_fraction);
                const PsfResult psf = psf_fwhm(traj, cfg.recon.dims);
                double sum = 0.0;
                int na = 0;
                for (int a = 0; a < 3; ++a)
                    if (psf.fwhm[std::size_t(a)] > 0.0) {
                        sum += psf.fwhm[std::size_t(a)];
                        ++na;
                    }
                pf.add_row({csv_int(n), detail::traj_mode_name(mode),
                            csv_num(psf.fwhm[0]), csv_num(psf.fwhm[1]), csv_num(psf.fwhm[2]),
                            csv_num(na ? sum / na : 0.0)});
            }
        write_csv(pf, paths.psf_csv());
    }

    if (cfg.render_panels) {
        const double hi = max_value(gt);
        for (const auto& [spokes, imgs] : panel_images) {
            std::vector<Image> panel{gt};
            for (const auto& [name, img] : imgs) panel.push_back(img);
            if (hi > 0.0) render_panel(panel, 0.0, hi, paths.panel(spokes));
        }
    }

    bundle.all_ok = std::all_of(bundle.cells.begin(), bundle.cells.end(),
                                [](const CellStatus& c) { return c.ok; });
    return bundle;
}

inline ReportBundle run_pipeline(const PipelineConfig& cfg, int jobs = 1, bool verbose = false,
                                 bool reuse_recon = false)
{
    cfg.validate();
    const detail::SimContext ctx = detail::build_context(cfg);
    const std::vector<CellId> cells = detail::cell_list(cfg);

    stage_phantom(cfg, ctx);
    std::vector<CellStatus> statuses(cells.size());
    if (!reuse_recon) {
        stage_acquire(cfg, ctx);
        std::atomic<std::size_t> next{0};
        auto worker = [&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= cells.size()) return;
                statuses[i] = run_recon_cell(cfg, ctx, cells[i]);
            }
        };
        const int n_threads = std::max(1, std::min<int>(jobs, int(cells.size())));
        if (n_threads == 1) {
            worker();
        } else {
            std::vector<std::thread> pool;
            for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
            for (auto& t : pool) t.join();
        }
    } else {
        const PipelinePaths paths(cfg.out_dir);
        for (std::size_t i = 0; i < cells.size(); ++i) {
            statuses[i].id = cells[i];
            statuses[i].ok = std::filesystem::exists(paths.volume(cells[i]));
            statuses[i].message = statuses[i].ok ? "reused" : "volume missing";
        }
    }
    if (verbose)
        for (const CellStatus& s : statuses)
            std::fprintf(stderr, "[cell] %-10s %s\n", s.id.label().c_str(), s.message.c_str());

    return stage_report(cfg, ctx, statuses);
}

} // namespace namri
