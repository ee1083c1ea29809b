// Command-line driver: stages of the simulation/reconstruction study as
// subcommands sharing one JSON config and output layout.
//
// Exit codes: 0 success, 1 runtime/cell failure, 2 configuration error.

#include <cstdio>
#include <exception>
#include <filesystem>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "namri/config.hpp"
#include "namri/pipeline.hpp"

namespace {

struct GlobalArgs {
    std::string config_path;
    std::string out_dir;
    std::optional<std::uint64_t> seed;
    bool verbose = false;
    int jobs = 1;
};

namri::PipelineConfig resolve_config(const GlobalArgs& g)
{
    namri::PipelineConfig cfg;
    if (!g.config_path.empty()) cfg = namri::load_pipeline_config(g.config_path);
    if (!g.out_dir.empty()) cfg.out_dir = g.out_dir;
    if (g.seed) cfg.master_seed = *g.seed;
    cfg.validate();
    return cfg;
}

void print_report_summary(const namri::ReportBundle& bundle, const namri::PipelinePaths& paths)
{
    int ok = 0;
    for (const auto& c : bundle.cells) ok += c.ok ? 1 : 0;
    std::printf("cells: %d/%zu ok\n", ok, bundle.cells.size());
    for (const auto& c : bundle.cells)
        if (!c.ok) std::printf("  FAILED %-12s %s\n", c.id.label().c_str(), c.message.c_str());
    std::printf("metrics: %s\n", paths.metrics_csv().string().c_str());
    std::printf("tsc:     %s\n", paths.tsc_csv().string().c_str());
    std::printf("pairs:   %s\n", paths.pairs_csv().string().c_str());
}

int run_phantom(const GlobalArgs& g)
{
    const auto cfg = resolve_config(g);
    const auto ctx = namri::detail::build_context(cfg);
    namri::stage_phantom(cfg, ctx);
    std::printf("phantom written under %s\n", (cfg.out_dir / "phantom").string().c_str());
    return 0;
}

int run_acquire(const GlobalArgs& g)
{
    const auto cfg = resolve_config(g);
    const auto ctx = namri::detail::build_context(cfg);
    namri::stage_phantom(cfg, ctx);
    namri::stage_acquire(cfg, ctx);
    std::printf("k-space written under %s\n", (cfg.out_dir / "kspace").string().c_str());
    return 0;
}

int run_recon(const GlobalArgs& g, const std::string& method, int spokes)
{
    auto cfg = resolve_config(g);
    if (!method.empty()) cfg.recon.methods = {namri::parse_method(method)};
    if (spokes > 0) cfg.acquisition.spokes = {spokes};
    const auto ctx = namri::detail::build_context(cfg);
    const namri::PipelinePaths paths(cfg.out_dir);
    for (int n : cfg.acquisition.spokes)
        if (!std::filesystem::exists(paths.kspace(n))) {
            std::fprintf(stderr, "missing %s (run the acquire stage first)\n",
                         paths.kspace(n).string().c_str());
            return 1;
        }

    bool all_ok = true;
    for (const auto& cell : namri::detail::cell_list(cfg)) {
        const auto status = namri::run_recon_cell(cfg, ctx, cell);
        std::printf("%-12s %s\n", status.id.label().c_str(), status.message.c_str());
        all_ok = all_ok && status.ok;
    }
    return all_ok ? 0 : 1;
}

int run_report_like(const GlobalArgs& g)
{
    const auto cfg = resolve_config(g);
    const auto bundle = namri::run_pipeline(cfg, g.jobs, g.verbose, /*reuse_recon=*/true);
    print_report_summary(bundle, namri::PipelinePaths(cfg.out_dir));
    return bundle.all_ok ? 0 : 1;
}

int run_full_pipeline(const GlobalArgs& g)
{
    const auto cfg = resolve_config(g);
    const auto bundle = namri::run_pipeline(cfg, g.jobs, g.verbose);
    print_report_summary(bundle, namri::PipelinePaths(cfg.out_dir));
    return bundle.all_ok ? 0 : 1;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"sodium MRI simulation, reconstruction, and quantification toolkit"};
    app.require_subcommand(1);

    GlobalArgs g;
    app.add_option("--config", g.config_path, "JSON config file")->check(CLI::ExistingFile);
    app.add_option("--out", g.out_dir, "output directory (overrides config)");
    app.add_option("--seed", g.seed, "master seed (overrides config)");
    app.add_flag("--verbose", g.verbose, "per-cell progress on stderr");
    app.add_option("--jobs", g.jobs, "max concurrent reconstruction cells")
        ->check(CLI::PositiveNumber);

    auto* sc_phantom = app.add_subcommand("phantom", "build the digital phantom and prior");
    auto* sc_acquire = app.add_subcommand("acquire", "simulate multi-coil radial k-space");

    auto* sc_recon = app.add_subcommand("recon", "reconstruct one or all cells");
    std::string method;
    int spokes = 0;
    sc_recon->add_option("--method", method, "adc|tv|wtv|dtv|agtv (default: all configured)");
    sc_recon->add_option("--spokes", spokes, "spoke count (default: all configured)");

    auto* sc_metrics = app.add_subcommand("metrics", "recompute metrics from saved volumes");
    auto* sc_tsc = app.add_subcommand("tsc", "recompute TSC tables from saved volumes");
    auto* sc_report = app.add_subcommand("report", "regenerate all report files");
    auto* sc_pipeline = app.add_subcommand("pipeline", "run every stage end to end");

    // global flags may follow the subcommand name
    for (auto* sc : app.get_subcommands(nullptr)) sc->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (sc_phantom->parsed()) return run_phantom(g);
        if (sc_acquire->parsed()) return run_acquire(g);
        if (sc_recon->parsed()) return run_recon(g, method, spokes);
        if (sc_metrics->parsed() || sc_tsc->parsed() || sc_report->parsed())
            return run_report_like(g);
        if (sc_pipeline->parsed()) return run_full_pipeline(g);
    } catch (const namri::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 2;
}
