#include <catch2/catch_amalgamated.hpp>

#include <fstream>
#include <string>
#include <vector>

#include "namri/pipeline.hpp"
#include "test_util.hpp"

using namespace namri;

namespace {

std::string slurp(const std::filesystem::path& p)
{
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

PipelineConfig mini_config(const std::filesystem::path& out)
{
    PipelineConfig cfg;
    cfg.phantom_dims = {48, 48, 1};
    cfg.phantom_voxel = {1.0, 1.0, 1.0};
    cfg.recon.dims = {24, 24, 1};
    cfg.recon.voxel = {2.0, 2.0, 2.0};
    cfg.recon.methods = {ReconMethod::ADC, ReconMethod::TV};
    cfg.recon.max_outer_iters = 10;
    cfg.recon.fgp_inner_iters = 10;
    cfg.prior.dims = {48, 48, 1};
    cfg.acquisition.spokes = {4, 8};
    cfg.acquisition.samples_per_spoke = 12;
    cfg.acquisition.n_coils = 2;
    cfg.tsc.mask_erosion_voxels = 0;
    cfg.out_dir = out;
    cfg.master_seed = 77;
    return cfg;
}

std::vector<std::filesystem::path> report_files(const PipelineConfig& cfg)
{
    const PipelinePaths paths(cfg.out_dir);
    std::vector<std::filesystem::path> files{paths.metrics_csv(),     paths.tsc_csv(),
                                             paths.pairs_csv(),       paths.correlations_csv(),
                                             paths.cells_csv(),       paths.profiles_csv(),
                                             paths.psf_csv()};
    for (int s : cfg.acquisition.spokes) files.push_back(paths.panel(s));
    return files;
}

} // namespace

TEST_CASE("default configuration enumerates the full method-by-spokes sweep")
{
    const PipelineConfig cfg;
    const auto cells = detail::cell_list(cfg);
    CHECK(cells.size() == 16); // 4 methods x 4 spoke counts

    // sorted by method name then spoke count, so partial sweeps keep rows stable
    for (std::size_t i = 1; i < cells.size(); ++i) {
        const auto a = to_string(cells[i - 1].method), b = to_string(cells[i].method);
        CHECK((a < b || (a == b && cells[i - 1].spokes < cells[i].spokes)));
    }
}

TEST_CASE("mismatched simulation and recon grids are rejected")
{
    SECTION("different FOV")
    {
        PipelineConfig cfg = mini_config(testutil::fresh_dir("namri_grid_a"));
        cfg.recon.voxel = {1.5, 1.5, 1.5}; // 36 mm vs 48 mm
        CHECK_THROWS_AS(run_pipeline(cfg), ConfigError);
    }
    SECTION("active axes disagree")
    {
        PipelineConfig cfg = mini_config(testutil::fresh_dir("namri_grid_b"));
        cfg.recon.dims = {24, 24, 24};
        CHECK_THROWS_AS(run_pipeline(cfg), ConfigError);
    }
    SECTION("anisotropic grid ratio")
    {
        PipelineConfig cfg = mini_config(testutil::fresh_dir("namri_grid_c"));
        cfg.recon.dims = {24, 48, 1};
        cfg.recon.voxel = {2.0, 1.0, 1.0}; // same FOV, different ratio per axis
        CHECK_THROWS_AS(run_pipeline(cfg), ConfigError);
    }
}

TEST_CASE("pipeline reruns are byte-identical")
{
    const PipelineConfig cfg_a = mini_config(testutil::fresh_dir("namri_pipe_a"));
    const PipelineConfig cfg_b = mini_config(testutil::fresh_dir("namri_pipe_b"));

    const ReportBundle run_a = run_pipeline(cfg_a);
    REQUIRE(run_a.all_ok);
    REQUIRE(run_a.metrics.size() == 4); // 2 methods x 2 spoke counts
    REQUIRE(run_a.tsc.size() == 12);    // x 3 regions

    const ReportBundle run_b = run_pipeline(cfg_b);
    REQUIRE(run_b.all_ok);

    const auto files_a = report_files(cfg_a);
    const auto files_b = report_files(cfg_b);
    for (std::size_t i = 0; i < files_a.size(); ++i)
        CHECK(slurp(files_a[i]) == slurp(files_b[i]));

    SECTION("recon volumes and k-space files match too")
    {
        const PipelinePaths pa(cfg_a.out_dir), pb(cfg_b.out_dir);
        for (const auto& cell : detail::cell_list(cfg_a)) {
            CHECK(slurp(pa.volume(cell)) == slurp(pb.volume(cell)));
            CHECK(slurp(pa.convergence(cell)) == slurp(pb.convergence(cell)));
        }
        for (int s : cfg_a.acquisition.spokes)
            CHECK(slurp(pa.kspace(s)) == slurp(pb.kspace(s)));
    }

    SECTION("overwriting rerun in the same directory is also byte-identical")
    {
        const std::string before = slurp(PipelinePaths(cfg_a.out_dir).metrics_csv());
        run_pipeline(cfg_a);
        CHECK(slurp(PipelinePaths(cfg_a.out_dir).metrics_csv()) == before);
    }
}

TEST_CASE("report tables are recomputable from the persisted volumes")
{
    const PipelineConfig cfg = mini_config(testutil::fresh_dir("namri_pipe_reuse"));
    run_pipeline(cfg);
    const PipelinePaths paths(cfg.out_dir);
    const std::string metrics = slurp(paths.metrics_csv());
    const std::string tsc = slurp(paths.tsc_csv());
    const std::string pairs = slurp(paths.pairs_csv());

    const ReportBundle reused = run_pipeline(cfg, 1, false, true);
    REQUIRE(reused.all_ok);
    for (const CellStatus& cs : reused.cells) CHECK(cs.message == "reused");
    CHECK(slurp(paths.metrics_csv()) == metrics);
    CHECK(slurp(paths.tsc_csv()) == tsc);
    CHECK(slurp(paths.pairs_csv()) == pairs);
}

TEST_CASE("dropping a method leaves the remaining report rows unchanged")
{
    const PipelineConfig cfg_full = mini_config(testutil::fresh_dir("namri_pipe_full"));
    PipelineConfig cfg_adc = mini_config(testutil::fresh_dir("namri_pipe_adc"));
    cfg_adc.recon.methods = {ReconMethod::ADC};

    run_pipeline(cfg_full);
    run_pipeline(cfg_adc);

    auto adc_lines = [](const std::string& text) {
        std::vector<std::string> out;
        std::size_t pos = 0;
        while (pos < text.size()) {
            std::size_t end = text.find('\n', pos);
            if (end == std::string::npos) end = text.size();
            const std::string line = text.substr(pos, end - pos);
            if (line.rfind("adc,", 0) == 0) out.push_back(line);
            pos = end + 1;
        }
        return out;
    };
    const auto full = adc_lines(slurp(PipelinePaths(cfg_full.out_dir).metrics_csv()));
    const auto solo = adc_lines(slurp(PipelinePaths(cfg_adc.out_dir).metrics_csv()));
    REQUIRE(!solo.empty());
    CHECK(full == solo);
}

TEST_CASE("worker count does not change the results")
{
    const PipelineConfig cfg_seq = mini_config(testutil::fresh_dir("namri_pipe_j1"));
    const PipelineConfig cfg_par = mini_config(testutil::fresh_dir("namri_pipe_j2"));

    run_pipeline(cfg_seq, 1);
    run_pipeline(cfg_par, 2);

    const auto files_seq = report_files(cfg_seq);
    const auto files_par = report_files(cfg_par);
    for (std::size_t i = 0; i < files_seq.size(); ++i)
        CHECK(slurp(files_seq[i]) == slurp(files_par[i]));
}
