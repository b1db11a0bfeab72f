#include "ergoprobe/config.hpp"
#include "ergoprobe/experiments.hpp"
#include "ergoprobe/io.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace ergoprobe;
namespace fs = std::filesystem;

namespace {

ExperimentConfig parse(const std::string& text) {
    std::istringstream in(text);
    return parse_config(in);
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("ergoprobe_unit_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

ExperimentConfig small_chain() {
    ExperimentConfig c = parse("experiment = chain_fdt\nmaster_seed = 3\nsweep.n_total = 6\nsweep.g_sb = 0.2, 0.3, 0.4\n");
    c.validate();
    return c;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("config parsing") {
    const auto c = parse("# sweep\nexperiment = chain-fdt\nmaster_seed = 17\nsweep.g_sb = 0.1, 0.2 # two\n"
                         "chain.bz = 0.5\nsweep.n_total = 7,8\nobservable = o_odd\nestimator = fit\n");
    CHECK(c.experiment == ExperimentKind::chain_fdt);
    CHECK(*c.master_seed == 17u);
    CHECK(c.sweep_g_sb == std::vector<double>{0.1, 0.2});
    CHECK(c.sweep_n_total == std::vector<int>{7, 8});
    CHECK(c.chain.bz == 0.5);
    CHECK(c.observable == ObservableKind::o_odd);
    CHECK(c.estimator == GammaEstimator::fit);
    CHECK_NOTHROW(c.validate());
}

TEST_CASE("config rejections") {
    try {
        parse("experiment = rmt_fdt\nchain.bogus = 1\n");
        FAIL("unknown key accepted");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("chain.bogus") != std::string::npos);
    }
    CHECK_THROWS_AS(parse("master_seed = 1\n"), ConfigError);
    CHECK_THROWS_AS(parse("experiment = rmt_fdt\nsweep.g =\n"), ConfigError);
    CHECK_THROWS_AS(parse("experiment = rmt_fdt\nsweep.g = abc\n"), ConfigError);
    CHECK_THROWS_AS(parse("experiment = nope\n"), ConfigError);
    CHECK_THROWS_AS(parse("experiment = rmt_fdt\n").validate(), ConfigError);  // no master_seed
    CHECK_THROWS_AS(parse("experiment = rmt_fdt\nmaster_seed = 1\nrmt.n = 7\n").validate(), ConfigError);
    CHECK_THROWS_AS(load_config("/nonexistent/ergoprobe.cfg"), ConfigError);
    for (const auto& [k, doc] : config_keys())
        CHECK_FALSE(doc.empty());
}

TEST_CASE("grid seeds are keyed by index") {
    auto c = parse("experiment = chain_fdt\nmaster_seed = 5\nsweep.n_total = 6, 7\nsweep.g_sb = 0.1, 0.2\nsweep.beta = 0, 1\n");
    const auto grid = make_grid(c);
    CHECK(grid.size() == 8);
    for (std::size_t i = 0; i < grid.size(); ++i)
        CHECK(grid[i].index == i);
    const auto again = make_grid(c);
    for (std::size_t i = 0; i < grid.size(); ++i)
        CHECK(grid[i].seed == again[i].seed);
    CHECK(grid[0].seed != grid[1].seed);
    c.master_seed = 6;
    CHECK(make_grid(c)[0].seed != grid[0].seed);
}

TEST_CASE("CSV: empty sweep, schema and bit-exact round trip") {
    const fs::path dir = scratch("csv");
    SweepResult empty;
    empty.config = small_chain();
    emit_csv(empty, (dir / "empty.csv").string());
    CHECK(slurp(dir / "empty.csv") == std::string(kCsvHeader) + "\n");

    const SweepResult res = run(small_chain(), 1);
    REQUIRE(res.points.size() == 3);
    emit_csv(res, (dir / "run.csv").string());
    const auto rows = read_csv((dir / "run.csv").string());
    const auto mem = to_rows(res);
    REQUIRE(rows.size() == mem.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(rows[i].g == mem[i].g);
        CHECK(rows[i].delta2 == mem[i].delta2);
        CHECK(rows[i].inv_gamma == mem[i].inv_gamma);
        CHECK(rows[i].chi_times_dos == mem[i].chi_times_dos);
        CHECK(rows[i].seed == mem[i].seed);
        CHECK(rows[i].fit_flag == "ok");
    }
    CHECK(format_double(0.1) == "0.10000000000000001");
    CHECK_THROWS(emit_csv(res, "/nonexistent-dir/x.csv"));
}

TEST_CASE("reruns are bit-identical across worker counts") {
    const fs::path a = scratch("det_a"), b = scratch("det_b");
    write_outputs(run(small_chain(), 1), a.string());
    write_outputs(run(small_chain(), 3), b.string());
    CHECK(slurp(a / "chain_fdt.csv") == slurp(b / "chain_fdt.csv"));
    CHECK(slurp(a / "chain_fdt_points.csv") == slurp(b / "chain_fdt_points.csv"));
}

TEST_CASE("a failing grid point is isolated") {
    auto c = small_chain();
    c.sweep_n_total = {5, 7};
    c.sweep_g_sb = {0.3, 0.4};
    c.max_time_domain_dim = 64;  // too small for the 7-qubit points only
    const SweepResult res = run(c, 2);
    REQUIRE(res.points.size() == 4);
    for (const auto& p : res.points) {
        CHECK(p.failed == (p.grid.n_total == 7));
        if (p.failed)
            CHECK_FALSE(p.diagnostic.empty());
    }
    CHECK(res.any_failed());
    for (const auto& r : to_rows(res))
        CHECK(r.fit_flag == (r.n_total == 7 ? "failed" : "ok"));
}

TEST_CASE("plots") {
    const fs::path dir = scratch("svg");
    auto one = small_chain();
    one.sweep_g_sb = {0.3};
    const SweepResult single = run(one, 1);
    emit_plot(single, PlotKind::fdt_line, (dir / "one.svg").string());
    const std::string svg = slurp(dir / "one.svg");
    CHECK(svg.find("<circle") != std::string::npos);
    CHECK(svg.find("<polyline") == std::string::npos);
    CHECK_THROWS(emit_plot(single, PlotKind::scaling_semilog, (dir / "bad.svg").string()));
    CHECK_THROWS(emit_plot(single, PlotKind::decay_curves, (dir / "bad.svg").string()));

    const SweepResult three = run(small_chain(), 1);
    emit_plot(three, PlotKind::fdt_line, (dir / "three.svg").string());
    const std::string line = slurp(dir / "three.svg");
    CHECK(line.find("<polyline") != std::string::npos);
    CHECK(line.find("slope (chi)") != std::string::npos);

    auto sc = parse("experiment = scaling\nmaster_seed = 2\nsweep.n_total = 5, 6, 7\nsweep.g_sb = 0.3\n");
    const SweepResult scaling = run(sc, 1);
    emit_plot(scaling, PlotKind::scaling_semilog, (dir / "scaling.svg").string());
    CHECK(slurp(dir / "scaling.svg").find("log scale") != std::string::npos);
    CHECK(parse_plot_kind("decay_curves") == PlotKind::decay_curves);
    CHECK_THROWS(default_plot_kind(ExperimentKind::correlators));
}

TEST_CASE("decay experiment overlays measurement and prediction") {
    auto c = parse("experiment = decay\nmaster_seed = 1\nrmt.n = 200\nsweep.g = 0.08\nsweep.beta = 0\n"
                   "decay.samples = 64\n");
    const SweepResult r = run(c, 1);
    REQUIRE(r.points.size() == 1);
    REQUIRE(r.points[0].curves.size() == 2);
    const fs::path dir = scratch("decay");
    const auto files = write_outputs(r, dir.string());
    CHECK(files.size() == 4);
    const std::string svg = slurp(dir / "decay.svg");
    CHECK(svg.find("stroke-dasharray") != std::string::npos);
    CHECK(slurp(dir / "decay_series.csv").find("sigma_z_probe") != std::string::npos);
}

}
