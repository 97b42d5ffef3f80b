#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "emcomm/experiment.hpp"
#include "emcomm/svg.hpp"

using namespace emcomm;
namespace fs = std::filesystem;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

std::string fresh_dir(const std::string& name) {
    const std::string dir = (fs::temp_directory_path() / name).string();
    fs::remove_all(dir);
    return dir;
}

ExperimentConfig tiny_config(const std::string& dir) {
    ExperimentConfig cfg;
    cfg.society.agent_count = 4;
    cfg.society.meaning_count = 3;
    cfg.society.signal_count = 3;
    cfg.society.alpha = 0.1;
    cfg.society.lambda = 0.02;
    cfg.society.certainty = 0.2;
    cfg.society.alignment = 1.0;
    cfg.society.seed = 5;
    cfg.duration = 5.0;
    cfg.cadence = 1.0;
    cfg.replicates = 2;
    cfg.jobs = 2;
    cfg.output_dir = dir;
    return cfg;
}

}  // namespace

TEST_CASE("minimal config gets the documented defaults") {
    const auto cfg = parse_config_text("duration = 100\nM = 6\nS = 4\n", "test");
    CHECK(cfg.society.agent_count == 20);
    CHECK(cfg.society.network.complete);
    CHECK(cfg.society.meaning_count == 6);
    CHECK(cfg.effective_cadence() == doctest::Approx(1.0));
    CHECK(cfg.replicates == 10);
}

TEST_CASE("out-of-range values are rejected with the field named") {
    CHECK_THROWS_WITH_AS(parse_config_text("C = 1.5\n", "test"),
                         doctest::Contains("C must lie in [0,1]"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(parse_config_text("N = 1\n", "test"), doctest::Contains("N must be >= 2"),
                         std::invalid_argument);
}

TEST_CASE("unknown keys and malformed lines carry line and column info") {
    try {
        parse_config_text("M = 6\nwibble = 3\n", "cfg.txt");
        FAIL("should have thrown");
    } catch (const std::runtime_error& e) {
        const std::string msg = e.what();
        CHECK(msg.find("cfg.txt:2:1") != std::string::npos);
        CHECK(msg.find("unknown key 'wibble'") != std::string::npos);
    }
    try {
        parse_config_text("M = 6\n  just words\n", "cfg.txt");
        FAIL("should have thrown");
    } catch (const std::runtime_error& e) {
        CHECK(std::string(e.what()).find("cfg.txt:2:3") != std::string::npos);
    }
    CHECK_THROWS_WITH_AS(parse_config_text("M = six\n", "cfg.txt"),
                         doctest::Contains("expected an integer"), std::runtime_error);
}

TEST_CASE("grid lists and edge networks parse") {
    const auto cfg = parse_config_text(
        "duration = 10\ngrid.alpha = 0.1, 0.2, 0.4\nnetwork = edges\nedges = 0>1; 1>0\nN = 2\n",
        "test");
    REQUIRE(cfg.grid.count("alpha") == 1);
    CHECK(cfg.grid.at("alpha").size() == 3);
    CHECK(!cfg.society.network.complete);
    REQUIRE(cfg.society.network.edges.size() == 2);
    CHECK(cfg.society.network.edges[0] == std::pair<int, int>{0, 1});

    CHECK_THROWS_WITH_AS(parse_config_text("grid.bogus = 1, 2\n", "test"),
                         doctest::Contains("not sweepable"), std::invalid_argument);
}

TEST_CASE("manifest rendering round-trips exactly") {
    ExperimentConfig cfg = tiny_config("unused");
    cfg.grid["alpha"] = {0.1, 0.25};
    cfg.preset.reset();
    const std::string manifest = render_manifest(cfg);
    const auto reloaded = parse_config_text(manifest, "manifest");
    CHECK(render_manifest(reloaded) == manifest);
    CHECK(config_hash(reloaded) == config_hash(cfg));
}

TEST_CASE("preset configs expand their pinned fields") {
    const auto cfg = parse_config_text("preset = fig9\n", "test");
    CHECK(cfg.society.meaning_count == 55);
    CHECK(cfg.society.lambda == doctest::Approx(0.01));
    REQUIRE(cfg.grid.count("S") == 1);
    CHECK(cfg.grid.at("S") == std::vector<double>{5.0, 11.0});
    CHECK_THROWS_AS(parse_config_text("preset = fig7\n", "test"), std::exception);
}

TEST_CASE("preset tables match their pinned parameter values") {
    ExperimentConfig base;
    base.society.seed = 1;
    base.output_dir = "unused";

    SUBCASE("fig5 and fig6: tight constraints") {
        for (const char* name : {"fig5", "fig6"}) {
            const auto points = expand_preset(name, base);
            const bool is_fig5 = std::string(name) == "fig5";
            CHECK(points.size() == (is_fig5 ? 6 : 3));
            std::vector<int> meanings;
            for (const auto& p : points) {
                CHECK(p.config.society.agent_count == 5);
                CHECK(p.config.society.lambda == doctest::Approx(0.01));
                CHECK(p.config.society.certainty == 1.0);
                CHECK(p.config.society.alignment == 1.0);
                CHECK(p.config.society.signal_count == 12);
                CHECK(!p.config.society.feedback);
                CHECK(p.config.duration == doctest::Approx(is_fig5 ? 1e6 : 2e6));
                if (is_fig5) {
                    CHECK((p.config.society.alpha == 0.05 || p.config.society.alpha == 0.01));
                } else {
                    CHECK(p.config.society.alpha == 0.01);
                }
                meanings.push_back(p.config.society.meaning_count);
            }
            for (int m : {14, 17, 36}) {
                CHECK(std::count(meanings.begin(), meanings.end(), m) == (is_fig5 ? 2 : 1));
            }
        }
    }

    SUBCASE("fig8: feedback sweep") {
        const auto points = expand_preset("fig8", base);
        CHECK(points.size() == 72);
        for (const auto& p : points) {
            CHECK(p.config.society.certainty == 0.0);
            CHECK(p.config.society.alignment == 1.0);
            CHECK(p.config.society.lambda == doctest::Approx(0.01));
            CHECK(p.config.society.signal_count == 12);
            CHECK(p.config.society.feedback);
            CHECK((p.config.society.meaning_count == 24 || p.config.society.meaning_count == 36 ||
                   p.config.society.meaning_count == 48));
            CHECK((p.config.society.agent_count == 20 || p.config.society.agent_count == 40));
        }
    }

    SUBCASE("fig9: no-feedback gain curve") {
        const auto points = expand_preset("fig9", base);
        REQUIRE(!points.empty());
        for (const auto& p : points) {
            CHECK(p.config.society.meaning_count == 55);
            CHECK(p.config.society.lambda == doctest::Approx(0.01));
            CHECK((p.config.society.signal_count == 5 || p.config.society.signal_count == 11));
            CHECK(!p.config.society.feedback);
            CHECK(p.config.society.agent_count == 20);
            // alpha was solved to land on a ratio grid point
            const double gamma = threshold_gamma_no_feedback(
                p.config.society.certainty, p.config.society.alignment, p.config.society.lambda,
                p.config.society.alpha, p.config.society.meaning_count);
            const double ratio = p.config.society.lambda * p.config.society.alpha / gamma;
            bool on_grid = false;
            for (double r : {0.1, 0.3, 0.5, 0.7}) {
                on_grid = on_grid || std::abs(ratio - r) < 1e-9;
            }
            CHECK(on_grid);
        }
    }

    SUBCASE("fig10: phase diagram grid") {
        const auto points = expand_preset("fig10", base);
        CHECK(points.size() == 36);
        for (const auto& p : points) {
            CHECK(p.config.society.meaning_count == 55);
            CHECK(p.config.society.signal_count == 11);
            CHECK(p.config.society.lambda == doctest::Approx(0.01));
            CHECK(p.config.society.alpha == doctest::Approx(0.05));
            CHECK(!p.config.society.feedback);
        }
    }
}

TEST_CASE("run_experiment writes schema-stable outputs deterministically") {
    const std::string dir_a = fresh_dir("emcomm_test_out_a");
    const std::string dir_b = fresh_dir("emcomm_test_out_b");
    ExperimentConfig cfg = tiny_config(dir_a);
    cfg.snapshot = true;
    cfg.log_interactions = true;
    cfg.replicates = 4;

    const auto result = run_experiment(cfg);
    CHECK(result.ok_count == 4);
    CHECK(fs::exists(dir_a + "/manifest.txt"));
    CHECK(fs::exists(dir_a + "/aggregate.csv"));
    for (int r = 0; r < 4; ++r) {
        char tag[8];
        std::snprintf(tag, sizeof(tag), "%03d", r);
        CHECK(fs::exists(dir_a + "/metrics_rep" + tag + ".csv"));
        CHECK(fs::exists(dir_a + "/snapshot_rep" + tag + ".txt"));
        CHECK(fs::exists(dir_a + "/interactions_rep" + tag + ".csv"));
    }

    const std::string metrics = slurp(dir_a + "/metrics_rep000.csv");
    CHECK(metrics.rfind("time,p_s,gain,gain_window,variability,dominant_count\n", 0) == 0);
    const std::string aggregate = slurp(dir_a + "/aggregate.csv");
    CHECK(aggregate.rfind("replicates,ok_replicates,g_window_mean,g_window_se,", 0) == 0);
    const std::string interactions = slurp(dir_a + "/interactions_rep000.csv");
    CHECK(interactions.rfind("step,time,signaller,receiver,topic,signal,interpretation,stored\n",
                             0) == 0);

    ExperimentConfig cfg_b = cfg;
    cfg_b.output_dir = dir_b;
    run_experiment(cfg_b);
    CHECK(slurp(dir_a + "/aggregate.csv") == slurp(dir_b + "/aggregate.csv"));
    CHECK(slurp(dir_a + "/metrics_rep002.csv") == slurp(dir_b + "/metrics_rep002.csv"));

    // manifest round trip: reload and rerun bit-identically
    ExperimentConfig reloaded = load_config(dir_a + "/manifest.txt");
    reloaded.output_dir = fresh_dir("emcomm_test_out_c");
    run_experiment(reloaded);
    CHECK(slurp(reloaded.output_dir + "/aggregate.csv") == slurp(dir_a + "/aggregate.csv"));

    fs::remove_all(dir_a);
    fs::remove_all(dir_b);
    fs::remove_all(reloaded.output_dir);
}

TEST_CASE("snapshots round trip through the text format") {
    const std::string dir = fresh_dir("emcomm_test_snap");
    ExperimentConfig cfg = tiny_config(dir);
    cfg.replicates = 1;
    cfg.snapshot = true;
    run_experiment(cfg);
    const auto snap = read_snapshot(dir + "/snapshot_rep000.txt");
    CHECK(snap.agent_count == 4);
    CHECK(snap.meaning_count == 3);
    CHECK(snap.signal_count == 3);
    CHECK(snap.clock == doctest::Approx(5.0));
    CHECK(snap.config_hash == config_hash(cfg));
    REQUIRE(snap.counts.size() == 4);
    for (const auto& table : snap.counts) {
        REQUIRE(table.size() == 9);
        for (double v : table) CHECK(v >= 0.0);
    }
    fs::remove_all(dir);
}

TEST_CASE("single-point sweep equals run_experiment") {
    const std::string dir = fresh_dir("emcomm_test_sweep1");
    ExperimentConfig cfg = tiny_config(dir);
    cfg.grid["alpha"] = {cfg.society.alpha};
    const auto rows = sweep(cfg);
    REQUIRE(rows.size() == 1);

    ExperimentConfig plain = cfg;
    plain.grid.clear();
    const auto direct = run_replicates(plain);
    CHECK(rows[0].g_window.mean == direct.g_window.mean);
    CHECK(rows[0].g_window.standard_error == direct.g_window.standard_error);
    CHECK(fs::exists(dir + "/sweep.csv"));
    const std::string csv = slurp(dir + "/sweep.csv");
    CHECK(csv.rfind("alpha,C,A,M,S,N,feedback,lambda,lambda_alpha,gamma,ratio,", 0) == 0);
    fs::remove_all(dir);
}

TEST_CASE("sweeps expand grids in canonical order and classify each point") {
    const std::string dir = fresh_dir("emcomm_test_sweep2");
    ExperimentConfig cfg = tiny_config(dir);
    cfg.society.feedback = true;
    cfg.replicates = 1;
    cfg.grid["alpha"] = {0.1, 0.4};
    cfg.grid["M"] = {3, 4};
    const auto rows = sweep(cfg);
    REQUIRE(rows.size() == 4);
    CHECK(rows[0].point.alpha == 0.1);
    CHECK(rows[0].point.meaning_count == 3);
    CHECK(rows[1].point.meaning_count == 4);
    CHECK(rows[2].point.alpha == 0.4);
    for (const auto& row : rows) {
        CHECK(row.gamma == doctest::Approx(1.0 / row.point.meaning_count));
        CHECK(row.ratio == doctest::Approx(row.lambda_alpha * row.point.meaning_count));
    }
    fs::remove_all(dir);
}

TEST_CASE("svg writers emit well-formed static charts") {
    const std::string dir = fresh_dir("emcomm_test_svg");
    fs::create_directories(dir);
    SvgSeries theory{"theory", {0.0, 0.5, 1.0}, {0.0, 0.6, 1.0}, true};
    SvgSeries points{"measured", {0.1, 0.9}, {0.2, 0.8}, false};
    write_line_chart(dir + "/line.svg", "gain", "ratio", "G", {theory, points});
    const std::string line = slurp(dir + "/line.svg");
    CHECK(line.find("<svg") != std::string::npos);
    CHECK(line.find("polyline") != std::string::npos);
    CHECK(line.find("circle") != std::string::npos);
    CHECK(line.find("</svg>") != std::string::npos);

    write_heatmap(dir + "/heat.svg", "phase", {"C=0.1", "C=0.2"}, {"A=0", "A=1"},
                  {{0.1, 0.9}, {0.2, 0.4}}, 0.0, 1.0);
    const std::string heat = slurp(dir + "/heat.svg");
    CHECK(heat.find("<svg") != std::string::npos);
    CHECK(heat.find("rect") != std::string::npos);
    fs::remove_all(dir);
}

TEST_CASE("budgets refuse oversized experiments with a step estimate") {
    ExperimentConfig cfg = tiny_config("unused_budget");
    cfg.max_total_steps = 10;
    try {
        run_replicates(cfg);
        FAIL("should have thrown");
    } catch (const std::runtime_error& e) {
        const std::string msg = e.what();
        CHECK(msg.find("budget exceeded") != std::string::npos);
        CHECK(msg.find("needs 40 steps") != std::string::npos);
    }
}

TEST_CASE("failed replicates are reported per replicate") {
    ExperimentConfig cfg = tiny_config("unused_fail");
    // interpretation scratch overflows nothing; instead force failure through
    // an unwritable output directory
    cfg.output_dir = "/proc/definitely_not_writable/x";
    CHECK_THROWS(run_experiment(cfg));
}
