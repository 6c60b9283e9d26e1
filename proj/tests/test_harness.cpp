#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "fixtures.hpp"
#include "irisim/errors.hpp"
#include "irisim/harness.hpp"
#include "json.hpp"

using namespace irisim;
using nlohmann::json;

namespace {

ExperimentConfig small_config() {
    return parse_experiment_config(R"({
        "frame": {"n_sources": 2, "L": 8, "modulation": "BPSK"},
        "schemes": ["TwoPathIRIC", "BaselineCFNC"],
        "snr_grid_db": [0, 10],
        "frames_per_point": 300,
        "seed": 77,
        "workers": 1
    })");
}

std::string csv_of(const ExperimentConfig& c, RunMode m) {
    std::ostringstream os;
    run_to_csv(c, m, os);
    return os.str();
}

std::vector<std::string> lines(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream is(s);
    std::string l;
    while (std::getline(is, l)) out.push_back(l);
    return out;
}

std::filesystem::path temp_dir(const std::string& name) {
    auto p = std::filesystem::temp_directory_path() / ("irisim_test_" + name);
    std::filesystem::remove_all(p);
    std::filesystem::create_directories(p);
    return p;
}

}  // namespace

TEST_CASE("confidence intervals") {
    const auto mid = estimate_ci(50, 100);
    CHECK(mid.mean == 0.5);
    CHECK(mid.halfwidth == doctest::Approx(1.96 * std::sqrt(0.25 / 100)));
    CHECK(mid.halfwidth == doctest::Approx(0.098).epsilon(1e-3));
    const auto none = estimate_ci(0, 200);
    CHECK(none.mean == 0.0);
    CHECK(none.upper > 0.0);
    CHECK(none.lower == doctest::Approx(0.0));
    const auto all = estimate_ci(200, 200);
    CHECK(all.mean == 1.0);
    CHECK(all.halfwidth >= 0.0);
    CHECK_THROWS(estimate_ci(0, 0));
}

TEST_CASE("config parsing") {
    const auto c = small_config();
    CHECK(c.frame.L == 8);
    CHECK(c.schemes.size() == 2);
    CHECK(c.seed == 77);

    CHECK_THROWS_AS(parse_experiment_config("{not json"), ConfigError);
    CHECK_THROWS_AS(parse_experiment_config(R"({"snr_grid_db": [1], "bogus": 1})"), ConfigError);
    CHECK_THROWS_AS(parse_experiment_config(R"({"snr_grid_db": []})"), ConfigError);
    CHECK_THROWS_AS(parse_experiment_config(R"({"snr_grid_db": [1], "frames_per_point": 0})"), ConfigError);
    CHECK_THROWS_AS(parse_experiment_config(R"({"snr_grid_db": [1], "frame": {"n_sources": 5}})"), ConfigError);
    CHECK_THROWS_AS(parse_experiment_config(R"({"snr_grid_db": [1], "frame": {"profile": {"kind": "AWGN", "x": 1}}})"),
                    ConfigError);
    CHECK_THROWS_AS(parse_experiment_config(R"({"snr_grid_db": [1], "scheme": "direct"})"), ConfigError);
    CHECK_THROWS_AS(parse_experiment_config(R"({"snr_grid_db": "ten"})"), ConfigError);
    CHECK_THROWS_AS(parse_experiment_config(R"({"snr_grid_db": [1], "channel_samples": 10, "frame": {"profile": {"kind": "Rayleigh"}}})"), ConfigError);
    CHECK_THROWS_AS(parse_experiment_config(R"({"snr_grid_db": [1], "frame": {"theta": [[1, 0], [1, 0]]}})"),
                    InjectivityViolation);
}

TEST_CASE("config round trip and overrides") {
    const auto c = small_config();
    const auto again = parse_experiment_config(experiment_config_json(c));
    CHECK(experiment_config_json(again) == experiment_config_json(c));

    const auto o = apply_overrides(c, R"({"seed": 5, "frame": {"L": 3}, "snr_offsets_db": [10, 0]})");
    CHECK(o.seed == 5);
    CHECK(o.frame.L == 3);
    CHECK(o.frame.n_sources == 2);
    CHECK(o.snr_offsets_db[0] == 10);
    CHECK_THROWS_AS(apply_overrides(c, R"({"nope": 1})"), ConfigError);
    CHECK_THROWS_AS(apply_overrides(c, "[1]"), ConfigError);

    const auto three = apply_overrides(c, R"({"frame": {"n_sources": 3}})");
    CHECK(three.frame.n_sources == 3);
}

TEST_CASE("csv header is fixed") {
    std::ostringstream os;
    write_csv_header(os);
    CHECK(os.str() ==
          "scheme,channel,modulation,n_sources,snr_db,snr_sr_db,snr_rd_db,L,frames,source,throughput_per_ts,"
          "throughput_per_source_ts,sep_sr,sep_rd,sep_e2e,ci_halfwidth,seed\n");
}

TEST_CASE("sweep rows are consistent") {
    const auto c = small_config();
    const auto rows = run_sweep(c);
    REQUIRE(rows.size() == 4);
    for (const auto& r : rows) {
        CHECK(r.source == RowSource::Sim);
        CHECK(r.frames == 300);
        CHECK(r.throughput_per_ts == doctest::Approx(2 * r.throughput_per_source_ts));
        CHECK(r.ci_halfwidth >= 0.0);
        for (double p : {r.sep_sr, r.sep_rd, r.sep_e2e}) {
            CHECK(p >= 0.0);
            CHECK(p <= 1.0);
        }
        if (r.scheme == Scheme::TwoPathIRIC)
            CHECK(r.throughput_per_source_ts <= 8.0 / 9.0);
        else
            CHECK(r.throughput_per_source_ts <= 0.5);
    }
}

TEST_CASE("offsets shift the link SNRs") {
    auto c = small_config();
    c.snr_offsets_db = {10, 0};
    c.frames_per_point = 10;
    const auto rows = run_sweep(c);
    CHECK(rows[0].snr_sr_db == doctest::Approx(rows[0].snr_db + 10));
    CHECK(rows[0].snr_rd_db == doctest::Approx(rows[0].snr_db));
}

TEST_CASE("zero noise gives exact throughput") {
    const auto ctx = fixtures::zero_noise_context(Modulation::BPSK, 16);
    const auto sc = simulate_frames(ctx, 3, 0, 0, 100, 1);
    CHECK(sc.slots == 1700);
    CHECK(sc.successes == 3200);
    CHECK(static_cast<double>(sc.successes) / sc.slots == doctest::Approx(2.0 * 16 / 17));
    CHECK(estimate_ci(sc.successes, sc.symbols).halfwidth == 0.0);
}

TEST_CASE("results do not depend on the worker count") {
    auto c = small_config();
    const auto one = csv_of(c, RunMode::Sim);
    c.workers = 3;
    CHECK(csv_of(c, RunMode::Sim) == one);
    c.workers = 1;
    CHECK(csv_of(c, RunMode::Sim) == one);

    const auto ctx = fixtures::zero_noise_context(Modulation::QPSK, 4);
    auto noisy_cfg = ctx.config();
    noisy_cfg.profile = FadingProfile::awgn(2, 0.5, 0.5);
    const FrameContext noisy(noisy_cfg);
    const auto a = simulate_frames(noisy, 1, 2, 0, 500, 1);
    const auto b = simulate_frames(noisy, 1, 2, 0, 500, 4);
    CHECK(a.successes == b.successes);
    CHECK(a.sr_errors == b.sr_errors);
    CHECK(a.rd_errors == b.rd_errors);
}

TEST_CASE("adaptive stopping") {
    auto c = small_config();
    c.snr_grid_db = {5};
    c.schemes = {Scheme::TwoPathIRIC};
    c.frames_per_point = 20;
    c.target_ci_halfwidth = 0.01;
    const auto rows = run_sweep(c);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].frames > 20);
    CHECK(rows[0].frames <= 2000);
    CHECK(rows[0].ci_halfwidth <= 0.01 + 1e-12);
}

TEST_CASE("theory rows") {
    auto c = small_config();
    c.snr_grid_db = {60};
    const auto rows = run_bounds(c);
    REQUIRE(rows.size() == 2);
    for (const auto& r : rows) {
        CHECK(r.source == RowSource::Theory);
        if (r.scheme == Scheme::TwoPathIRIC)
            CHECK(r.throughput_per_source_ts == doctest::Approx(8.0 / 9.0).epsilon(1e-6));
        else
            CHECK(std::abs(r.throughput_per_source_ts - 0.5) < 1e-6);
    }
    const auto rep = bounds_at(c, 60, 0);
    CHECK(std::abs(rep.T_new_lb - 1.0) < 1e-6);
    CHECK(std::abs(rep.T_cfnc_lb - 0.5) < 1e-6);
}

TEST_CASE("csv output has one row per scheme and point") {
    const auto c = small_config();
    const auto text = csv_of(c, RunMode::Both);
    const auto ls = lines(text);
    REQUIRE(ls.size() == 1 + 8);
    for (std::size_t i = 1; i < ls.size(); ++i) {
        std::size_t commas = 0;
        for (char ch : ls[i]) commas += ch == ',';
        CHECK(commas == 16);
    }
    CHECK(ls[1].rfind("TwoPathIRIC,AWGN,BPSK,2,0,", 0) == 0);
    CHECK(ls[1].find(",sim,") != std::string::npos);
    CHECK(ls.back().find(",theory,") != std::string::npos);
    CHECK(csv_of(c, RunMode::Both) == text);
}

TEST_CASE("frame log for a grid point") {
    const auto c = small_config();
    std::ostringstream os;
    write_frame_log_for(os, c, Scheme::BaselineCFNC, 10, 1, 4);
    const auto ls = lines(os.str());
    REQUIRE(ls.size() == 1 + 16);
    CHECK(json::parse(ls[0])["scheme"] == "BaselineCFNC");
}

TEST_CASE("figure plans") {
    for (const char* id : {"5", "6", "7", "8", "9", "10", "11"}) CHECK_FALSE(figure_plan(id).empty());
    CHECK_THROWS_AS(figure_plan("12"), UnknownFigure);
    const auto p5 = figure_plan("5");
    CHECK(p5[0].config.snr_grid_db.front() == -5);
    CHECK(p5[0].config.snr_grid_db.back() == 30);
    CHECK(p5[0].config.schemes.size() == 2);
    const auto p6 = figure_plan("6");
    CHECK(p6[0].config.frame.n_sources == 3);
    const auto p8 = figure_plan("8");
    REQUIRE(p8.size() == 3);
    CHECK(p8[0].config.snr_offsets_db == std::array<double, 2>{10, 0});
    CHECK(p8[1].config.snr_offsets_db == std::array<double, 2>{0, 10});
    CHECK(p8[2].config.snr_offsets_db == std::array<double, 2>{0, 0});
    const auto p11 = figure_plan("11");
    REQUIRE(p11.size() == 2);
    CHECK(p11[0].config.frame.modulation == Modulation::QPSK);
    CHECK(figure_plan("7")[0].config.frame.profile.kind == ChannelKind::Rayleigh);
}

TEST_CASE("reproduce a figure with reduced work") {
    const auto dir = temp_dir("fig8");
    const auto out = reproduce_figure("8", dir.string(), R"({"frames_per_point": 20, "snr_grid_db": [0, 10]})");
    CHECK(std::filesystem::exists(out.csv_path));
    CHECK(std::filesystem::exists(out.manifest_path));
    CHECK(out.rows == 6);
    std::ifstream in(out.manifest_path);
    const auto m = json::parse(in);
    CHECK(m["figure"] == "8");
    CHECK(m["jobs"].size() == 3);
    CHECK(m["jobs"][0]["config"]["seed"] == 20240501);
    CHECK(m.contains("git_describe"));
    CHECK(m["columns"].size() == 17);
    CHECK_THROWS_AS(reproduce_figure("4", dir.string(), ""), UnknownFigure);
    std::filesystem::remove_all(dir);
}
