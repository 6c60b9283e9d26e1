#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "irisim/irisim.h"

namespace {

const char* kConfig = R"({"frame": {"L": 4}, "snr_grid_db": [5, 60], "frames_per_point": 50, "seed": 3,
                          "schemes": ["TwoPathIRIC", "BaselineCFNC"], "workers": 1})";

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

struct Experiment {
    irisim_experiment* h = nullptr;
    explicit Experiment(const char* cfg) { REQUIRE(irisim_experiment_create(cfg, &h) == IRISIM_OK); }
    ~Experiment() { irisim_experiment_destroy(h); }
};

}  // namespace

TEST_CASE("create rejects bad configs with a message") {
    irisim_experiment* h = reinterpret_cast<irisim_experiment*>(1);
    CHECK(irisim_experiment_create("{\"snr_grid_db\": [1], \"oops\": 2}", &h) == IRISIM_ERR_CONFIG);
    CHECK(h == nullptr);
    CHECK(std::strlen(irisim_last_error()) > 0);
    CHECK(irisim_experiment_create("{", &h) == IRISIM_ERR_CONFIG);
    CHECK(irisim_experiment_create(nullptr, &h) == IRISIM_ERR_INVALID_ARGUMENT);
    CHECK(irisim_experiment_create("{}", nullptr) == IRISIM_ERR_INVALID_ARGUMENT);
    CHECK(irisim_experiment_create(R"({"snr_grid_db": [1], "frame": {"n_sources": 4}})", &h) == IRISIM_ERR_CONFIG);
    CHECK(irisim_experiment_create(R"({"snr_grid_db": [1], "frame": {"theta": [[1,0],[1,0]]}})", &h) ==
          IRISIM_ERR_INJECTIVITY);
    irisim_experiment_destroy(nullptr);
}

TEST_CASE("config json can be sized and read back") {
    Experiment e(kConfig);
    size_t needed = 0;
    CHECK(irisim_experiment_config_json(e.h, nullptr, 0, &needed) == IRISIM_OK);
    REQUIRE(needed > 1);
    std::vector<char> buf(needed);
    CHECK(irisim_experiment_config_json(e.h, buf.data(), buf.size(), &needed) == IRISIM_OK);
    const std::string s(buf.data());
    CHECK(s.size() + 1 == needed);
    CHECK(s.find("\"seed\": 3") != std::string::npos);

    CHECK(irisim_experiment_apply_overrides(e.h, R"({"seed": 9})") == IRISIM_OK);
    CHECK(irisim_experiment_apply_overrides(e.h, R"({"seed": "x"})") == IRISIM_ERR_CONFIG);
    buf.assign(4096, 0);
    CHECK(irisim_experiment_config_json(e.h, buf.data(), buf.size(), &needed) == IRISIM_OK);
    CHECK(std::string(buf.data()).find("\"seed\": 9") != std::string::npos);
}

TEST_CASE("run writes a csv and is repeatable") {
    const auto dir = std::filesystem::temp_directory_path() / "irisim_c_api";
    std::filesystem::create_directories(dir);
    const auto a = (dir / "a.csv").string();
    const auto b = (dir / "b.csv").string();
    Experiment e(kConfig);
    CHECK(irisim_experiment_run(e.h, IRISIM_RUN_BOTH, a.c_str()) == IRISIM_OK);
    CHECK(irisim_experiment_run(e.h, IRISIM_RUN_BOTH, b.c_str()) == IRISIM_OK);
    const auto text = slurp(a);
    CHECK(text == slurp(b));
    CHECK(text.rfind("scheme,channel,modulation", 0) == 0);
    std::size_t rows = 0;
    for (char c : text) rows += c == '\n';
    CHECK(rows == 1 + 8);

    CHECK(irisim_experiment_run(e.h, IRISIM_RUN_SIM, (dir / "no/such/dir/x.csv").string().c_str()) ==
          IRISIM_ERR_IO);
    CHECK(irisim_experiment_run(e.h, static_cast<irisim_run_mode>(7), a.c_str()) == IRISIM_ERR_INVALID_ARGUMENT);

    const auto log = (dir / "frame.jsonl").string();
    CHECK(irisim_experiment_write_frame_log(e.h, IRISIM_SCHEME_TWOPATH, 5, 0, log.c_str()) == IRISIM_OK);
    std::size_t lines = 0;
    for (char c : slurp(log)) lines += c == '\n';
    CHECK(lines == 1 + 5);
    std::filesystem::remove_all(dir);
}

TEST_CASE("bounds through the C API") {
    Experiment e(kConfig);
    irisim_bound_report r{};
    CHECK(irisim_experiment_bounds(e.h, 60, &r) == IRISIM_OK);
    CHECK(std::abs(r.t_new_lb - 1.0) < 1e-6);
    CHECK(std::abs(r.t_cfnc_lb - 0.5) < 1e-6);
    CHECK(r.t_new_lb_finite == doctest::Approx(4.0 / 5.0).epsilon(1e-6));
    CHECK(r.saturated == 0);
    CHECK(irisim_experiment_bounds(e.h, 5, &r) == IRISIM_OK);
    CHECK(r.p_e_rd > 0.0);
    CHECK(r.p_e_rd_mrc < r.p_e_rd);
    CHECK(irisim_experiment_bounds(nullptr, 5, &r) == IRISIM_ERR_INVALID_ARGUMENT);
}

TEST_CASE("pnc maps and q function") {
    double re = 0, im = 0;
    CHECK(irisim_pnc_f(IRISIM_BPSK, 2, 0, &re, &im) == IRISIM_OK);
    CHECK(re == -1);
    CHECK(irisim_pnc_f(IRISIM_QPSK, 2, -2, &re, &im) == IRISIM_OK);
    CHECK(re == -1);
    CHECK(im == -1);
    CHECK(irisim_pnc_g(IRISIM_QPSK, 1, 1, -1, -1, &re, &im) == IRISIM_OK);
    CHECK(re == 1);
    CHECK(im == 1);
    CHECK(irisim_pnc_f(IRISIM_BPSK, 1, 0, &re, &im) == IRISIM_ERR_DOMAIN);
    CHECK(irisim_pnc_f(IRISIM_BPSK, 0, 0, nullptr, nullptr) == IRISIM_ERR_INVALID_ARGUMENT);
    CHECK(irisim_q_function(0) == 0.5);
}

TEST_CASE("figures and metadata") {
    char path[256];
    CHECK(irisim_reproduce_figure("99", nullptr, nullptr, path, sizeof path) == IRISIM_ERR_UNKNOWN_FIGURE);
    CHECK(irisim_reproduce_figure(nullptr, nullptr, nullptr, path, sizeof path) == IRISIM_ERR_INVALID_ARGUMENT);
    CHECK(std::strlen(irisim_version()) > 0);
    CHECK(std::string(irisim_status_name(IRISIM_ERR_IO)) == "I/O error");
    CHECK(std::string(irisim_status_name(IRISIM_OK)) == "ok");
}
