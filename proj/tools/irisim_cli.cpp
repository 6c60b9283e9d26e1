// irisim command-line front end. Talks to the library only through irisim.h.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "irisim/irisim.h"
#include "json.hpp"

using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;

int exit_code_for(irisim_status s) {
    switch (s) {
        case IRISIM_OK: return kExitOk;
        case IRISIM_ERR_IO: return kExitIo;
        case IRISIM_ERR_INTERNAL: return kExitInternal;
        default: return kExitConfig;
    }
}

int report(irisim_status s) {
    if (s != IRISIM_OK) std::fprintf(stderr, "irisim: %s: %s\n", irisim_status_name(s), irisim_last_error());
    return exit_code_for(s);
}

struct CommonOptions {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::vector<double> snr;
    std::optional<std::size_t> frames;
    std::vector<std::string> schemes;
    std::string channel;
    std::string modulation;
    std::optional<std::size_t> sources;
    std::optional<std::size_t> L;
    std::optional<int> theta_row;
    std::optional<double> offset_sr;
    std::optional<double> offset_rd;
    std::optional<unsigned> workers;
    std::optional<std::size_t> channel_samples;
    std::optional<double> target_ci;
    bool use_dmin = false;
    std::string out;
    std::string frame_log;
    std::uint64_t frame_index = 0;
};

void add_common(CLI::App* cmd, CommonOptions& o) {
    cmd->add_option("-c,--config", o.config_path, "JSON experiment configuration");
    cmd->add_option("--seed", o.seed, "Master seed");
    cmd->add_option("--snr", o.snr, "SNR grid in dB (repeatable)")->delimiter(',');
    cmd->add_option("--frames", o.frames, "Frames per SNR point");
    cmd->add_option("--scheme", o.schemes, "TwoPathIRIC and/or BaselineCFNC")->delimiter(',');
    cmd->add_option("--channel", o.channel, "AWGN or Rayleigh");
    cmd->add_option("--modulation", o.modulation, "BPSK or QPSK");
    cmd->add_option("--sources", o.sources, "Number of sources (2 or 3)");
    cmd->add_option("-L,--length", o.L, "Symbols per source per frame");
    cmd->add_option("--theta-row", o.theta_row, "Vandermonde row of the precoder");
    cmd->add_option("--offset-sr", o.offset_sr, "dB added to the S-R SNR");
    cmd->add_option("--offset-rd", o.offset_rd, "dB added to the R-D SNR");
    cmd->add_option("--workers", o.workers, "Worker threads (0: all cores)");
    cmd->add_option("--channel-samples", o.channel_samples, "Channel draws for Rayleigh S-R bounds");
    cmd->add_option("--target-ci", o.target_ci, "Stop early once the CI half-width drops below this");
    cmd->add_flag("--dmin", o.use_dmin, "Minimum-distance simplification for Rayleigh S-R bounds");
    cmd->add_option("-o,--out", o.out, "CSV output path (default: stdout)");
}

json read_config_file(const std::string& path, int& code) {
    std::ifstream in(path);
    if (!in) {
        std::fprintf(stderr, "irisim: cannot read config '%s'\n", path.c_str());
        code = kExitIo;
        return {};
    }
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        std::fprintf(stderr, "irisim: invalid JSON in '%s': %s\n", path.c_str(), e.what());
        code = kExitConfig;
        return {};
    }
}

json flag_overrides(const CommonOptions& o) {
    json j = json::object();
    json frame = json::object();
    json profile = json::object();
    if (o.seed) j["seed"] = *o.seed;
    if (!o.snr.empty()) j["snr_grid_db"] = o.snr;
    if (o.frames) j["frames_per_point"] = *o.frames;
    if (!o.schemes.empty()) {
        j["schemes"] = o.schemes;
        j["scheme"] = nullptr;
    }
    if (o.offset_sr || o.offset_rd) j["snr_offsets_db"] = {o.offset_sr.value_or(0.0), o.offset_rd.value_or(0.0)};
    if (o.workers) j["workers"] = *o.workers;
    if (o.channel_samples) j["channel_samples"] = *o.channel_samples;
    if (o.target_ci) j["target_ci_halfwidth"] = *o.target_ci;
    if (o.use_dmin) j["use_dmin"] = true;
    if (!o.channel.empty()) profile["kind"] = o.channel;
    if (!o.modulation.empty()) frame["modulation"] = o.modulation;
    if (o.sources) frame["n_sources"] = *o.sources;
    if (o.L) frame["L"] = *o.L;
    if (o.theta_row) frame["theta_row"] = *o.theta_row;
    if (!profile.empty()) frame["profile"] = profile;
    if (!frame.empty()) j["frame"] = frame;
    return j;
}

int run_experiment(const CommonOptions& o, irisim_run_mode mode) {
    int code = kExitOk;
    json cfg = json::object();
    if (!o.config_path.empty()) {
        cfg = read_config_file(o.config_path, code);
        if (code != kExitOk) return code;
    }
    const json flags = flag_overrides(o);
    // Sub-objects merge key by key so flags only touch what they name.
    cfg.merge_patch(flags);

    irisim_experiment* exp = nullptr;
    irisim_status s = irisim_experiment_create(cfg.dump().c_str(), &exp);
    if (s != IRISIM_OK) return report(s);

    std::string out = o.out;
    if (out.empty() && cfg.contains("outputs") && cfg["outputs"].contains("csv"))
        out = cfg["outputs"]["csv"].get<std::string>();
    s = irisim_experiment_run(exp, mode, out.empty() ? nullptr : out.c_str());
    if (s == IRISIM_OK && !o.frame_log.empty()) {
        const auto scheme = !o.schemes.empty() && o.schemes.front().find("aseline") != std::string::npos
                                ? IRISIM_SCHEME_BASELINE
                                : IRISIM_SCHEME_TWOPATH;
        const double snr = cfg["snr_grid_db"].is_array() ? cfg["snr_grid_db"].front().get<double>()
                                                         : cfg["snr_grid_db"].get<double>();
        s = irisim_experiment_write_frame_log(exp, scheme, snr, o.frame_index, o.frame_log.c_str());
    }
    irisim_experiment_destroy(exp);
    return report(s);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"irisim: two-path relay IRI cancellation simulator"};
    app.set_version_flag("--version", std::string(irisim_version()));
    app.require_subcommand(1);

    CommonOptions sim_opt, bounds_opt, sweep_opt;
    auto* sim = app.add_subcommand("simulate", "Monte Carlo throughput and SEP over an SNR grid");
    add_common(sim, sim_opt);
    sim->add_option("--frame-log", sim_opt.frame_log, "Also write the log of one frame (first SNR point)");
    sim->add_option("--frame-index", sim_opt.frame_index, "Frame index for --frame-log");

    auto* bounds = app.add_subcommand("bounds", "Analytical SEP and throughput bounds over an SNR grid");
    add_common(bounds, bounds_opt);

    auto* sweep = app.add_subcommand("sweep", "Simulation and bounds in one CSV");
    add_common(sweep, sweep_opt);

    std::string figure;
    std::string out_dir;
    std::optional<std::uint64_t> fig_seed;
    std::optional<std::size_t> fig_frames;
    std::vector<double> fig_snr;
    std::optional<unsigned> fig_workers;
    std::optional<std::size_t> fig_samples;
    auto* fig = app.add_subcommand("reproduce-figure", "Run the canned configuration for a figure");
    fig->add_option("figure,--figure", figure, "Figure id: 5, 6, 7, 8, 9, 10 or 11")->required();
    fig->add_option("--out-dir", out_dir, "Output directory (default: $IRISIM_OUT_DIR or .)");
    fig->add_option("--seed", fig_seed, "Master seed");
    fig->add_option("--frames", fig_frames, "Frames per SNR point");
    fig->add_option("--snr", fig_snr, "SNR grid in dB")->delimiter(',');
    fig->add_option("--workers", fig_workers, "Worker threads (0: all cores)");
    fig->add_option("--channel-samples", fig_samples, "Channel draws for Rayleigh S-R bounds");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitConfig;
    }

    if (*sim) return run_experiment(sim_opt, IRISIM_RUN_SIM);
    if (*bounds) return run_experiment(bounds_opt, IRISIM_RUN_THEORY);
    if (*sweep) return run_experiment(sweep_opt, IRISIM_RUN_BOTH);

    json overrides = json::object();
    if (fig_seed) overrides["seed"] = *fig_seed;
    if (fig_frames) overrides["frames_per_point"] = *fig_frames;
    if (!fig_snr.empty()) overrides["snr_grid_db"] = fig_snr;
    if (fig_workers) overrides["workers"] = *fig_workers;
    if (fig_samples) overrides["channel_samples"] = *fig_samples;
    char csv_path[4096] = {0};
    const irisim_status s = irisim_reproduce_figure(figure.c_str(), out_dir.empty() ? nullptr : out_dir.c_str(),
                                                    overrides.dump().c_str(), csv_path, sizeof csv_path);
    if (s == IRISIM_OK) std::printf("%s\n", csv_path);
    return report(s);
}
