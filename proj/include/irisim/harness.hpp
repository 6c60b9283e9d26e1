#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "irisim/analysis.hpp"
#include "irisim/protocol.hpp"

namespace irisim {

struct OutputPaths {
    std::string csv;       // empty: caller decides
    std::string manifest;
    std::string frame_log;
};

struct ExperimentConfig {
    /// frame.scheme is ignored; `schemes` lists what to run.
    FrameConfig frame;
    std::vector<Scheme> schemes{Scheme::TwoPathIRIC};
    std::vector<double> snr_grid_db;
    /// (delta_SR, delta_RD) added to every grid point.
    std::array<double, 2> snr_offsets_db{0.0, 0.0};
    std::size_t frames_per_point = 1000;
    std::optional<double> target_ci_halfwidth;
    std::uint64_t seed = 1;
    OutputPaths outputs;
    /// 0: one per hardware thread.
    unsigned workers = 0;
    std::size_t channel_samples = 20000;
    bool use_dmin = false;
    bool same_source_coefficient = false;

    void validate() const;
};

/// Parses a JSON document; unknown keys and bad values raise ConfigError.
ExperimentConfig parse_experiment_config(std::string_view json_text);
/// Applies a JSON object of overrides on top of `base`.
ExperimentConfig apply_overrides(const ExperimentConfig& base, std::string_view json_text);
std::string experiment_config_json(const ExperimentConfig& c);

struct ConfidenceInterval {
    double mean = 0.0;
    double halfwidth = 0.0;
    double lower = 0.0;
    double upper = 0.0;
};

/// 95% binomial interval; Wilson when p * n < 10.
ConfidenceInterval estimate_ci(std::size_t successes, std::size_t trials);

enum class RowSource { Sim, Theory };

/// One CSV row.
struct MetricsRow {
    Scheme scheme = Scheme::TwoPathIRIC;
    ChannelKind channel = ChannelKind::AWGN;
    Modulation modulation = Modulation::BPSK;
    std::size_t n_sources = 2;
    double snr_db = 0.0;
    double snr_sr_db = 0.0;
    double snr_rd_db = 0.0;
    std::size_t L = 0;
    std::size_t frames = 0;
    RowSource source = RowSource::Sim;
    double throughput_per_ts = 0.0;
    double throughput_per_source_ts = 0.0;
    double sep_sr = 0.0;
    double sep_rd = 0.0;
    double sep_e2e = 0.0;
    double ci_halfwidth = 0.0;
    std::uint64_t seed = 0;
    /// Not written to CSV.
    bool saturated = false;
    FrameScore score;
};

extern const std::array<std::string_view, 17> kCsvColumns;

void write_csv_header(std::ostream& os);
void write_csv_row(std::ostream& os, const MetricsRow& row);

using RowSink = std::function<void(const MetricsRow&)>;

/// Monte Carlo over the grid for every configured scheme.
std::vector<MetricsRow> run_sweep(const ExperimentConfig& config, const RowSink& sink = {});
/// Analysis bounds over the same grid.
std::vector<MetricsRow> run_bounds(const ExperimentConfig& config, const RowSink& sink = {});

/// Bounds at one grid point; point_index seeds the Rayleigh channel sampler.
BoundReport bounds_at(const ExperimentConfig& config, double snr_db, std::size_t point_index);

/// Simulates frames [first, last) at one grid point and returns the summed score.
FrameScore simulate_frames(const FrameContext& ctx, std::uint64_t seed, std::size_t point_index,
                           std::size_t first, std::size_t last, unsigned workers);

/// Frame log for a single frame, reproducing the stream run_sweep would use.
void write_frame_log_for(std::ostream& os, const ExperimentConfig& config, Scheme scheme, double snr_db,
                         std::size_t point_index, std::size_t frame_index);

enum class RunMode { Sim, Theory, Both };

/// Runs config in the given mode, writing one CSV (header included) to os.
std::vector<MetricsRow> run_to_csv(const ExperimentConfig& config, RunMode mode, std::ostream& os);

struct FigureJob {
    ExperimentConfig config;
    RunMode mode = RunMode::Both;
};

/// Canned configurations. Ids: 5, 6, 7, 8, 9, 10, 11.
std::vector<FigureJob> figure_plan(std::string_view id);

struct FigureOutput {
    std::string csv_path;
    std::string manifest_path;
    std::size_t rows = 0;
};

/// Runs the plan for `id` with JSON overrides (may be empty) applied to each
/// job, writing fig<id>.csv and fig<id>_manifest.json into out_dir.
FigureOutput reproduce_figure(std::string_view id, const std::string& out_dir, std::string_view overrides_json);

/// git describe string captured at configure time.
std::string_view build_git_describe();
std::string_view library_version();

/// IRISIM_OUT_DIR, or "." when unset.
std::string default_output_dir();

}  // namespace irisim
