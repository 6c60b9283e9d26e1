#include "irisim/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <thread>

#include "irisim/errors.hpp"
#include "json.hpp"

#ifndef IRISIM_GIT_DESCRIBE
#define IRISIM_GIT_DESCRIBE "unknown"
#endif
#ifndef IRISIM_VERSION
#define IRISIM_VERSION "0.0.0"
#endif

namespace irisim {

using nlohmann::json;

std::string_view build_git_describe() { return IRISIM_GIT_DESCRIBE; }
std::string_view library_version() { return IRISIM_VERSION; }

std::string default_output_dir() {
    const char* env = std::getenv("IRISIM_OUT_DIR");
    return env && *env ? std::string(env) : std::string(".");
}

void ExperimentConfig::validate() const {
    frame.validate();
    // Builds the precoder and constellations so injectivity problems surface here.
    (void)FrameContext(frame);
    if (schemes.empty()) throw ConfigError("at least one scheme is required");
    if (snr_grid_db.empty()) throw ConfigError("snr_grid_db must not be empty");
    for (double s : snr_grid_db)
        if (!std::isfinite(s)) throw ConfigError("snr_grid_db entries must be finite");
    if (frames_per_point < 1) throw ConfigError("frames_per_point must be >= 1");
    if (target_ci_halfwidth && !(*target_ci_halfwidth > 0.0))
        throw ConfigError("target_ci_halfwidth must be > 0");
    if (frame.profile.kind == ChannelKind::Rayleigh && channel_samples < kMinChannelSamples)
        throw ConfigError("channel_samples must be >= " + std::to_string(kMinChannelSamples));
}

// ---------------------------------------------------------------- JSON config

namespace {

void reject_unknown(const json& j, std::initializer_list<std::string_view> known, std::string_view where) {
    for (auto it = j.begin(); it != j.end(); ++it)
        if (std::find(known.begin(), known.end(), it.key()) == known.end())
            throw ConfigError("unknown key '" + it.key() + "' in " + std::string(where));
}

template <class T>
T get_as(const json& j, std::string_view name) {
    try {
        return j.get<T>();
    } catch (const json::exception&) {
        throw ConfigError("bad value for '" + std::string(name) + "': " + j.dump());
    }
}

std::size_t get_count(const json& j, std::string_view name) {
    if (!j.is_number_integer() || j.get<long long>() < 0)
        throw ConfigError("'" + std::string(name) + "' must be a non-negative integer");
    return j.get<std::size_t>();
}

void parse_profile(const json& j, FadingProfile& p, bool& sr_given) {
    if (!j.is_object()) throw ConfigError("frame.profile must be an object");
    reject_unknown(j, {"kind", "sigma2_SR", "sigma2_RR", "sigma2_RD"}, "frame.profile");
    if (j.contains("kind")) p.kind = channel_kind_from_string(get_as<std::string>(j["kind"], "kind"));
    if (j.contains("sigma2_SR")) {
        p.sigma2_sr = get_as<std::vector<std::array<double, 2>>>(j["sigma2_SR"], "sigma2_SR");
        sr_given = true;
    }
    if (j.contains("sigma2_RR")) p.sigma2_rr = get_as<double>(j["sigma2_RR"], "sigma2_RR");
    if (j.contains("sigma2_RD")) p.sigma2_rd = get_as<std::array<double, 2>>(j["sigma2_RD"], "sigma2_RD");
}

void parse_frame(const json& j, FrameConfig& f, bool& sr_given) {
    if (!j.is_object()) throw ConfigError("frame must be an object");
    reject_unknown(j, {"n_sources", "L", "modulation", "theta_row", "theta", "profile"}, "frame");
    if (j.contains("n_sources")) f.n_sources = get_count(j["n_sources"], "n_sources");
    if (j.contains("L")) f.L = get_count(j["L"], "L");
    if (j.contains("modulation")) f.modulation = modulation_from_string(get_as<std::string>(j["modulation"], "modulation"));
    if (j.contains("theta_row")) f.theta_row = get_as<int>(j["theta_row"], "theta_row");
    if (j.contains("theta") && !j["theta"].is_null()) {
        const auto raw = get_as<std::vector<std::array<double, 2>>>(j["theta"], "theta");
        std::vector<cplx> t;
        for (const auto& v : raw) t.emplace_back(v[0], v[1]);
        f.custom_theta = std::move(t);
    }
    if (j.contains("profile")) parse_profile(j["profile"], f.profile, sr_given);
}

std::vector<Scheme> parse_schemes(const json& j) {
    std::vector<Scheme> out;
    if (j.is_string()) {
        out.push_back(scheme_from_string(j.get<std::string>()));
    } else if (j.is_array()) {
        for (const auto& e : j) out.push_back(scheme_from_string(get_as<std::string>(e, "schemes")));
    } else {
        throw ConfigError("schemes must be a string or an array of strings");
    }
    return out;
}

ExperimentConfig from_json(const json& j) {
    if (!j.is_object()) throw ConfigError("experiment config must be a JSON object");
    reject_unknown(j,
                   {"frame", "schemes", "scheme", "snr_grid_db", "snr_offsets_db", "frames_per_point",
                    "target_ci_halfwidth", "seed", "outputs", "workers", "channel_samples", "use_dmin",
                    "same_source_coefficient"},
                   "config");
    ExperimentConfig c;
    bool sr_given = false;
    if (j.contains("frame")) parse_frame(j["frame"], c.frame, sr_given);
    if (!sr_given) c.frame.profile.sigma2_sr.assign(c.frame.n_sources, {1.0, 1.0});
    if (j.contains("schemes")) c.schemes = parse_schemes(j["schemes"]);
    if (j.contains("scheme")) c.schemes = parse_schemes(j["scheme"]);
    if (j.contains("snr_grid_db")) {
        const auto& g = j["snr_grid_db"];
        c.snr_grid_db = g.is_number() ? std::vector<double>{g.get<double>()} : get_as<std::vector<double>>(g, "snr_grid_db");
    }
    if (j.contains("snr_offsets_db")) c.snr_offsets_db = get_as<std::array<double, 2>>(j["snr_offsets_db"], "snr_offsets_db");
    if (j.contains("frames_per_point")) c.frames_per_point = get_count(j["frames_per_point"], "frames_per_point");
    if (j.contains("target_ci_halfwidth") && !j["target_ci_halfwidth"].is_null())
        c.target_ci_halfwidth = get_as<double>(j["target_ci_halfwidth"], "target_ci_halfwidth");
    if (j.contains("seed")) {
        if (!j["seed"].is_number_integer()) throw ConfigError("seed must be an integer");
        c.seed = j["seed"].is_number_unsigned() ? j["seed"].get<std::uint64_t>()
                                                : static_cast<std::uint64_t>(j["seed"].get<std::int64_t>());
    }
    if (j.contains("outputs")) {
        const auto& o = j["outputs"];
        if (!o.is_object()) throw ConfigError("outputs must be an object");
        reject_unknown(o, {"csv", "manifest", "frame_log"}, "outputs");
        if (o.contains("csv")) c.outputs.csv = get_as<std::string>(o["csv"], "outputs.csv");
        if (o.contains("manifest")) c.outputs.manifest = get_as<std::string>(o["manifest"], "outputs.manifest");
        if (o.contains("frame_log")) c.outputs.frame_log = get_as<std::string>(o["frame_log"], "outputs.frame_log");
    }
    if (j.contains("workers")) c.workers = static_cast<unsigned>(get_count(j["workers"], "workers"));
    if (j.contains("channel_samples")) c.channel_samples = get_count(j["channel_samples"], "channel_samples");
    if (j.contains("use_dmin")) c.use_dmin = get_as<bool>(j["use_dmin"], "use_dmin");
    if (j.contains("same_source_coefficient"))
        c.same_source_coefficient = get_as<bool>(j["same_source_coefficient"], "same_source_coefficient");
    c.validate();
    return c;
}

json to_json(const ExperimentConfig& c) {
    json profile{{"kind", std::string(to_string(c.frame.profile.kind))},
                 {"sigma2_RR", c.frame.profile.sigma2_rr},
                 {"sigma2_RD", c.frame.profile.sigma2_rd}};
    const bool unit_sr = std::all_of(c.frame.profile.sigma2_sr.begin(), c.frame.profile.sigma2_sr.end(),
                                     [](const auto& v) { return v[0] == 1.0 && v[1] == 1.0; });
    if (!unit_sr) profile["sigma2_SR"] = c.frame.profile.sigma2_sr;
    json frame{{"n_sources", c.frame.n_sources},
               {"L", c.frame.L},
               {"modulation", std::string(to_string(c.frame.modulation))},
               {"theta_row", c.frame.theta_row},
               {"profile", profile}};
    if (c.frame.custom_theta) {
        json t = json::array();
        for (const auto& v : *c.frame.custom_theta) t.push_back({v.real(), v.imag()});
        frame["theta"] = t;
    }
    json schemes = json::array();
    for (auto s : c.schemes) schemes.push_back(std::string(to_string(s)));
    json j{{"frame", frame},
           {"schemes", schemes},
           {"snr_grid_db", c.snr_grid_db},
           {"snr_offsets_db", c.snr_offsets_db},
           {"frames_per_point", c.frames_per_point},
           {"target_ci_halfwidth", c.target_ci_halfwidth ? json(*c.target_ci_halfwidth) : json(nullptr)},
           {"seed", c.seed},
           {"workers", c.workers},
           {"channel_samples", c.channel_samples},
           {"use_dmin", c.use_dmin},
           {"same_source_coefficient", c.same_source_coefficient}};
    json outputs = json::object();
    if (!c.outputs.csv.empty()) outputs["csv"] = c.outputs.csv;
    if (!c.outputs.manifest.empty()) outputs["manifest"] = c.outputs.manifest;
    if (!c.outputs.frame_log.empty()) outputs["frame_log"] = c.outputs.frame_log;
    if (!outputs.empty()) j["outputs"] = outputs;
    return j;
}

json parse_text(std::string_view text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("invalid JSON: ") + e.what());
    }
}

}  // namespace

ExperimentConfig parse_experiment_config(std::string_view json_text) { return from_json(parse_text(json_text)); }

ExperimentConfig apply_overrides(const ExperimentConfig& base, std::string_view json_text) {
    if (json_text.empty()) return base;
    const json patch = parse_text(json_text);
    if (!patch.is_object()) throw ConfigError("overrides must be a JSON object");
    json merged = to_json(base);
    // A changed source count invalidates per-source variances from the base.
    if (patch.contains("frame") && patch["frame"].contains("n_sources") &&
        !(patch["frame"].contains("profile") && patch["frame"]["profile"].contains("sigma2_SR")) &&
        merged["frame"]["profile"].contains("sigma2_SR"))
        merged["frame"]["profile"].erase("sigma2_SR");
    merged.merge_patch(patch);
    return from_json(merged);
}

std::string experiment_config_json(const ExperimentConfig& c) { return to_json(c).dump(2); }

// ------------------------------------------------------------------ statistics

ConfidenceInterval estimate_ci(std::size_t successes, std::size_t trials) {
    if (trials == 0) throw DomainError("confidence interval needs at least one trial");
    if (successes > trials) throw DomainError("successes exceed trials");
    constexpr double z = 1.96;
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(successes) / n;
    ConfidenceInterval ci;
    ci.mean = p;
    if (p * n < 10.0) {
        const double z2 = z * z;
        const double denom = 1.0 + z2 / n;
        const double centre = (p + z2 / (2.0 * n)) / denom;
        const double half = z / denom * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n));
        ci.lower = std::max(0.0, centre - half);
        ci.upper = std::min(1.0, centre + half);
        ci.halfwidth = half;
    } else {
        ci.halfwidth = z * std::sqrt(p * (1.0 - p) / n);
        ci.lower = std::max(0.0, p - ci.halfwidth);
        ci.upper = std::min(1.0, p + ci.halfwidth);
    }
    return ci;
}

// ------------------------------------------------------------------------ CSV

const std::array<std::string_view, 17> kCsvColumns{
    "scheme",     "channel", "modulation", "n_sources",         "snr_db",
    "snr_sr_db",  "snr_rd_db", "L",        "frames",            "source",
    "throughput_per_ts", "throughput_per_source_ts", "sep_sr", "sep_rd", "sep_e2e",
    "ci_halfwidth", "seed"};

void write_csv_header(std::ostream& os) {
    for (std::size_t i = 0; i < kCsvColumns.size(); ++i) os << (i ? "," : "") << kCsvColumns[i];
    os << '\n';
}

namespace {

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v == 0.0 ? 0.0 : v);
    return buf;
}

}  // namespace

void write_csv_row(std::ostream& os, const MetricsRow& r) {
    os << to_string(r.scheme) << ',' << to_string(r.channel) << ',' << to_string(r.modulation) << ','
       << r.n_sources << ',' << num(r.snr_db) << ',' << num(r.snr_sr_db) << ',' << num(r.snr_rd_db) << ','
       << r.L << ',' << r.frames << ',' << (r.source == RowSource::Sim ? "sim" : "theory") << ','
       << num(r.throughput_per_ts) << ',' << num(r.throughput_per_source_ts) << ',' << num(r.sep_sr) << ','
       << num(r.sep_rd) << ',' << num(r.sep_e2e) << ',' << num(r.ci_halfwidth) << ',' << r.seed << '\n';
}

// ------------------------------------------------------------------ simulation

namespace {

constexpr std::size_t kFramesPerChunk = 64;

unsigned resolve_workers(unsigned w) {
    if (w != 0) return w;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

FrameConfig point_frame(const ExperimentConfig& c, Scheme scheme, double snr_db) {
    FrameConfig f = c.frame;
    f.scheme = scheme;
    f.profile.n0_sr = snr_db_to_n0(snr_db + c.snr_offsets_db[0]);
    f.profile.n0_rd = snr_db_to_n0(snr_db + c.snr_offsets_db[1]);
    return f;
}

MetricsRow row_base(const ExperimentConfig& c, Scheme scheme, double snr_db) {
    MetricsRow r;
    r.scheme = scheme;
    r.channel = c.frame.profile.kind;
    r.modulation = c.frame.modulation;
    r.n_sources = c.frame.n_sources;
    r.snr_db = snr_db;
    r.snr_sr_db = snr_db + c.snr_offsets_db[0];
    r.snr_rd_db = snr_db + c.snr_offsets_db[1];
    r.L = c.frame.L;
    r.seed = c.seed;
    return r;
}

double ratio(std::size_t num, std::size_t den) {
    return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

void fill_sim(MetricsRow& r, const FrameScore& s) {
    const double per_source_slots = static_cast<double>(s.slots) * static_cast<double>(r.n_sources);
    r.score = s;
    r.throughput_per_ts = ratio(s.successes, s.slots);
    r.throughput_per_source_ts = static_cast<double>(s.successes) / per_source_slots;
    if (r.scheme == Scheme::TwoPathIRIC)
        r.sep_sr = ratio(s.sr_errors, s.sr_decisions);
    else
        r.sep_sr = ratio(s.sr_clean_errors, s.sr_clean_decisions);
    r.sep_rd = ratio(s.rd_errors, s.rd_decisions);
    r.sep_e2e = 1.0 - ratio(s.successes, s.symbols);
    r.ci_halfwidth = estimate_ci(s.successes, s.symbols).halfwidth * static_cast<double>(s.symbols) / per_source_slots;
}

}  // namespace

FrameScore simulate_frames(const FrameContext& ctx, std::uint64_t seed, std::size_t point_index,
                           std::size_t first, std::size_t last, unsigned workers) {
    if (last <= first) return {};
    const std::size_t n_chunks = (last - first + kFramesPerChunk - 1) / kFramesPerChunk;
    std::vector<FrameScore> partial(n_chunks);
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    const auto work = [&] {
        try {
            for (std::size_t c = next++; c < n_chunks; c = next++) {
                const std::size_t begin = first + c * kFramesPerChunk;
                const std::size_t end = std::min(last, begin + kFramesPerChunk);
                for (std::size_t f = begin; f < end; ++f) {
                    RandomStream rng(derive_seed(seed, point_index, f));
                    partial[c] += score_frame(run_frame(ctx, rng));
                }
            }
        } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
            next = n_chunks;
        }
    };
    const unsigned w = std::min<unsigned>(resolve_workers(workers), static_cast<unsigned>(n_chunks));
    if (w <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (unsigned i = 0; i < w; ++i) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }
    if (failure) std::rethrow_exception(failure);
    FrameScore total;
    for (const auto& p : partial) total += p;
    return total;
}

std::vector<MetricsRow> run_sweep(const ExperimentConfig& config, const RowSink& sink) {
    config.validate();
    std::vector<MetricsRow> rows;
    for (Scheme scheme : config.schemes)
        for (std::size_t p = 0; p < config.snr_grid_db.size(); ++p) {
            const double snr = config.snr_grid_db[p];
            const FrameContext ctx(point_frame(config, scheme, snr));
            const std::size_t base = config.frames_per_point;
            std::size_t done = base;
            FrameScore score = simulate_frames(ctx, config.seed, p, 0, base, config.workers);
            MetricsRow row = row_base(config, scheme, snr);
            fill_sim(row, score);
            if (config.target_ci_halfwidth) {
                const std::size_t cap = 100 * base;
                while (row.ci_halfwidth > *config.target_ci_halfwidth && done < cap) {
                    const std::size_t step = std::min(base, cap - done);
                    score += simulate_frames(ctx, config.seed, p, done, done + step, config.workers);
                    done += step;
                    fill_sim(row, score);
                }
            }
            row.frames = done;
            if (sink) sink(row);
            rows.push_back(std::move(row));
        }
    return rows;
}

BoundReport bounds_at(const ExperimentConfig& config, double snr_db, std::size_t point_index) {
    const FrameConfig f = point_frame(config, Scheme::TwoPathIRIC, snr_db);
    BoundRequest req;
    req.modulation = f.modulation;
    req.n_sources = f.n_sources;
    req.theta_row = f.theta_row;
    req.custom_theta = f.custom_theta;
    req.profile = f.profile;
    req.L = f.L;
    req.rayleigh.n_channel_samples = config.channel_samples;
    req.rayleigh.seed = derive_seed(config.seed, point_index, 0x5eedULL);
    req.rayleigh.use_dmin = config.use_dmin;
    req.rayleigh.same_source_coefficient = config.same_source_coefficient;
    req.rayleigh.workers = resolve_workers(config.workers);
    return evaluate_bounds(req);
}

std::vector<MetricsRow> run_bounds(const ExperimentConfig& config, const RowSink& sink) {
    config.validate();
    std::vector<MetricsRow> rows;
    std::vector<BoundReport> reports;
    for (std::size_t p = 0; p < config.snr_grid_db.size(); ++p)
        reports.push_back(bounds_at(config, config.snr_grid_db[p], p));
    for (Scheme scheme : config.schemes)
        for (std::size_t p = 0; p < config.snr_grid_db.size(); ++p) {
            const auto& b = reports[p];
            MetricsRow row = row_base(config, scheme, config.snr_grid_db[p]);
            row.source = RowSource::Theory;
            row.saturated = b.saturated;
            if (scheme == Scheme::TwoPathIRIC) {
                row.throughput_per_source_ts = *b.T_new_lb_finite;
                row.sep_sr = b.P_e_SR;
                row.sep_rd = b.P_e_RD;
                row.sep_e2e = 1.0 - b.T_new_lb;
            } else {
                row.throughput_per_source_ts = b.T_cfnc_lb;
                row.sep_sr = b.P_e_SR_noIRI;
                row.sep_rd = b.P_e_RD_MRC;
                row.sep_e2e = 1.0 - 2.0 * b.T_cfnc_lb;
            }
            row.throughput_per_ts = row.throughput_per_source_ts * static_cast<double>(row.n_sources);
            if (sink) sink(row);
            rows.push_back(std::move(row));
        }
    return rows;
}

void write_frame_log_for(std::ostream& os, const ExperimentConfig& config, Scheme scheme, double snr_db,
                         std::size_t point_index, std::size_t frame_index) {
    config.frame.validate();
    const FrameContext ctx(point_frame(config, scheme, snr_db));
    RandomStream rng(derive_seed(config.seed, point_index, frame_index));
    write_frame_log(os, run_frame(ctx, rng), ctx);
}

std::vector<MetricsRow> run_to_csv(const ExperimentConfig& config, RunMode mode, std::ostream& os) {
    write_csv_header(os);
    const RowSink sink = [&os](const MetricsRow& r) {
        write_csv_row(os, r);
        os.flush();
    };
    std::vector<MetricsRow> rows;
    if (mode != RunMode::Theory) rows = run_sweep(config, sink);
    if (mode != RunMode::Sim) {
        auto theory = run_bounds(config, sink);
        rows.insert(rows.end(), theory.begin(), theory.end());
    }
    if (!os) throw IoError("failed writing CSV output");
    return rows;
}

// --------------------------------------------------------------------- figures

namespace {

std::vector<double> grid(double from, double to, double step) {
    std::vector<double> g;
    for (double v = from; v <= to + 1e-9; v += step) g.push_back(v);
    return g;
}

ExperimentConfig canned(std::size_t n_sources, Modulation m, ChannelKind kind, std::vector<double> snr,
                        std::vector<Scheme> schemes, std::size_t frames) {
    ExperimentConfig c;
    c.frame.n_sources = n_sources;
    c.frame.L = 16;
    c.frame.modulation = m;
    c.frame.profile = kind == ChannelKind::AWGN ? FadingProfile::awgn(n_sources, 1.0, 1.0)
                                                : FadingProfile::rayleigh(n_sources, 1.0, 1.0);
    c.schemes = std::move(schemes);
    c.snr_grid_db = std::move(snr);
    c.frames_per_point = frames;
    c.seed = 20240501;
    c.channel_samples = 10000;
    return c;
}

const std::vector<Scheme> kBoth{Scheme::TwoPathIRIC, Scheme::BaselineCFNC};
const std::vector<Scheme> kProposed{Scheme::TwoPathIRIC};

}  // namespace

std::vector<FigureJob> figure_plan(std::string_view id) {
    using enum Modulation;
    if (id == "5") return {{canned(2, BPSK, ChannelKind::AWGN, grid(-5, 30, 5), kBoth, 10000), RunMode::Both}};
    if (id == "6") return {{canned(3, BPSK, ChannelKind::AWGN, grid(5, 30, 5), kBoth, 2000), RunMode::Both}};
    if (id == "7") return {{canned(2, BPSK, ChannelKind::Rayleigh, grid(0, 40, 5), kBoth, 2000), RunMode::Both}};
    if (id == "8") {
        std::vector<FigureJob> jobs;
        for (const auto& off : {std::array<double, 2>{10, 0}, std::array<double, 2>{0, 10}, std::array<double, 2>{0, 0}}) {
            auto c = canned(2, BPSK, ChannelKind::AWGN, grid(-5, 30, 5), kProposed, 5000);
            c.snr_offsets_db = off;
            jobs.push_back({c, RunMode::Sim});
        }
        return jobs;
    }
    if (id == "9") return {{canned(2, BPSK, ChannelKind::AWGN, grid(0, 14, 2), kProposed, 10000), RunMode::Both}};
    if (id == "10") return {{canned(2, BPSK, ChannelKind::Rayleigh, grid(0, 40, 5), kProposed, 5000), RunMode::Both}};
    if (id == "11")
        return {{canned(2, QPSK, ChannelKind::AWGN, grid(0, 30, 5), kBoth, 2000), RunMode::Both},
                {canned(2, QPSK, ChannelKind::Rayleigh, grid(0, 40, 5), kBoth, 1000), RunMode::Both}};
    throw UnknownFigure("unknown figure id '" + std::string(id) + "' (expected 5, 6, 7, 8, 9, 10 or 11)");
}

FigureOutput reproduce_figure(std::string_view id, const std::string& out_dir, std::string_view overrides_json) {
    auto jobs = figure_plan(id);
    for (auto& job : jobs) job.config = apply_overrides(job.config, overrides_json);

    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create output directory '" + out_dir + "': " + ec.message());

    FigureOutput out;
    const std::string stem = "fig" + std::string(id);
    out.csv_path = (std::filesystem::path(out_dir) / (stem + ".csv")).string();
    out.manifest_path = (std::filesystem::path(out_dir) / (stem + "_manifest.json")).string();

    std::ofstream csv(out.csv_path, std::ios::binary);
    if (!csv) throw IoError("cannot open '" + out.csv_path + "' for writing");
    write_csv_header(csv);
    const RowSink sink = [&csv](const MetricsRow& r) { write_csv_row(csv, r); };

    json manifest_jobs = json::array();
    for (const auto& job : jobs) {
        std::size_t rows = 0;
        if (job.mode != RunMode::Theory) rows += run_sweep(job.config, sink).size();
        if (job.mode != RunMode::Sim) rows += run_bounds(job.config, sink).size();
        out.rows += rows;
        const char* mode = job.mode == RunMode::Sim ? "sim" : job.mode == RunMode::Theory ? "theory" : "both";
        manifest_jobs.push_back({{"mode", mode}, {"rows", rows}, {"config", to_json(job.config)}});
    }
    csv.close();
    if (!csv) throw IoError("failed writing '" + out.csv_path + "'");

    json manifest{{"figure", std::string(id)},
                  {"version", std::string(library_version())},
                  {"git_describe", std::string(build_git_describe())},
                  {"csv", std::filesystem::path(out.csv_path).filename().string()},
                  {"columns", kCsvColumns},
                  {"rows", out.rows},
                  {"jobs", manifest_jobs}};
    std::ofstream mf(out.manifest_path, std::ios::binary);
    if (!mf) throw IoError("cannot open '" + out.manifest_path + "' for writing");
    mf << manifest.dump(2) << '\n';
    if (!mf) throw IoError("failed writing '" + out.manifest_path + "'");
    return out;
}

}  // namespace irisim
