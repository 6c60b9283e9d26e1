#include "irisim/protocol.hpp"

#include <cmath>
#include <string>

#include "json.hpp"

#include "irisim/detection.hpp"
#include "irisim/errors.hpp"

namespace irisim {

std::string_view to_string(Scheme s) {
    return s == Scheme::TwoPathIRIC ? "TwoPathIRIC" : "BaselineCFNC";
}

Scheme scheme_from_string(std::string_view s) {
    if (s == "TwoPathIRIC" || s == "twopath" || s == "two-path") return Scheme::TwoPathIRIC;
    if (s == "BaselineCFNC" || s == "baseline" || s == "cfnc") return Scheme::BaselineCFNC;
    throw ConfigError("unknown scheme '" + std::string(s) + "'");
}

void FrameConfig::validate() const {
    if (n_sources < 2 || n_sources > 3)
        throw ConfigError("n_sources must be 2 or 3, got " + std::to_string(n_sources));
    if (L < 1) throw ConfigError("L must be >= 1");
    if (custom_theta && custom_theta->size() != n_sources)
        throw ConfigError("custom theta needs one entry per source");
    profile.validate(n_sources);
}

namespace {

PrecodingVector make_theta(const FrameConfig& c, const Alphabet& a) {
    c.validate();
    if (c.custom_theta) return PrecodingVector::custom(*c.custom_theta, a);
    return PrecodingVector::vandermonde(static_cast<int>(c.n_sources), c.theta_row, a);
}

}  // namespace

FrameContext::FrameContext(FrameConfig config)
    : config_(std::move(config)),
      alphabet_(Alphabet::of(config_.modulation)),
      theta_(make_theta(config_, alphabet_)),
      mapper_(make_pnc_mapper(config_.modulation)),
      source_(build_source_constellation(theta_, alphabet_)),
      sum_(build_sum_constellation(theta_, alphabet_)) {}

FrameInputs random_inputs(const FrameContext& ctx, RandomStream& rng) {
    const auto& c = ctx.config();
    FrameInputs in;
    in.symbols.resize(c.L * c.n_sources);
    for (auto& s : in.symbols) s = static_cast<std::uint8_t>(rng.uniform_index(ctx.alphabet().size()));
    return in;
}

namespace {

using Symbols = std::vector<std::uint8_t>;

class FrameRunner {
public:
    FrameRunner(const FrameContext& ctx, RandomStream& rng)
        : ctx_(ctx), cfg_(ctx.config()), rng_(rng), n_(cfg_.n_sources), values_(n_) {}

    // norm_scale * Theta^T (h_i * x_i) for each i.
    cplx transmit(const Symbols& x, std::span<const cplx> gains) {
        for (std::size_t i = 0; i < n_; ++i) values_[i] = gains[i] * ctx_.alphabet()[x[i]];
        return ctx_.theta().combine(values_);
    }

    cplx transmit_with_iri(const Symbols& x, std::span<const cplx> gains, const Symbols& xr, cplx h12) {
        for (std::size_t i = 0; i < n_; ++i)
            values_[i] = gains[i] * ctx_.alphabet()[x[i]] + h12 * ctx_.alphabet()[xr[i]];
        return ctx_.theta().combine(values_);
    }

    cplx forward(const Symbols& xr) {
        for (std::size_t i = 0; i < n_; ++i) values_[i] = ctx_.alphabet()[xr[i]];
        return ctx_.theta().combine(values_);
    }

    Symbols source_label(std::size_t index) const {
        const auto l = ctx_.source_constellation().label(index);
        return {l.begin(), l.end()};
    }

    // Interference-free relay decision on x.
    Symbols detect_clean(cplx y, std::span<const cplx> h_sr) {
        if (cfg_.profile.kind == ChannelKind::AWGN) return source_label(nearest(y, ctx_.source_constellation().points()).index);
        const auto faded = build_faded_source_constellation(ctx_.theta(), ctx_.alphabet(), h_sr);
        const auto l = faded.label(nearest(y, faded.points()).index);
        return {l.begin(), l.end()};
    }

    // Relay decision on the component-wise sums, as SumAlphabet indices.
    Symbols detect_sums(cplx y, std::span<const cplx> h_sr, cplx h12) {
        if (cfg_.profile.kind == ChannelKind::AWGN) {
            const auto l = ctx_.sum_constellation().label(detect_relay_awgn(y, ctx_.sum_constellation()).index);
            return {l.begin(), l.end()};
        }
        const auto faded = build_faded_sum_constellation(ctx_.theta(), ctx_.alphabet(), h_sr, h12);
        Symbols sums(n_);
        pair_to_sum_label(ctx_.sums(), faded.label(detect_relay_fading(y, faded).index), sums);
        return sums;
    }

    RandomStream& rng() { return rng_; }
    const FrameConfig& cfg() const { return cfg_; }
    std::size_t n() const { return n_; }

private:
    const FrameContext& ctx_;
    const FrameConfig& cfg_;
    RandomStream& rng_;
    std::size_t n_;
    std::vector<cplx> values_;
};

Symbols row(const std::vector<std::uint8_t>& flat, std::size_t r, std::size_t n) {
    return {flat.begin() + static_cast<std::ptrdiff_t>(r * n), flat.begin() + static_cast<std::ptrdiff_t>((r + 1) * n)};
}

void check_inputs(const FrameContext& ctx, const FrameInputs& in) {
    const auto& c = ctx.config();
    if (in.symbols.size() != c.L * c.n_sources) throw ConfigError("frame inputs must hold L x N_S symbols");
    for (auto s : in.symbols)
        if (s >= ctx.alphabet().size()) throw ConfigError("frame input symbol index out of range");
    if (in.initial_relay_state) {
        if (in.initial_relay_state->size() != c.n_sources) throw ConfigError("initial relay state needs N_S symbols");
        for (auto s : *in.initial_relay_state)
            if (s >= ctx.alphabet().size()) throw ConfigError("initial relay state symbol out of range");
    }
}

}  // namespace

FrameLog run_twopath_frame(const FrameContext& ctx, const FrameInputs& inputs, RandomStream& rng,
                           const DestinationTamper& tamper) {
    check_inputs(ctx, inputs);
    FrameRunner run(ctx, rng);
    const auto& cfg = run.cfg();
    const std::size_t n = run.n();
    const std::size_t L = cfg.L;

    FrameLog log;
    log.scheme = Scheme::TwoPathIRIC;
    log.n_sources = n;
    log.L = L;
    log.relay_detector = cfg.profile.kind == ChannelKind::AWGN ? "sum" : "pair";
    log.transmitted = inputs.symbols;
    log.recovered.assign(L * n, 0);
    log.had_initial_state = inputs.initial_relay_state.has_value();
    log.slots.reserve(L + 1);

    std::optional<Symbols> forwarding_state = inputs.initial_relay_state;
    std::optional<Symbols> previous_detection;

    for (std::size_t slot = 1; slot <= L + 1; ++slot) {
        SlotRecord rec;
        rec.slot = slot;
        const int listening = slot % 2 == 1 ? 1 : 2;
        const int forwarding = 3 - listening;
        const auto chan = sample_realization(cfg.profile, run.rng(), static_cast<std::int64_t>(slot));
        const auto& h_listen = chan.h_sr[static_cast<std::size_t>(listening - 1)];

        const bool sources_active = slot <= L;
        const bool relay_active = forwarding_state.has_value();
        if (relay_active) {
            rec.forwarding_relay = forwarding;
            rec.relay_forwarded[static_cast<std::size_t>(forwarding - 1)] = *forwarding_state;
        }

        if (sources_active) {
            rec.listening_relay = listening;
            rec.sources = row(inputs.symbols, slot - 1, n);
            if (relay_active) {
                const cplx y = add_noise(run.transmit_with_iri(rec.sources, h_listen, *forwarding_state, chan.h_12),
                                         cfg.profile.n0_sr, run.rng());
                rec.relay_sums = run.detect_sums(y, h_listen, chan.h_12);
                rec.true_sums.resize(n);
                for (std::size_t i = 0; i < n; ++i)
                    rec.true_sums[i] = ctx.sums().sum_of(rec.sources[i], (*forwarding_state)[i]);
                rec.relay_next.resize(n);
                for (std::size_t i = 0; i < n; ++i) rec.relay_next[i] = ctx.mapper().f(rec.relay_sums[i]);
            } else {
                // First slot: the other relay is silent, so the listener
                // decides x directly and forwards it unchanged.
                const cplx y = add_noise(run.transmit(rec.sources, h_listen), cfg.profile.n0_sr, run.rng());
                rec.relay_detected[static_cast<std::size_t>(listening - 1)] = run.detect_clean(y, h_listen);
                rec.relay_next = rec.relay_detected[static_cast<std::size_t>(listening - 1)];
            }
        }

        if (relay_active) {
            const cplx h_rd = chan.h_rd[static_cast<std::size_t>(forwarding - 1)];
            const cplx y = add_noise(h_rd * run.forward(*forwarding_state), cfg.profile.n0_rd, run.rng());
            Symbols detected = run.source_label(detect_destination(y, ctx.source_constellation(), h_rd).index);
            if (tamper) tamper(slot, detected);
            rec.destination_detected = detected;

            if (previous_detection) {
                if (slot >= 2) {
                    rec.recovered_slot = slot - 1;
                    rec.recovered.resize(n);
                    for (std::size_t i = 0; i < n; ++i)
                        rec.recovered[i] = ctx.mapper().g((*previous_detection)[i], detected[i]);
                }
            } else if (slot >= 2) {
                rec.recovered_slot = slot - 1;
                rec.recovered = detected;
            }
            previous_detection = detected;
        }

        if (rec.recovered_slot) {
            const std::size_t r = *rec.recovered_slot - 1;
            std::copy(rec.recovered.begin(), rec.recovered.end(),
                      log.recovered.begin() + static_cast<std::ptrdiff_t>(r * n));
        }

        // The listener in the final slot hears only the other relay; its
        // decision has nowhere to go and is dropped.
        if (sources_active) forwarding_state = rec.relay_next;
        log.slots.push_back(std::move(rec));
    }
    return log;
}

FrameLog run_baseline_frame(const FrameContext& ctx, const FrameInputs& inputs, RandomStream& rng) {
    check_inputs(ctx, inputs);
    FrameRunner run(ctx, rng);
    const auto& cfg = run.cfg();
    const std::size_t n = run.n();
    const std::size_t L = cfg.L;

    FrameLog log;
    log.scheme = Scheme::BaselineCFNC;
    log.n_sources = n;
    log.L = L;
    log.relay_detector = "clean";
    log.transmitted = inputs.symbols;
    log.recovered.assign(L * n, 0);
    log.slots.reserve(2 * L);

    for (std::size_t l = 1; l <= L; ++l) {
        SlotRecord up;
        up.slot = 2 * l - 1;
        up.listening_relay = 3;
        up.sources = row(inputs.symbols, l - 1, n);
        const auto chan_up = sample_realization(cfg.profile, run.rng(), static_cast<std::int64_t>(up.slot));
        for (std::size_t m = 0; m < 2; ++m) {
            const cplx y = add_noise(run.transmit(up.sources, chan_up.h_sr[m]), cfg.profile.n0_sr, run.rng());
            up.relay_detected[m] = run.detect_clean(y, chan_up.h_sr[m]);
        }

        SlotRecord down;
        down.slot = 2 * l;
        down.forwarding_relay = 3;
        down.relay_forwarded = up.relay_detected;
        const auto chan_down = sample_realization(cfg.profile, run.rng(), static_cast<std::int64_t>(down.slot));
        const cplx y1 = add_noise(chan_down.h_rd[0] * run.forward(up.relay_detected[0]), cfg.profile.n0_rd, run.rng());
        const cplx y2 = add_noise(chan_down.h_rd[1] * run.forward(up.relay_detected[1]), cfg.profile.n0_rd, run.rng());
        down.destination_detected = run.source_label(
            detect_destination_mrc(y1, y2, chan_down.h_rd[0], chan_down.h_rd[1], ctx.source_constellation()).index);
        down.recovered_slot = l;
        down.recovered = down.destination_detected;
        std::copy(down.recovered.begin(), down.recovered.end(),
                  log.recovered.begin() + static_cast<std::ptrdiff_t>((l - 1) * n));

        log.slots.push_back(std::move(up));
        log.slots.push_back(std::move(down));
    }
    return log;
}

FrameLog run_frame(const FrameContext& ctx, RandomStream& rng) {
    const FrameInputs in = random_inputs(ctx, rng);
    return ctx.config().scheme == Scheme::TwoPathIRIC ? run_twopath_frame(ctx, in, rng)
                                                       : run_baseline_frame(ctx, in, rng);
}

FrameScore& FrameScore::operator+=(const FrameScore& o) {
    slots += o.slots;
    symbols += o.symbols;
    successes += o.successes;
    sr_decisions += o.sr_decisions;
    sr_errors += o.sr_errors;
    sr_clean_decisions += o.sr_clean_decisions;
    sr_clean_errors += o.sr_clean_errors;
    rd_decisions += o.rd_decisions;
    rd_errors += o.rd_errors;
    lucky_recoveries += o.lucky_recoveries;
    return *this;
}

FrameScore score_frame(const FrameLog& log) {
    FrameScore s;
    const std::size_t n = log.n_sources;
    const std::size_t L = log.L;
    s.slots = log.slots_used();
    s.symbols = L * n;
    std::vector<std::uint8_t> link_error(L * n, 0);

    const auto mark = [&](std::optional<std::size_t> source_slot, std::size_t i) {
        if (source_slot && *source_slot >= 1 && *source_slot <= L) link_error[(*source_slot - 1) * n + i] = 1;
    };

    for (const auto& r : log.slots) {
        if (log.scheme == Scheme::TwoPathIRIC) {
            const std::optional<std::size_t> this_source_slot =
                r.sources.empty() ? std::nullopt : std::optional<std::size_t>(r.slot);
            for (std::size_t i = 0; i < r.relay_sums.size(); ++i) {
                ++s.sr_decisions;
                if (r.relay_sums[i] != r.true_sums[i]) {
                    ++s.sr_errors;
                    mark(this_source_slot, i);
                }
            }
            for (std::size_t m = 0; m < 2; ++m)
                if (!r.relay_detected[m].empty())
                    for (std::size_t i = 0; i < n; ++i) {
                        ++s.sr_clean_decisions;
                        if (r.relay_detected[m][i] != r.sources[i]) {
                            ++s.sr_clean_errors;
                            mark(this_source_slot, i);
                        }
                    }
            if (!r.destination_detected.empty()) {
                const auto& xr = r.relay_forwarded[static_cast<std::size_t>(r.forwarding_relay - 1)];
                for (std::size_t i = 0; i < n; ++i) {
                    ++s.rd_decisions;
                    if (r.destination_detected[i] != xr[i]) {
                        ++s.rd_errors;
                        // Feeds the recovery of slot-1 and slot sources.
                        if (r.slot >= 2) mark(r.slot - 1, i);
                        if (r.slot <= L && (r.slot >= 2 || log.had_initial_state)) mark(r.slot, i);
                    }
                }
            }
        } else {
            if (!r.sources.empty()) {
                const std::size_t l = (r.slot + 1) / 2;
                for (std::size_t m = 0; m < 2; ++m)
                    for (std::size_t i = 0; i < n; ++i) {
                        ++s.sr_clean_decisions;
                        if (r.relay_detected[m][i] != r.sources[i]) {
                            ++s.sr_clean_errors;
                            mark(l, i);
                        }
                    }
            }
            if (!r.destination_detected.empty()) {
                const std::size_t l = r.slot / 2;
                for (std::size_t i = 0; i < n; ++i) {
                    if (r.relay_forwarded[0][i] != r.relay_forwarded[1][i]) continue;
                    ++s.rd_decisions;
                    if (r.destination_detected[i] != r.relay_forwarded[0][i]) {
                        ++s.rd_errors;
                        mark(l, i);
                    }
                }
            }
        }
    }

    for (std::size_t k = 0; k < L * n; ++k)
        if (log.recovered[k] == log.transmitted[k]) {
            ++s.successes;
            if (link_error[k]) ++s.lucky_recoveries;
        }
    return s;
}

namespace {

std::string format_symbol(cplx v) {
    const auto part = [](double x) {
        const double r = std::round(x);
        return r == x ? std::to_string(static_cast<long long>(r)) : nlohmann::json(x).dump();
    };
    if (v.imag() == 0.0) return part(v.real());
    std::string im = v.imag() == 1.0 ? "j" : v.imag() == -1.0 ? "-j" : part(v.imag()) + "j";
    if (v.real() == 0.0) return im;
    if (im.front() != '-') im = "+" + im;
    return part(v.real()) + im;
}

nlohmann::json symbols_json(const std::vector<std::uint8_t>& idx, const Alphabet& a) {
    auto out = nlohmann::json::array();
    for (auto i : idx) out.push_back(format_symbol(a[i]));
    return out;
}

nlohmann::json sums_json(const std::vector<std::uint8_t>& idx, const SumAlphabet& s) {
    auto out = nlohmann::json::array();
    for (auto i : idx) out.push_back(format_symbol(s.points[i]));
    return out;
}

}  // namespace

void write_frame_log(std::ostream& os, const FrameLog& log, const FrameContext& ctx) {
    const auto& a = ctx.alphabet();
    nlohmann::json header{{"record", "frame"},
                          {"scheme", std::string(to_string(log.scheme))},
                          {"n_sources", log.n_sources},
                          {"L", log.L},
                          {"modulation", std::string(to_string(ctx.config().modulation))},
                          {"relay_detector", std::string(log.relay_detector)},
                          {"slots_used", log.slots_used()},
                          {"initial_relay_state", log.had_initial_state}};
    os << header.dump() << '\n';
    for (const auto& r : log.slots) {
        nlohmann::json j{{"record", "slot"}, {"slot", r.slot},
                         {"listening_relay", r.listening_relay}, {"forwarding_relay", r.forwarding_relay}};
        if (!r.sources.empty()) j["sources"] = symbols_json(r.sources, a);
        for (std::size_t m = 0; m < 2; ++m) {
            if (!r.relay_forwarded[m].empty())
                j["relay" + std::to_string(m + 1) + "_forwarded"] = symbols_json(r.relay_forwarded[m], a);
            if (!r.relay_detected[m].empty())
                j["relay" + std::to_string(m + 1) + "_detected"] = symbols_json(r.relay_detected[m], a);
        }
        if (!r.relay_sums.empty()) {
            j["relay_sums"] = sums_json(r.relay_sums, ctx.sums());
            j["true_sums"] = sums_json(r.true_sums, ctx.sums());
        }
        if (!r.relay_next.empty()) j["relay_next"] = symbols_json(r.relay_next, a);
        if (!r.destination_detected.empty()) j["destination_detected"] = symbols_json(r.destination_detected, a);
        if (r.recovered_slot) {
            j["recovered_slot"] = *r.recovered_slot;
            j["recovered"] = symbols_json(r.recovered, a);
        }
        os << j.dump() << '\n';
    }
}

}  // namespace irisim
