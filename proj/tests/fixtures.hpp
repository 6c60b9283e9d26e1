// Two-source BPSK and QPSK trace rows plus a zero-noise replay helper.
#pragma once

#include <string>
#include <vector>

#include "irisim/protocol.hpp"

namespace fixtures {

using irisim::cplx;

struct TraceRow {
    std::vector<cplx> prior;      // x_r at TS n, as detected by D
    std::vector<cplx> sources;    // x at TS n
    std::vector<cplx> sums;       // x_r + x seen by the listening relay
    std::vector<cplx> forwarded;  // f(...) = x_r at TS n+1
    std::vector<cplx> detected;   // D's detection at TS n+1
    std::vector<cplx> recovered;  // g(...)
};

inline std::vector<TraceRow> bpsk_trace() {
    return {
        {{1, -1}, {1, 1}, {2, 0}, {-1, 1}, {-1, 1}, {1, 1}},
        {{1, -1}, {-1, -1}, {0, -2}, {1, -1}, {1, -1}, {-1, -1}},
    };
}

inline std::vector<TraceRow> qpsk_trace() {
    const cplx j(0, 1);
    return {
        {{1. + j, 1. - j}, {1. + j, 1. + j}, {2. + 2. * j, 2}, {-1. - j, -1. + j}, {-1. - j, -1. + j}, {1. + j, 1. + j}},
        {{1. + j, 1. - j}, {-1. + j, -1. - j}, {2. * j, -2. * j}, {1. - j, 1. - j}, {1. - j, 1. - j}, {-1. + j, -1. - j}},
        {{1. + j, 1. - j}, {-1. - j, 1. - j}, {0, 2. - 2. * j}, {1. + j, -1. - j}, {1. + j, -1. - j}, {-1. - j, 1. - j}},
        {{-1. - j, 1. - j}, {-1. - j, -1. + j}, {-2. - 2. * j, 0}, {-1. - j, 1. + j}, {-1. - j, 1. + j}, {-1. - j, -1. + j}},
        {{-1. - j, -1. + j}, {-1. + j, -1. + j}, {-2, -2. + 2. * j}, {-1. + j, -1. - j}, {-1. + j, -1. - j}, {-1. + j, -1. + j}},
    };
}

inline irisim::FrameContext zero_noise_context(irisim::Modulation m, std::size_t L, std::size_t n_sources = 2) {
    irisim::FrameConfig c;
    c.n_sources = n_sources;
    c.L = L;
    c.modulation = m;
    c.profile = irisim::FadingProfile::awgn(n_sources, 0.0, 0.0);
    return irisim::FrameContext(c);
}

inline std::vector<std::uint8_t> to_indices(const irisim::Alphabet& a, const std::vector<cplx>& v) {
    std::vector<std::uint8_t> out;
    for (auto x : v) out.push_back(static_cast<std::uint8_t>(a.index_of(x).value()));
    return out;
}

inline std::vector<cplx> symbol_values(const irisim::Alphabet& a, const std::vector<std::uint8_t>& idx) {
    std::vector<cplx> out;
    for (auto i : idx) out.push_back(a[i]);
    return out;
}

inline std::vector<cplx> sum_values(const irisim::SumAlphabet& s, const std::vector<std::uint8_t>& idx) {
    std::vector<cplx> out;
    for (auto i : idx) out.push_back(s.points[i]);
    return out;
}

// Replays one row with an injected prior relay state. Returns "" on a match,
// otherwise the name of the first mismatching column.
inline std::string replay_row(irisim::Modulation m, const TraceRow& row) {
    const auto ctx = zero_noise_context(m, 1);
    const auto& a = ctx.alphabet();
    irisim::FrameInputs in;
    in.symbols = to_indices(a, row.sources);
    in.initial_relay_state = to_indices(a, row.prior);
    irisim::RandomStream rng(1);
    const auto log = irisim::run_twopath_frame(ctx, in, rng);
    if (log.slots.size() != 2) return "slot count";
    const auto& s1 = log.slots[0];
    const auto& s2 = log.slots[1];
    if (symbol_values(a, s1.destination_detected) != row.prior) return "y_D(n)";
    if (sum_values(ctx.sums(), s1.relay_sums) != row.sums) return "received with IRI";
    if (symbol_values(a, s1.relay_next) != row.forwarded) return "f";
    if (symbol_values(a, s2.destination_detected) != row.detected) return "y_D(n+1)";
    if (!s2.recovered_slot || *s2.recovered_slot != 1) return "recovered slot";
    if (symbol_values(a, s2.recovered) != row.recovered) return "g";
    if (symbol_values(a, log.recovered) != row.sources) return "recovered sequence";
    return "";
}

}  // namespace fixtures
