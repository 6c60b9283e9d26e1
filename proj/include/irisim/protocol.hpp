#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <ostream>
#include <span>
#include <string_view>
#include <vector>

#include "irisim/channel.hpp"
#include "irisim/constellation.hpp"
#include "irisim/pnc.hpp"
#include "irisim/random.hpp"

namespace irisim {

enum class Scheme { TwoPathIRIC, BaselineCFNC };

std::string_view to_string(Scheme s);
Scheme scheme_from_string(std::string_view s);

struct FrameConfig {
    std::size_t n_sources = 2;
    /// Symbols per source per frame.
    std::size_t L = 16;
    Modulation modulation = Modulation::BPSK;
    /// Vandermonde row; ignored when custom_theta is set.
    int theta_row = 1;
    std::optional<std::vector<cplx>> custom_theta;
    FadingProfile profile = FadingProfile::awgn(2, 1.0, 1.0);
    Scheme scheme = Scheme::TwoPathIRIC;

    void validate() const;
};

/// Everything a frame needs that does not change between frames: the
/// precoder, the AWGN constellations and the PNC tables. Immutable.
class FrameContext {
public:
    explicit FrameContext(FrameConfig config);

    const FrameConfig& config() const { return config_; }
    const Alphabet& alphabet() const { return alphabet_; }
    const PrecodingVector& theta() const { return theta_; }
    const PncMapper& mapper() const { return *mapper_; }
    const SumAlphabet& sums() const { return mapper_->sums(); }
    const LabeledConstellation& source_constellation() const { return source_; }
    const LabeledConstellation& sum_constellation() const { return sum_; }

private:
    FrameConfig config_;
    Alphabet alphabet_;
    PrecodingVector theta_;
    std::shared_ptr<const PncMapper> mapper_;
    LabeledConstellation source_;
    LabeledConstellation sum_;
};

/// Source symbols for one frame, row-major L x N_S alphabet indices.
struct FrameInputs {
    std::vector<std::uint8_t> symbols;
    /// Replays a mid-stream state: the vector the forwarding relay sends in
    /// slot 1, as already detected by the destination in the slot before.
    std::optional<std::vector<std::uint8_t>> initial_relay_state;
};

FrameInputs random_inputs(const FrameContext& ctx, RandomStream& rng);

/// Test hook: lets a caller overwrite the destination's detection in a slot.
using DestinationTamper = std::function<void(std::size_t slot, std::span<std::uint8_t> detected)>;

/// One time slot. Symbol vectors hold alphabet indices; relay_sums holds
/// SumAlphabet indices. Empty vectors mean "nothing happened".
struct SlotRecord {
    std::size_t slot = 0;  // 1-based
    int listening_relay = 0;   // 0: none
    int forwarding_relay = 0;  // 0: none, 3: both relays (baseline)
    std::vector<std::uint8_t> sources;
    /// Vector(s) the forwarding relay(s) transmitted; index 0 is relay 1.
    std::array<std::vector<std::uint8_t>, 2> relay_forwarded;
    std::vector<std::uint8_t> relay_sums;
    /// Noise-free sums x + x_r the listening relay should have detected.
    std::vector<std::uint8_t> true_sums;
    /// Interference-free symbol decisions at relay m (slot 1 or baseline).
    std::array<std::vector<std::uint8_t>, 2> relay_detected;
    /// x_r for the next slot, prepared by the listening relay.
    std::vector<std::uint8_t> relay_next;
    std::vector<std::uint8_t> destination_detected;
    std::optional<std::size_t> recovered_slot;
    std::vector<std::uint8_t> recovered;
};

struct FrameLog {
    Scheme scheme = Scheme::TwoPathIRIC;
    std::size_t n_sources = 0;
    std::size_t L = 0;
    /// "sum" (AWGN) or "pair" (fading) relay detector.
    std::string_view relay_detector;
    std::vector<SlotRecord> slots;
    std::vector<std::uint8_t> transmitted;  // L x N_S
    std::vector<std::uint8_t> recovered;    // L x N_S
    bool had_initial_state = false;

    std::size_t slots_used() const { return slots.size(); }
};

FrameLog run_twopath_frame(const FrameContext& ctx, const FrameInputs& inputs, RandomStream& rng,
                           const DestinationTamper& tamper = {});
FrameLog run_baseline_frame(const FrameContext& ctx, const FrameInputs& inputs, RandomStream& rng);

/// Dispatches on ctx.config().scheme and draws fresh inputs from rng.
FrameLog run_frame(const FrameContext& ctx, RandomStream& rng);

/// Per-frame tallies. SEP counters are per source component.
struct FrameScore {
    std::size_t slots = 0;
    std::size_t symbols = 0;
    std::size_t successes = 0;
    /// Relay decisions made under inter-relay interference (sum detection).
    std::size_t sr_decisions = 0;
    std::size_t sr_errors = 0;
    /// Interference-free relay decisions (slot 1, or every baseline relay).
    std::size_t sr_clean_decisions = 0;
    std::size_t sr_clean_errors = 0;
    std::size_t rd_decisions = 0;
    std::size_t rd_errors = 0;
    /// Correct recoveries whose path contained at least one link error.
    std::size_t lucky_recoveries = 0;

    FrameScore& operator+=(const FrameScore& o);
};

FrameScore score_frame(const FrameLog& log);

/// Line-delimited JSON: one frame header line, then one line per slot.
void write_frame_log(std::ostream& os, const FrameLog& log, const FrameContext& ctx);

}  // namespace irisim
