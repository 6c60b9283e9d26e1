#pragma once

#include <array>
#include <cstdint>
#include <string_view>
#include <vector>

#include "irisim/constellation.hpp"
#include "irisim/random.hpp"

namespace irisim {

enum class ChannelKind { AWGN, Rayleigh };

std::string_view to_string(ChannelKind k);
ChannelKind channel_kind_from_string(std::string_view s);

/// Per-link statistics. Variances are E|h|^2 of the corresponding CN(0, .)
/// coefficient and are ignored for AWGN, where every coefficient is 1.
struct FadingProfile {
    ChannelKind kind = ChannelKind::AWGN;
    /// sigma2_sr[i][m]: source i to relay m.
    std::vector<std::array<double, 2>> sigma2_sr;
    /// Shared by both inter-relay directions.
    double sigma2_rr = 1.0;
    std::array<double, 2> sigma2_rd{1.0, 1.0};
    double n0_sr = 1.0;
    double n0_rd = 1.0;

    static FadingProfile awgn(std::size_t n_sources, double n0_sr, double n0_rd);
    /// Unit-variance Rayleigh on every link.
    static FadingProfile rayleigh(std::size_t n_sources, double n0_sr, double n0_rd);

    /// Throws ConfigError on non-positive variances, negative N0 or a size mismatch.
    void validate(std::size_t n_sources) const;
};

/// Coefficients for one time slot.
struct ChannelRealization {
    /// h_sr[m][i]: source i to relay m.
    std::array<std::vector<cplx>, 2> h_sr;
    cplx h_12{1.0, 0.0};
    std::array<cplx, 2> h_rd{cplx{1.0, 0.0}, cplx{1.0, 0.0}};
    std::int64_t slot_index = 0;
};

ChannelRealization sample_realization(const FadingProfile& profile, RandomStream& rng,
                                      std::int64_t slot);

/// signal + CN(0, n0). n0 == 0 returns the signal untouched and draws nothing.
cplx add_noise(cplx signal, double n0, RandomStream& rng);

double snr_db_to_n0(double snr_db);

/// 15.3 + 37.6 log10(d) dB, d in metres.
double path_loss_db(double distance_m);

/// Linear SNR from transmit power, path loss and thermal noise over the band.
double snr_from_pathloss(double distance_m, double tx_power_dbm, double noise_dbm_per_hz,
                         double bandwidth_hz);

}  // namespace irisim
