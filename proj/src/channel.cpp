#include "irisim/channel.hpp"

#include <cmath>
#include <string>

#include "irisim/errors.hpp"

namespace irisim {

std::string_view to_string(ChannelKind k) { return k == ChannelKind::AWGN ? "AWGN" : "Rayleigh"; }

ChannelKind channel_kind_from_string(std::string_view s) {
    if (s == "AWGN" || s == "awgn") return ChannelKind::AWGN;
    if (s == "Rayleigh" || s == "rayleigh" || s == "RAYLEIGH") return ChannelKind::Rayleigh;
    throw ConfigError("unknown channel kind '" + std::string(s) + "'");
}

FadingProfile FadingProfile::awgn(std::size_t n_sources, double n0_sr, double n0_rd) {
    FadingProfile p;
    p.kind = ChannelKind::AWGN;
    p.sigma2_sr.assign(n_sources, {1.0, 1.0});
    p.n0_sr = n0_sr;
    p.n0_rd = n0_rd;
    return p;
}

FadingProfile FadingProfile::rayleigh(std::size_t n_sources, double n0_sr, double n0_rd) {
    FadingProfile p = awgn(n_sources, n0_sr, n0_rd);
    p.kind = ChannelKind::Rayleigh;
    return p;
}

void FadingProfile::validate(std::size_t n_sources) const {
    if (sigma2_sr.size() != n_sources)
        throw ConfigError("sigma2_sr needs one entry per source (" + std::to_string(n_sources) + ")");
    for (const auto& v : sigma2_sr)
        if (!(v[0] > 0.0) || !(v[1] > 0.0)) throw ConfigError("sigma2_sr entries must be > 0");
    if (!(sigma2_rr > 0.0)) throw ConfigError("sigma2_rr must be > 0");
    if (!(sigma2_rd[0] > 0.0) || !(sigma2_rd[1] > 0.0)) throw ConfigError("sigma2_rd entries must be > 0");
    if (!(n0_sr >= 0.0) || !(n0_rd >= 0.0)) throw ConfigError("N0 must be >= 0");
}

ChannelRealization sample_realization(const FadingProfile& profile, RandomStream& rng,
                                      std::int64_t slot) {
    ChannelRealization r;
    r.slot_index = slot;
    const std::size_t n = profile.sigma2_sr.size();
    r.h_sr[0].assign(n, cplx{1.0, 0.0});
    r.h_sr[1].assign(n, cplx{1.0, 0.0});
    if (profile.kind == ChannelKind::AWGN) return r;

    for (std::size_t m = 0; m < 2; ++m)
        for (std::size_t i = 0; i < n; ++i) r.h_sr[m][i] = rng.complex_gaussian(profile.sigma2_sr[i][m]);
    r.h_12 = rng.complex_gaussian(profile.sigma2_rr);
    r.h_rd[0] = rng.complex_gaussian(profile.sigma2_rd[0]);
    r.h_rd[1] = rng.complex_gaussian(profile.sigma2_rd[1]);
    return r;
}

cplx add_noise(cplx signal, double n0, RandomStream& rng) {
    if (n0 == 0.0) return signal;
    return signal + rng.complex_gaussian(n0);
}

double snr_db_to_n0(double snr_db) { return std::pow(10.0, -snr_db / 10.0); }

double path_loss_db(double distance_m) {
    if (!(distance_m > 0.0)) throw NonPositiveDistance("distance must be > 0 m");
    return 15.3 + 37.6 * std::log10(distance_m);
}

double snr_from_pathloss(double distance_m, double tx_power_dbm, double noise_dbm_per_hz,
                         double bandwidth_hz) {
    const double noise_dbm = noise_dbm_per_hz + 10.0 * std::log10(bandwidth_hz);
    const double snr_db = tx_power_dbm - path_loss_db(distance_m) - noise_dbm;
    return std::pow(10.0, snr_db / 10.0);
}

}  // namespace irisim
