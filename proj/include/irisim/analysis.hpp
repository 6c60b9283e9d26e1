#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "irisim/channel.hpp"
#include "irisim/constellation.hpp"
#include "irisim/pnc.hpp"

namespace irisim {

/// Gaussian tail probability, via erfc.
double q_function(double x);

/// Square matrix of pairwise error terms P{a -> b}, row-major. The diagonal
/// holds whatever the kernel yields at zero distance.
struct PairwiseMatrix {
    std::size_t n = 0;
    std::vector<double> v;

    PairwiseMatrix() = default;
    explicit PairwiseMatrix(std::size_t size) : n(size), v(size * size, 0.0) {}

    double& operator()(std::size_t a, std::size_t b) { return v[a * n + b]; }
    double operator()(std::size_t a, std::size_t b) const { return v[a * n + b]; }
};

/// Q(d_ab / sqrt(2 N0)). N0 == 0 gives 0 off the diagonal and Q(0) on it.
PairwiseMatrix awgn_pairwise(const LabeledConstellation& c, double n0);

/// 2 N0 / (2 N0 + sigma2_pdf d^2) with sigma2_pdf the Rayleigh pdf parameter.
double rayleigh_pairwise_rd(double d, double sigma2_pdf, double n0);

/// Closed form for a CN(0, variance) link: the pdf parameter is variance / 2.
PairwiseMatrix rayleigh_rd_pairwise(const LabeledConstellation& c, double link_variance, double n0);

PairwiseMatrix elementwise_product(const PairwiseMatrix& a, const PairwiseMatrix& b);
PairwiseMatrix elementwise_mean(const PairwiseMatrix& a, const PairwiseMatrix& b);

/// Prior-weighted sum of m(a, b) over pairs whose labels differ in exactly k
/// positions.
double pe_k(const LabeledConstellation& c, const PairwiseMatrix& m, std::size_t k);

/// (1 / N_S) sum_k k * pe_k: per-source link SEP bound.
double pe_link(const LabeledConstellation& c, const PairwiseMatrix& m);

// AWGN conveniences.
double pe_k_source_const(const LabeledConstellation& s, double n0, std::size_t k);
double pe_rd(const LabeledConstellation& s, double n0);
double pe_sr(const LabeledConstellation& y, double n0);

/// P{xi = j} for j = 0..N_S, from the pe_k terms.
struct ErrorCountDistribution {
    std::vector<double> p;

    double mean() const;
};

ErrorCountDistribution error_count_distribution(const LabeledConstellation& c, const PairwiseMatrix& m);

/// Lucky double error s_a -> s_b -> s_a with b differing from a at some
/// position N, averaged over N.
double p_prime(const LabeledConstellation& s, const PairwiseMatrix& sr, const PairwiseMatrix& rd);
double p_prime(const LabeledConstellation& s, double n0);

/// Source-constellation index of f applied to every component of a sum label.
std::vector<std::size_t> f_correspondence(const LabeledConstellation& y, const LabeledConstellation& s,
                                          const PncMapper& mapper);

/// Relay mis-detects y_a as y_b but D lands back on the point the relay
/// should have forwarded.
double p_triple_prime(const LabeledConstellation& y, const LabeledConstellation& s, const PncMapper& mapper,
                      const PairwiseMatrix& sr_y, const PairwiseMatrix& rd_s);
double p_triple_prime(const LabeledConstellation& y, const LabeledConstellation& s, const PncMapper& mapper,
                      double n0);

/// R-D error at slot n, composed with an S-R event and a second R-D event
/// whose g-stage still lands on the transmitted symbol.
double p_case2(const LabeledConstellation& s, const LabeledConstellation& y, const PncMapper& mapper,
               const PairwiseMatrix& rd_s, const PairwiseMatrix& sr_y);
double p_case2(const LabeledConstellation& s, const LabeledConstellation& y, const PncMapper& mapper,
               double n0);

struct Clamped {
    double value = 0.0;
    bool saturated = false;
};

Clamped clamp_probability(double p);

/// Link terms every throughput bound is assembled from, already clamped.
struct BoundTerms {
    double pe_rd = 0.0;
    double pe_rd_mrc = 0.0;
    double pe_sr = 0.0;
    double pe_sr_no_iri = 0.0;
    double p_prime = 0.0;       // S-R (no IRI) then single-branch R-D
    double p_prime_mrc = 0.0;   // S-R (no IRI) then MRC R-D
    double p_triple_prime = 0.0;
    double p_case2 = 0.0;
    std::vector<double> pe_k_rd;
    bool saturated = false;
};

double t_cfnc_from_terms(const BoundTerms& t);
/// L -> infinity form.
double t_new_from_terms(const BoundTerms& t);
/// [t_1 + (L - 1) t_steady] / (L + 1), t_1 using the interference-free first slot.
double t_new_finite_from_terms(const BoundTerms& t, std::size_t L);

// AWGN conveniences with N0_SR == N0_RD.
double t_cfnc_lower_bound(const LabeledConstellation& s, double n0);
double t_new_lower_bound(const LabeledConstellation& s, const LabeledConstellation& y, const PncMapper& mapper,
                         double n0);
double t_new_lower_bound_finite(const LabeledConstellation& s, const LabeledConstellation& y,
                                const PncMapper& mapper, double n0, std::size_t L);

struct RayleighSrOptions {
    std::size_t n_channel_samples = 100000;
    std::uint64_t seed = 1;
    bool use_dmin = false;
    /// One coefficient per relay shared by every source.
    bool same_source_coefficient = false;
    /// Replace every draw by h = 1 (AWGN reduction).
    bool degenerate_awgn = false;
    unsigned workers = 1;
};

inline constexpr std::size_t kMinChannelSamples = 10000;

/// Channel-averaged S-R terms. W is over sum-constellation classes, W0 over
/// source points (no IRI). *_se are standard errors of the scalar SEPs.
struct RayleighSrEstimate {
    PairwiseMatrix w_sum;
    PairwiseMatrix w_source;
    double pe_sr = 0.0;
    double pe_sr_se = 0.0;
    double pe_sr_no_iri = 0.0;
    double pe_sr_no_iri_se = 0.0;
    std::size_t draws = 0;
};

/// Monte Carlo over channel draws. Throws InsufficientSamples below the floor.
/// Results depend only on (seed, n_channel_samples), not on `workers`.
RayleighSrEstimate rayleigh_sr_estimate(const PrecodingVector& theta, const Alphabet& alphabet,
                                        const FadingProfile& profile, const LabeledConstellation& y,
                                        const LabeledConstellation& s, double n0_sr,
                                        const RayleighSrOptions& opt);

/// Scalar form: estimate and standard error.
struct EstimateWithError {
    double value = 0.0;
    double standard_error = 0.0;
};

EstimateWithError rayleigh_pe_sr(const PrecodingVector& theta, const Alphabet& alphabet,
                                 const FadingProfile& profile, double n0_sr, const RayleighSrOptions& opt);

struct BoundReport {
    ChannelKind channel = ChannelKind::AWGN;
    Modulation modulation = Modulation::BPSK;
    std::size_t n_sources = 2;
    double snr_sr_db = 0.0;
    double snr_rd_db = 0.0;
    std::vector<cplx> theta;
    double P_e_RD = 0.0;
    /// Baseline destination after combining both relay branches.
    double P_e_RD_MRC = 0.0;
    double P_e_SR = 0.0;
    double P_e_SR_noIRI = 0.0;
    double P_prime = 0.0;
    double P_prime_MRC = 0.0;
    double P_triple_prime = 0.0;
    double P_case1 = 0.0;
    double P_case2 = 0.0;
    double T_cfnc_lb = 0.0;
    double T_new_lb = 0.0;
    /// Finite-L form, when L was supplied.
    std::optional<double> T_new_lb_finite;
    std::vector<double> P_e_k;
    ErrorCountDistribution xi;
    bool saturated = false;
    /// Standard error of the Monte Carlo S-R terms (Rayleigh only).
    double sr_standard_error = 0.0;
};

struct BoundRequest {
    Modulation modulation = Modulation::BPSK;
    std::size_t n_sources = 2;
    int theta_row = 1;
    std::optional<std::vector<cplx>> custom_theta;
    FadingProfile profile = FadingProfile::awgn(2, 1.0, 1.0);
    std::optional<std::size_t> L;
    RayleighSrOptions rayleigh;
};

/// Every bound at the N0 values carried by request.profile.
BoundReport evaluate_bounds(const BoundRequest& request);

}  // namespace irisim
