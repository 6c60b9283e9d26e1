#include "irisim/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <map>
#include <thread>
#include <tuple>

#include "irisim/errors.hpp"
#include "irisim/random.hpp"

namespace irisim {

double q_function(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

namespace {

double q_of_distance(double d, double n0) {
    if (n0 == 0.0) return d > 0.0 ? 0.0 : 0.5;
    return q_function(d / std::sqrt(2.0 * n0));
}

std::size_t positions(const LabeledConstellation& c) { return c.label_width(); }

}  // namespace

PairwiseMatrix awgn_pairwise(const LabeledConstellation& c, double n0) {
    if (!(n0 >= 0.0)) throw DomainError("N0 must be >= 0");
    PairwiseMatrix m(c.size());
    for (std::size_t a = 0; a < c.size(); ++a) {
        m(a, a) = 0.5;
        for (std::size_t b = a + 1; b < c.size(); ++b) {
            const double q = q_of_distance(c.distance(a, b), n0);
            m(a, b) = q;
            m(b, a) = q;
        }
    }
    return m;
}

double rayleigh_pairwise_rd(double d, double sigma2_pdf, double n0) {
    if (d == 0.0) return 1.0;
    return 2.0 * n0 / (2.0 * n0 + sigma2_pdf * d * d);
}

PairwiseMatrix rayleigh_rd_pairwise(const LabeledConstellation& c, double link_variance, double n0) {
    if (!(n0 >= 0.0)) throw DomainError("N0 must be >= 0");
    PairwiseMatrix m(c.size());
    const double sigma2_pdf = link_variance / 2.0;
    // The diagonal keeps the Q(0) convention of the AWGN matrices.
    for (std::size_t a = 0; a < c.size(); ++a)
        for (std::size_t b = 0; b < c.size(); ++b)
            m(a, b) = a == b ? 0.5 : rayleigh_pairwise_rd(c.distance(a, b), sigma2_pdf, n0);
    return m;
}

PairwiseMatrix elementwise_product(const PairwiseMatrix& a, const PairwiseMatrix& b) {
    PairwiseMatrix m(a.n);
    for (std::size_t i = 0; i < a.v.size(); ++i) m.v[i] = a.v[i] * b.v[i];
    return m;
}

PairwiseMatrix elementwise_mean(const PairwiseMatrix& a, const PairwiseMatrix& b) {
    PairwiseMatrix m(a.n);
    for (std::size_t i = 0; i < a.v.size(); ++i) m.v[i] = 0.5 * (a.v[i] + b.v[i]);
    return m;
}

double pe_k(const LabeledConstellation& c, const PairwiseMatrix& m, std::size_t k) {
    double total = 0.0;
    for (std::size_t a = 0; a < c.size(); ++a) {
        double row = 0.0;
        for (std::size_t b = 0; b < c.size(); ++b)
            if (c.zero_norm(a, b) == k) row += m(a, b);
        total += c.prior(a) * row;
    }
    return total;
}

double pe_link(const LabeledConstellation& c, const PairwiseMatrix& m) {
    double total = 0.0;
    for (std::size_t a = 0; a < c.size(); ++a) {
        double row = 0.0;
        for (std::size_t b = 0; b < c.size(); ++b) row += static_cast<double>(c.zero_norm(a, b)) * m(a, b);
        total += c.prior(a) * row;
    }
    return total / static_cast<double>(positions(c));
}

double pe_k_source_const(const LabeledConstellation& s, double n0, std::size_t k) {
    if (k < 1 || k > positions(s)) throw DomainError("k must lie in [1, N_S]");
    return pe_k(s, awgn_pairwise(s, n0), k);
}

double pe_rd(const LabeledConstellation& s, double n0) { return pe_link(s, awgn_pairwise(s, n0)); }
double pe_sr(const LabeledConstellation& y, double n0) { return pe_link(y, awgn_pairwise(y, n0)); }

double ErrorCountDistribution::mean() const {
    double m = 0.0;
    for (std::size_t j = 0; j < p.size(); ++j) m += static_cast<double>(j) * p[j];
    return m;
}

ErrorCountDistribution error_count_distribution(const LabeledConstellation& c, const PairwiseMatrix& m) {
    ErrorCountDistribution d;
    d.p.assign(positions(c) + 1, 0.0);
    double errors = 0.0;
    for (std::size_t k = 1; k < d.p.size(); ++k) {
        d.p[k] = pe_k(c, m, k);
        errors += d.p[k];
    }
    d.p[0] = 1.0 - errors;
    return d;
}

namespace {

bool differs_at(const LabeledConstellation& c, std::size_t a, std::size_t b, std::size_t pos) {
    return c.label(a)[pos] != c.label(b)[pos];
}

}  // namespace

double p_prime(const LabeledConstellation& s, const PairwiseMatrix& sr, const PairwiseMatrix& rd) {
    const std::size_t n = positions(s);
    double total = 0.0;
    for (std::size_t pos = 0; pos < n; ++pos)
        for (std::size_t a = 0; a < s.size(); ++a) {
            double row = 0.0;
            for (std::size_t b = 0; b < s.size(); ++b)
                if (differs_at(s, a, b, pos)) row += sr(a, b) * rd(b, a);
            total += s.prior(a) * row;
        }
    return total / static_cast<double>(n);
}

double p_prime(const LabeledConstellation& s, double n0) {
    const auto m = awgn_pairwise(s, n0);
    return p_prime(s, m, m);
}

std::vector<std::size_t> f_correspondence(const LabeledConstellation& y, const LabeledConstellation& s,
                                          const PncMapper& mapper) {
    const std::size_t n = positions(y);
    std::vector<std::uint8_t> digits(n);
    std::vector<std::size_t> out(y.size());
    for (std::size_t a = 0; a < y.size(); ++a) {
        const auto z = y.label(a);
        for (std::size_t i = 0; i < n; ++i) digits[i] = mapper.f(z[i]);
        out[a] = encode_label(digits, mapper.alphabet().size());
        if (out[a] >= s.size()) throw DomainError("f image outside the source constellation");
    }
    return out;
}

double p_triple_prime(const LabeledConstellation& y, const LabeledConstellation& s, const PncMapper& mapper,
                      const PairwiseMatrix& sr_y, const PairwiseMatrix& rd_s) {
    const auto fwd = f_correspondence(y, s, mapper);
    const std::size_t n = positions(y);
    double total = 0.0;
    for (std::size_t pos = 0; pos < n; ++pos)
        for (std::size_t a = 0; a < y.size(); ++a) {
            double row = 0.0;
            for (std::size_t b = 0; b < y.size(); ++b)
                if (differs_at(y, a, b, pos)) row += sr_y(a, b) * rd_s(fwd[b], fwd[a]);
            total += y.prior(a) * row;
        }
    return total / static_cast<double>(n);
}

double p_triple_prime(const LabeledConstellation& y, const LabeledConstellation& s, const PncMapper& mapper,
                      double n0) {
    return p_triple_prime(y, s, mapper, awgn_pairwise(y, n0), awgn_pairwise(s, n0));
}

double p_case2(const LabeledConstellation& s, const LabeledConstellation& y, const PncMapper& mapper,
               const PairwiseMatrix& rd_s, const PairwiseMatrix& sr_y) {
    const std::size_t n = positions(s);
    const std::size_t M = mapper.alphabet().size();
    const std::size_t ns = s.size();
    const std::size_t ny = y.size();
    const auto fwd = f_correspondence(y, s, mapper);
    const auto& sums = mapper.sums();

    // A[a][N][u]: R-D error from s_a to any point whose N-th symbol is u != (x_a)_N.
    std::vector<double> A(ns * n * M, 0.0);
    // R[k][N][w]: D detects a point with N-th symbol w after the relay forwarded f(z_k).
    std::vector<double> R(ny * n * M, 0.0);
    for (std::size_t a = 0; a < ns; ++a)
        for (std::size_t a2 = 0; a2 < ns; ++a2)
            for (std::size_t N = 0; N < n; ++N) {
                const auto u = s.label(a2)[N];
                if (u != s.label(a)[N]) A[(a * n + N) * M + u] += rd_s(a, a2);
            }
    for (std::size_t k = 0; k < ny; ++k)
        for (std::size_t k2 = 0; k2 < ns; ++k2)
            for (std::size_t N = 0; N < n; ++N) R[(k * n + N) * M + s.label(k2)[N]] += rd_s(fwd[k], k2);

    // S[k][N][u][t]: the second detection w satisfies g(u, w) = t.
    std::vector<double> S(ny * n * M * M, 0.0);
    for (std::size_t k = 0; k < ny; ++k)
        for (std::size_t N = 0; N < n; ++N)
            for (std::size_t u = 0; u < M; ++u)
                for (std::size_t w = 0; w < M; ++w) {
                    const std::size_t t = mapper.g(static_cast<std::uint8_t>(u), static_cast<std::uint8_t>(w));
                    S[((k * n + N) * M + u) * M + t] += R[(k * n + N) * M + w];
                }

    // V[y][N][u][t] = sum_k W(y, k) S[k][N][u][t].
    const std::size_t inner = n * M * M;
    std::vector<double> V(ny * inner, 0.0);
    for (std::size_t yy = 0; yy < ny; ++yy)
        for (std::size_t k = 0; k < ny; ++k) {
            const double w = sr_y(yy, k);
            if (w == 0.0) continue;
            const double* src = &S[k * inner];
            double* dst = &V[yy * inner];
            for (std::size_t i = 0; i < inner; ++i) dst[i] += w * src[i];
        }

    std::vector<std::uint8_t> digits(n);
    double total = 0.0;
    for (std::size_t a = 0; a < ns; ++a) {
        const auto xa = s.label(a);
        for (std::size_t b = 0; b < ns; ++b) {
            const auto xb = s.label(b);
            for (std::size_t i = 0; i < n; ++i) digits[i] = sums.sum_of(xa[i], xb[i]);
            const std::size_t yab = encode_label(digits, sums.size());
            for (std::size_t N = 0; N < n; ++N)
                for (std::size_t u = 0; u < M; ++u) {
                    const double first = A[(a * n + N) * M + u];
                    if (first == 0.0) continue;
                    total += s.prior(a) * s.prior(b) * first * V[yab * inner + (N * M + u) * M + xb[N]];
                }
        }
    }
    return total / static_cast<double>(n);
}

double p_case2(const LabeledConstellation& s, const LabeledConstellation& y, const PncMapper& mapper,
               double n0) {
    return p_case2(s, y, mapper, awgn_pairwise(s, n0), awgn_pairwise(y, n0));
}

Clamped clamp_probability(double p) {
    if (p < 0.0) return {0.0, true};
    if (p > 1.0) return {1.0, true};
    return {p, false};
}

namespace {

double clamp_into(double p, double hi, bool& saturated) {
    if (p < 0.0) {
        saturated = true;
        return 0.0;
    }
    if (p > hi) {
        saturated = true;
        return hi;
    }
    return p;
}

}  // namespace

double t_cfnc_from_terms(const BoundTerms& t) {
    bool sat = false;
    return clamp_into(0.5 * ((1.0 - t.pe_sr_no_iri) * (1.0 - t.pe_rd_mrc) + t.p_prime_mrc), 0.5, sat);
}

double t_new_from_terms(const BoundTerms& t) {
    bool sat = false;
    const double rd_ok = 1.0 - t.pe_rd;
    return clamp_into((1.0 - t.pe_sr) * rd_ok * rd_ok + rd_ok * t.p_triple_prime + t.p_case2, 1.0, sat);
}

double t_new_finite_from_terms(const BoundTerms& t, std::size_t L) {
    if (L < 1) throw DomainError("L must be >= 1");
    bool sat = false;
    const double first = clamp_into((1.0 - t.pe_sr_no_iri) * (1.0 - t.pe_rd) + t.p_prime, 1.0, sat);
    const double steady = t_new_from_terms(t);
    return (first + static_cast<double>(L - 1) * steady) / static_cast<double>(L + 1);
}

namespace {

BoundTerms assemble(const LabeledConstellation& s, const LabeledConstellation& y, const PncMapper& mapper,
                    const PairwiseMatrix& rd, const PairwiseMatrix& rd_mrc, const PairwiseMatrix& sr_y,
                    const PairwiseMatrix& sr_s) {
    BoundTerms t;
    const auto take = [&t](double p) {
        const auto c = clamp_probability(p);
        t.saturated = t.saturated || c.saturated;
        return c.value;
    };
    t.pe_rd = take(pe_link(s, rd));
    t.pe_rd_mrc = take(pe_link(s, rd_mrc));
    t.pe_sr = take(pe_link(y, sr_y));
    t.pe_sr_no_iri = take(pe_link(s, sr_s));
    t.p_prime = take(p_prime(s, sr_s, rd));
    t.p_prime_mrc = take(p_prime(s, sr_s, rd_mrc));
    t.p_triple_prime = take(p_triple_prime(y, s, mapper, sr_y, rd));
    t.p_case2 = take(p_case2(s, y, mapper, rd, sr_y));
    for (std::size_t k = 1; k <= positions(s); ++k) t.pe_k_rd.push_back(take(pe_k(s, rd, k)));
    return t;
}

BoundTerms awgn_terms(const LabeledConstellation& s, const LabeledConstellation& y, const PncMapper& mapper,
                      double n0_sr, double n0_rd) {
    const auto rd = awgn_pairwise(s, n0_rd);
    return assemble(s, y, mapper, rd, awgn_pairwise(s, n0_rd / 2.0), awgn_pairwise(y, n0_sr),
                    n0_sr == n0_rd ? rd : awgn_pairwise(s, n0_sr));
}

}  // namespace

double t_cfnc_lower_bound(const LabeledConstellation& s, double n0) {
    const auto rd = awgn_pairwise(s, n0);
    const auto mrc = awgn_pairwise(s, n0 / 2.0);
    BoundTerms t;
    t.pe_sr_no_iri = clamp_probability(pe_link(s, rd)).value;
    t.pe_rd_mrc = clamp_probability(pe_link(s, mrc)).value;
    t.p_prime_mrc = clamp_probability(p_prime(s, rd, mrc)).value;
    return t_cfnc_from_terms(t);
}

double t_new_lower_bound(const LabeledConstellation& s, const LabeledConstellation& y, const PncMapper& mapper,
                         double n0) {
    return t_new_from_terms(awgn_terms(s, y, mapper, n0, n0));
}

double t_new_lower_bound_finite(const LabeledConstellation& s, const LabeledConstellation& y,
                                const PncMapper& mapper, double n0, std::size_t L) {
    return t_new_finite_from_terms(awgn_terms(s, y, mapper, n0, n0), L);
}

namespace {

constexpr std::size_t kMaxChunks = 64;
constexpr std::size_t kMinChunk = 1024;

struct ChunkResult {
    std::vector<double> w_sum;     // unnormalised, indexed by sum classes
    std::vector<double> w_source;
    double pe = 0.0, pe2 = 0.0;
    double pe0 = 0.0, pe02 = 0.0;
};

class SrSampler {
public:
    SrSampler(const PrecodingVector& theta, const Alphabet& alphabet, const FadingProfile& profile,
              const LabeledConstellation& y, const LabeledConstellation& s, double n0,
              const RayleighSrOptions& opt)
        : theta_(theta), alphabet_(alphabet), profile_(profile), y_(y), s_(s), n0_(n0), opt_(opt),
          n_(theta.n_sources()), sums_(make_sum_alphabet(alphabet)) {
        const std::size_t pairs = int_pow(alphabet.size(), 2 * n_);
        pair_class_.resize(pairs);
        std::vector<std::uint8_t> digits(2 * n_), z(n_);
        class_count_.assign(y.size(), 0.0);
        for (std::size_t p = 0; p < pairs; ++p) {
            decode_label(p, alphabet.size(), digits);
            pair_to_sum_label(sums_, digits, z);
            pair_class_[p] = encode_label(z, sums_.size());
            class_count_[pair_class_[p]] += 1.0;
        }
        zn_y_.resize(y.size() * y.size());
        for (std::size_t a = 0; a < y.size(); ++a)
            for (std::size_t b = 0; b < y.size(); ++b)
                zn_y_[a * y.size() + b] = static_cast<double>(y.zero_norm(a, b)) / static_cast<double>(n_);
    }

    void run_draw(std::size_t draw, ChunkResult& out) {
        RandomStream rng(derive_seed(opt_.seed, draw));
        const std::size_t m = draw % 2;
        std::vector<cplx> h(n_, cplx{1.0, 0.0});
        cplx h12{1.0, 0.0};
        if (!opt_.degenerate_awgn) {
            if (opt_.same_source_coefficient) {
                const cplx shared = rng.complex_gaussian(profile_.sigma2_sr[0][m]);
                std::fill(h.begin(), h.end(), shared);
            } else {
                for (std::size_t i = 0; i < n_; ++i) h[i] = rng.complex_gaussian(profile_.sigma2_sr[i][m]);
            }
            h12 = rng.complex_gaussian(profile_.sigma2_rr);
        }
        const double pe = sum_draw(h, h12, out.w_sum);
        out.pe += pe;
        out.pe2 += pe * pe;
        const double pe0 = source_draw(h, out.w_source);
        out.pe0 += pe0;
        out.pe02 += pe0 * pe0;
    }

private:
    struct Merged {
        cplx point;
        std::size_t cls;
        double mult;
    };

    // Adds this draw's class-averaged W into acc and returns its P_e-SR.
    double sum_draw(const std::vector<cplx>& h, cplx h12, std::vector<double>& acc) {
        const auto faded = build_faded_sum_constellation(theta_, alphabet_, h, h12);
        // Coincident points that carry the same sum label are one hypothesis.
        std::map<std::tuple<std::size_t, double, double>, std::size_t> index;
        merged_.clear();
        for (std::size_t p = 0; p < faded.size(); ++p) {
            const cplx v = faded.point(p);
            const auto key = std::make_tuple(pair_class_[p], v.real(), v.imag());
            auto [it, inserted] = index.emplace(key, merged_.size());
            if (inserted)
                merged_.push_back({v, pair_class_[p], 1.0});
            else
                merged_[it->second].mult += 1.0;
        }
        const std::size_t ny = y_.size();
        draw_w_.assign(ny * ny, 0.0);
        const std::size_t count = merged_.size();
        if (opt_.use_dmin) {
            for (std::size_t r = 0; r < count; ++r) {
                double best = std::numeric_limits<double>::infinity();
                std::size_t arg = r;
                for (std::size_t q = 0; q < count; ++q) {
                    if (merged_[q].cls == merged_[r].cls) continue;
                    const double d = std::abs(merged_[r].point - merged_[q].point);
                    if (d < best) {
                        best = d;
                        arg = q;
                    }
                }
                draw_w_[merged_[r].cls * ny + merged_[r].cls] += merged_[r].mult * 0.5;
                if (arg != r) draw_w_[merged_[r].cls * ny + merged_[arg].cls] += merged_[r].mult * q_of_distance(best, n0_);
            }
        } else {
            for (std::size_t r = 0; r < count; ++r) {
                draw_w_[merged_[r].cls * ny + merged_[r].cls] += merged_[r].mult * 0.5;
                for (std::size_t q = r + 1; q < count; ++q) {
                    const double qv = q_of_distance(std::abs(merged_[r].point - merged_[q].point), n0_);
                    draw_w_[merged_[r].cls * ny + merged_[q].cls] += merged_[r].mult * qv;
                    draw_w_[merged_[q].cls * ny + merged_[r].cls] += merged_[q].mult * qv;
                }
            }
        }
        double pe = 0.0;
        for (std::size_t a = 0; a < ny; ++a) {
            const double inv = 1.0 / class_count_[a];
            double row = 0.0;
            for (std::size_t b = 0; b < ny; ++b) {
                const double w = draw_w_[a * ny + b] * inv;
                acc[a * ny + b] += w;
                row += zn_y_[a * ny + b] * w;
            }
            pe += y_.prior(a) * row;
        }
        return pe;
    }

    double source_draw(const std::vector<cplx>& h, std::vector<double>& acc) {
        const auto faded = build_faded_source_constellation(theta_, alphabet_, h);
        const std::size_t ns = faded.size();
        double pe = 0.0;
        for (std::size_t a = 0; a < ns; ++a) {
            acc[a * ns + a] += 0.5;
            double row = 0.0;
            for (std::size_t b = 0; b < ns; ++b) {
                if (b == a) continue;
                const double q = q_of_distance(std::abs(faded.point(a) - faded.point(b)), n0_);
                acc[a * ns + b] += q;
                row += static_cast<double>(s_.zero_norm(a, b)) * q;
            }
            pe += s_.prior(a) * row;
        }
        return pe / static_cast<double>(n_);
    }

    const PrecodingVector& theta_;
    const Alphabet& alphabet_;
    const FadingProfile& profile_;
    const LabeledConstellation& y_;
    const LabeledConstellation& s_;
    double n0_;
    const RayleighSrOptions& opt_;
    std::size_t n_;
    SumAlphabet sums_;
    std::vector<std::size_t> pair_class_;
    std::vector<double> class_count_;
    std::vector<double> zn_y_;
    std::vector<Merged> merged_;
    std::vector<double> draw_w_;
};

}  // namespace

RayleighSrEstimate rayleigh_sr_estimate(const PrecodingVector& theta, const Alphabet& alphabet,
                                        const FadingProfile& profile, const LabeledConstellation& y,
                                        const LabeledConstellation& s, double n0_sr,
                                        const RayleighSrOptions& opt) {
    if (opt.n_channel_samples < kMinChannelSamples)
        throw InsufficientSamples("need at least " + std::to_string(kMinChannelSamples) + " channel draws, got " +
                                  std::to_string(opt.n_channel_samples));
    if (!(n0_sr >= 0.0)) throw DomainError("N0 must be >= 0");
    profile.validate(theta.n_sources());

    const std::size_t total = opt.n_channel_samples;
    const std::size_t chunk = std::max(kMinChunk, (total + kMaxChunks - 1) / kMaxChunks);
    const std::size_t n_chunks = (total + chunk - 1) / chunk;
    std::vector<ChunkResult> results(n_chunks);

    std::atomic<std::size_t> next{0};
    const auto work = [&] {
        SrSampler sampler(theta, alphabet, profile, y, s, n0_sr, opt);
        for (std::size_t c = next++; c < n_chunks; c = next++) {
            auto& r = results[c];
            r.w_sum.assign(y.size() * y.size(), 0.0);
            r.w_source.assign(s.size() * s.size(), 0.0);
            const std::size_t end = std::min(total, (c + 1) * chunk);
            for (std::size_t d = c * chunk; d < end; ++d) sampler.run_draw(d, r);
        }
    };
    const unsigned workers = std::max(1u, std::min<unsigned>(opt.workers, static_cast<unsigned>(n_chunks)));
    if (workers == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (unsigned i = 0; i < workers; ++i) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }

    RayleighSrEstimate est;
    est.draws = total;
    est.w_sum = PairwiseMatrix(y.size());
    est.w_source = PairwiseMatrix(s.size());
    double pe = 0.0, pe2 = 0.0, pe0 = 0.0, pe02 = 0.0;
    for (const auto& r : results) {
        for (std::size_t i = 0; i < r.w_sum.size(); ++i) est.w_sum.v[i] += r.w_sum[i];
        for (std::size_t i = 0; i < r.w_source.size(); ++i) est.w_source.v[i] += r.w_source[i];
        pe += r.pe;
        pe2 += r.pe2;
        pe0 += r.pe0;
        pe02 += r.pe02;
    }
    const double n = static_cast<double>(total);
    for (auto& v : est.w_sum.v) v /= n;
    for (auto& v : est.w_source.v) v /= n;
    const auto stderr_of = [n](double sum, double sum2) {
        const double mean = sum / n;
        const double var = std::max(0.0, sum2 / n - mean * mean) * n / (n - 1.0);
        return std::sqrt(var / n);
    };
    est.pe_sr = pe / n;
    est.pe_sr_se = stderr_of(pe, pe2);
    est.pe_sr_no_iri = pe0 / n;
    est.pe_sr_no_iri_se = stderr_of(pe0, pe02);
    return est;
}

EstimateWithError rayleigh_pe_sr(const PrecodingVector& theta, const Alphabet& alphabet,
                                 const FadingProfile& profile, double n0_sr, const RayleighSrOptions& opt) {
    const auto y = build_sum_constellation(theta, alphabet);
    const auto s = build_source_constellation(theta, alphabet);
    const auto est = rayleigh_sr_estimate(theta, alphabet, profile, y, s, n0_sr, opt);
    return {est.pe_sr, est.pe_sr_se};
}

BoundReport evaluate_bounds(const BoundRequest& req) {
    const Alphabet alphabet = Alphabet::of(req.modulation);
    const PrecodingVector theta =
        req.custom_theta ? PrecodingVector::custom(*req.custom_theta, alphabet)
                         : PrecodingVector::vandermonde(static_cast<int>(req.n_sources), req.theta_row, alphabet);
    req.profile.validate(req.n_sources);
    const auto mapper = make_pnc_mapper(req.modulation);
    const auto s = build_source_constellation(theta, alphabet);
    const auto y = build_sum_constellation(theta, alphabet);
    const double n0_sr = req.profile.n0_sr;
    const double n0_rd = req.profile.n0_rd;

    BoundReport rep;
    rep.channel = req.profile.kind;
    rep.modulation = req.modulation;
    rep.n_sources = req.n_sources;
    rep.snr_sr_db = -10.0 * std::log10(n0_sr);
    rep.snr_rd_db = -10.0 * std::log10(n0_rd);
    rep.theta.assign(theta.thetas().begin(), theta.thetas().end());

    BoundTerms t;
    PairwiseMatrix rd;
    if (req.profile.kind == ChannelKind::AWGN) {
        t = awgn_terms(s, y, *mapper, n0_sr, n0_rd);
        rd = awgn_pairwise(s, n0_rd);
    } else {
        const auto rd1 = rayleigh_rd_pairwise(s, req.profile.sigma2_rd[0], n0_rd);
        const auto rd2 = rayleigh_rd_pairwise(s, req.profile.sigma2_rd[1], n0_rd);
        rd = elementwise_mean(rd1, rd2);
        const auto est = rayleigh_sr_estimate(theta, alphabet, req.profile, y, s, n0_sr, req.rayleigh);
        t = assemble(s, y, *mapper, rd, elementwise_product(rd1, rd2), est.w_sum, est.w_source);
        rep.sr_standard_error = est.pe_sr_se;
    }

    rep.P_e_RD = t.pe_rd;
    rep.P_e_RD_MRC = t.pe_rd_mrc;
    rep.P_e_SR = t.pe_sr;
    rep.P_e_SR_noIRI = t.pe_sr_no_iri;
    rep.P_prime = t.p_prime;
    rep.P_prime_MRC = t.p_prime_mrc;
    rep.P_triple_prime = t.p_triple_prime;
    rep.P_case1 = (1.0 - t.pe_rd) * t.p_triple_prime;
    rep.P_case2 = t.p_case2;
    rep.P_e_k = t.pe_k_rd;
    rep.xi = error_count_distribution(s, rd);
    rep.T_cfnc_lb = t_cfnc_from_terms(t);
    rep.T_new_lb = t_new_from_terms(t);
    if (req.L) rep.T_new_lb_finite = t_new_finite_from_terms(t, *req.L);

    const double raw_cfnc = 0.5 * ((1.0 - t.pe_sr_no_iri) * (1.0 - t.pe_rd_mrc) + t.p_prime_mrc);
    const double rd_ok = 1.0 - t.pe_rd;
    const double raw_new = (1.0 - t.pe_sr) * rd_ok * rd_ok + rd_ok * t.p_triple_prime + t.p_case2;
    rep.saturated = t.saturated || raw_cfnc != rep.T_cfnc_lb || raw_new != rep.T_new_lb;
    return rep;
}

}  // namespace irisim
