#include "irisim/constellation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "irisim/errors.hpp"

namespace irisim {

std::string_view to_string(Modulation m) {
    return m == Modulation::BPSK ? "BPSK" : "QPSK";
}

Modulation modulation_from_string(std::string_view s) {
    if (s == "BPSK" || s == "bpsk") return Modulation::BPSK;
    if (s == "QPSK" || s == "qpsk") return Modulation::QPSK;
    throw ConfigError("unknown modulation '" + std::string(s) + "'");
}

Alphabet Alphabet::bpsk() { return Alphabet(Modulation::BPSK, {{1.0, 0.0}, {-1.0, 0.0}}); }

Alphabet Alphabet::qpsk() {
    return Alphabet(Modulation::QPSK, {{1.0, 1.0}, {-1.0, 1.0}, {1.0, -1.0}, {-1.0, -1.0}});
}

Alphabet Alphabet::of(Modulation m) { return m == Modulation::BPSK ? bpsk() : qpsk(); }

std::optional<std::size_t> Alphabet::index_of(cplx v) const {
    for (std::size_t i = 0; i < points_.size(); ++i)
        if (points_[i] == v) return i;
    return std::nullopt;
}

std::optional<std::size_t> SumAlphabet::index_of(cplx v) const {
    for (std::size_t i = 0; i < points.size(); ++i)
        if (points[i] == v) return i;
    return std::nullopt;
}

SumAlphabet make_sum_alphabet(const Alphabet& alphabet) {
    const std::size_t m = alphabet.size();
    SumAlphabet out;
    out.base_size = m;
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = 0; b < m; ++b) {
            const cplx z = alphabet[a] + alphabet[b];
            if (std::find(out.points.begin(), out.points.end(), z) == out.points.end())
                out.points.push_back(z);
        }
    std::sort(out.points.begin(), out.points.end(), [](cplx l, cplx r) {
        return l.real() != r.real() ? l.real() < r.real() : l.imag() < r.imag();
    });
    out.preimages.assign(out.points.size(), 0);
    out.pair_to_sum.resize(m * m);
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = 0; b < m; ++b) {
            const auto idx = *out.index_of(alphabet[a] + alphabet[b]);
            out.pair_to_sum[a * m + b] = static_cast<std::uint8_t>(idx);
            ++out.preimages[idx];
        }
    return out;
}

std::size_t int_pow(std::size_t base, std::size_t exp) {
    std::size_t r = 1;
    while (exp-- > 0) r *= base;
    return r;
}

std::size_t encode_label(std::span<const std::uint8_t> digits, std::size_t radix) {
    std::size_t idx = 0;
    for (auto d : digits) idx = idx * radix + d;
    return idx;
}

void decode_label(std::size_t index, std::size_t radix, std::span<std::uint8_t> digits) {
    for (std::size_t i = digits.size(); i-- > 0;) {
        digits[i] = static_cast<std::uint8_t>(index % radix);
        index /= radix;
    }
}

namespace {

std::string format_label(std::span<const std::uint8_t> digits, std::span<const cplx> symbols) {
    std::ostringstream os;
    os << '(';
    for (std::size_t i = 0; i < digits.size(); ++i) {
        if (i) os << ", ";
        const cplx v = symbols[digits[i]];
        os << v.real();
        if (v.imag() != 0.0) os << (v.imag() < 0 ? "" : "+") << v.imag() << 'j';
    }
    os << ')';
    return os.str();
}

// Throws InjectivityViolation with a witness if two labels over `symbols`
// collide under Theta^T.
void check_injective(std::span<const cplx> thetas, std::span<const cplx> symbols,
                     const char* what) {
    const std::size_t n = thetas.size();
    const std::size_t count = int_pow(symbols.size(), n);
    std::vector<cplx> pts(count);
    std::vector<std::uint8_t> digits(n);
    double max_abs = 0.0;
    for (std::size_t a = 0; a < count; ++a) {
        decode_label(a, symbols.size(), digits);
        cplx acc{};
        for (std::size_t i = 0; i < n; ++i) acc += thetas[i] * symbols[digits[i]];
        pts[a] = acc;
        max_abs = std::max(max_abs, std::abs(acc));
    }
    const double tol = 1e-9 * std::max(1.0, max_abs);
    std::vector<std::uint8_t> other(n);
    for (std::size_t a = 0; a < count; ++a)
        for (std::size_t b = a + 1; b < count; ++b)
            if (std::abs(pts[a] - pts[b]) <= tol) {
                decode_label(a, symbols.size(), digits);
                decode_label(b, symbols.size(), other);
                throw InjectivityViolation(std::string("precoder is not injective over ") + what +
                                           ": " + format_label(digits, symbols) + " and " +
                                           format_label(other, symbols) +
                                           " map to the same point");
            }
}

}  // namespace

PrecodingVector::PrecodingVector(std::vector<cplx> thetas, const Alphabet& alphabet,
                                 std::optional<int> row)
    : thetas_(std::move(thetas)), row_(row), modulation_(alphabet.modulation()) {
    if (thetas_.empty()) throw ConfigError("precoding vector must be non-empty");

    const std::size_t n = thetas_.size();
    const std::size_t count = int_pow(alphabet.size(), n);
    std::vector<std::uint8_t> digits(n);
    double energy = 0.0;
    for (std::size_t a = 0; a < count; ++a) {
        decode_label(a, alphabet.size(), digits);
        cplx acc{};
        for (std::size_t i = 0; i < n; ++i) acc += thetas_[i] * alphabet[digits[i]];
        energy += std::norm(acc);
    }
    energy /= static_cast<double>(count);
    if (!(energy > 0.0)) throw InjectivityViolation("precoded constellation has zero energy");
    norm_scale_ = 1.0 / std::sqrt(energy);

    check_injective(thetas_, alphabet.points(), "source vectors");
    const SumAlphabet sums = make_sum_alphabet(alphabet);
    check_injective(thetas_, sums.points, "sum vectors");
}

PrecodingVector PrecodingVector::vandermonde(int n_sources, int row, const Alphabet& alphabet) {
    if (n_sources < 1) throw UnsupportedSize("N_S must be at least 1");
    if (row < 1 || row > n_sources)
        throw UnsupportedSize("Vandermonde row " + std::to_string(row) + " outside [1, " +
                              std::to_string(n_sources) + "]");

    const auto is_pow2 = [](int v) { return v > 0 && (v & (v - 1)) == 0; };
    const double pi = std::numbers::pi;
    double angle = 0.0;
    if (is_pow2(n_sources)) {
        angle = pi * (4.0 * row - 1.0) / (2.0 * n_sources);
    } else if (n_sources % 3 == 0 && is_pow2(n_sources / 3)) {
        angle = pi * (6.0 * row - 1.0) / (3.0 * n_sources);
    } else {
        throw UnsupportedSize("N_S = " + std::to_string(n_sources) +
                              " is neither 2^k nor 3*2^k");
    }

    std::vector<cplx> thetas(static_cast<std::size_t>(n_sources));
    for (int u = 0; u < n_sources; ++u) thetas[static_cast<std::size_t>(u)] = std::polar(1.0, angle * u);
    return PrecodingVector(std::move(thetas), alphabet, row);
}

PrecodingVector PrecodingVector::custom(std::vector<cplx> thetas, const Alphabet& alphabet) {
    return PrecodingVector(std::move(thetas), alphabet, std::nullopt);
}

cplx PrecodingVector::combine(std::span<const cplx> values) const {
    cplx acc{};
    for (std::size_t i = 0; i < thetas_.size(); ++i) acc += thetas_[i] * values[i];
    return norm_scale_ * acc;
}

LabeledConstellation::LabeledConstellation(LabelKind kind, std::vector<cplx> points,
                                           std::size_t label_width,
                                           std::vector<std::uint8_t> labels,
                                           std::vector<double> priors, bool dense_distances)
    : kind_(kind),
      points_(std::move(points)),
      label_width_(label_width),
      labels_(std::move(labels)),
      priors_(std::move(priors)) {
    const std::size_t n = points_.size();
    if (labels_.size() != n * label_width_ || priors_.size() != n)
        throw ConfigError("constellation label/prior sizes do not match point count");
    double total = 0.0;
    for (double p : priors_) {
        if (p < 0.0) throw ConfigError("constellation prior is negative");
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-12) throw ConfigError("constellation priors do not sum to 1");

    if (dense_distances) {
        dist_.resize(n * n);
        for (std::size_t a = 0; a < n; ++a) {
            dist_[a * n + a] = 0.0;
            for (std::size_t b = a + 1; b < n; ++b) {
                const double d = std::abs(points_[a] - points_[b]);
                dist_[a * n + b] = d;
                dist_[b * n + a] = d;
            }
        }
    }
}

double LabeledConstellation::distance(std::size_t a, std::size_t b) const {
    if (!dist_.empty()) return dist_[a * points_.size() + b];
    return a == b ? 0.0 : std::abs(points_[a] - points_[b]);
}

std::size_t LabeledConstellation::zero_norm(std::size_t a, std::size_t b) const {
    const auto la = label(a);
    const auto lb = label(b);
    std::size_t k = 0;
    for (std::size_t i = 0; i < label_width_; ++i) k += la[i] != lb[i];
    return k;
}

double LabeledConstellation::min_distance() const {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < size(); ++a)
        for (std::size_t b = a + 1; b < size(); ++b) best = std::min(best, distance(a, b));
    return best;
}

LabeledConstellation build_source_constellation(const PrecodingVector& theta,
                                                const Alphabet& alphabet) {
    const std::size_t n = theta.n_sources();
    const std::size_t count = int_pow(alphabet.size(), n);
    std::vector<cplx> points(count);
    std::vector<std::uint8_t> labels(count * n);
    std::vector<cplx> values(n);
    for (std::size_t a = 0; a < count; ++a) {
        std::span<std::uint8_t> digits(labels.data() + a * n, n);
        decode_label(a, alphabet.size(), digits);
        for (std::size_t i = 0; i < n; ++i) values[i] = alphabet[digits[i]];
        points[a] = theta.combine(values);
    }
    std::vector<double> priors(count, 1.0 / static_cast<double>(count));
    return LabeledConstellation(LabelKind::Source, std::move(points), n, std::move(labels),
                                std::move(priors), true);
}

LabeledConstellation build_sum_constellation(const PrecodingVector& theta,
                                             const Alphabet& alphabet) {
    const SumAlphabet sums = make_sum_alphabet(alphabet);
    const std::size_t n = theta.n_sources();
    const std::size_t count = int_pow(sums.size(), n);
    const double pair_count = static_cast<double>(alphabet.size() * alphabet.size());
    std::vector<cplx> points(count);
    std::vector<std::uint8_t> labels(count * n);
    std::vector<double> priors(count);
    std::vector<cplx> values(n);
    for (std::size_t a = 0; a < count; ++a) {
        std::span<std::uint8_t> digits(labels.data() + a * n, n);
        decode_label(a, sums.size(), digits);
        double prior = 1.0;
        for (std::size_t i = 0; i < n; ++i) {
            values[i] = sums.points[digits[i]];
            prior *= static_cast<double>(sums.preimages[digits[i]]) / pair_count;
        }
        points[a] = theta.combine(values);
        priors[a] = prior;
    }
    return LabeledConstellation(LabelKind::Sum, std::move(points), n, std::move(labels),
                                std::move(priors), true);
}

LabeledConstellation build_faded_sum_constellation(const PrecodingVector& theta,
                                                   const Alphabet& alphabet,
                                                   std::span<const cplx> h_sr, cplx h12,
                                                   bool dense_distances) {
    const std::size_t n = theta.n_sources();
    if (h_sr.size() != n) throw ConfigError("H_SR must have one coefficient per source");
    const std::size_t count = int_pow(alphabet.size(), 2 * n);
    std::vector<cplx> points(count);
    std::vector<std::uint8_t> labels(count * 2 * n);
    std::vector<cplx> values(n);
    for (std::size_t a = 0; a < count; ++a) {
        std::span<std::uint8_t> digits(labels.data() + a * 2 * n, 2 * n);
        decode_label(a, alphabet.size(), digits);
        for (std::size_t i = 0; i < n; ++i)
            values[i] = h_sr[i] * alphabet[digits[i]] + h12 * alphabet[digits[n + i]];
        points[a] = theta.combine(values);
    }
    std::vector<double> priors(count, 1.0 / static_cast<double>(count));
    return LabeledConstellation(LabelKind::Pair, std::move(points), 2 * n, std::move(labels),
                                std::move(priors), dense_distances);
}

LabeledConstellation build_faded_source_constellation(const PrecodingVector& theta,
                                                      const Alphabet& alphabet,
                                                      std::span<const cplx> h_sr,
                                                      bool dense_distances) {
    const std::size_t n = theta.n_sources();
    if (h_sr.size() != n) throw ConfigError("H_SR must have one coefficient per source");
    const std::size_t count = int_pow(alphabet.size(), n);
    std::vector<cplx> points(count);
    std::vector<std::uint8_t> labels(count * n);
    std::vector<cplx> values(n);
    for (std::size_t a = 0; a < count; ++a) {
        std::span<std::uint8_t> digits(labels.data() + a * n, n);
        decode_label(a, alphabet.size(), digits);
        for (std::size_t i = 0; i < n; ++i) values[i] = h_sr[i] * alphabet[digits[i]];
        points[a] = theta.combine(values);
    }
    std::vector<double> priors(count, 1.0 / static_cast<double>(count));
    return LabeledConstellation(LabelKind::Source, std::move(points), n, std::move(labels),
                                std::move(priors), dense_distances);
}

void pair_to_sum_label(const SumAlphabet& sums, std::span<const std::uint8_t> pair_label,
                       std::span<std::uint8_t> sum_label) {
    const std::size_t n = sum_label.size();
    for (std::size_t i = 0; i < n; ++i) sum_label[i] = sums.sum_of(pair_label[i], pair_label[n + i]);
}

}  // namespace irisim
