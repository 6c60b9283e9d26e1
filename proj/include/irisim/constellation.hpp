#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace irisim {

using cplx = std::complex<double>;

enum class Modulation { BPSK, QPSK };

std::string_view to_string(Modulation m);
Modulation modulation_from_string(std::string_view s);

/// Base modulation alphabet A_x.
class Alphabet {
public:
    static Alphabet bpsk();
    static Alphabet qpsk();
    static Alphabet of(Modulation m);

    Modulation modulation() const { return modulation_; }
    std::size_t size() const { return points_.size(); }
    const cplx& operator[](std::size_t i) const { return points_[i]; }
    std::span<const cplx> points() const { return points_; }

    /// Exact lookup; alphabet points are small integers so equality is safe.
    std::optional<std::size_t> index_of(cplx v) const;

private:
    Alphabet(Modulation m, std::vector<cplx> pts) : modulation_(m), points_(std::move(pts)) {}

    Modulation modulation_;
    std::vector<cplx> points_;
};

/// A_z = {x_a + x_b}: the per-component superposition alphabet seen by a
/// listening relay. Points are sorted by (real, imag).
struct SumAlphabet {
    std::vector<cplx> points;
    /// Number of ordered pairs (x_a, x_b) producing each point.
    std::vector<std::uint32_t> preimages;
    /// pair_to_sum[a * M + b] = index of x_a + x_b.
    std::vector<std::uint8_t> pair_to_sum;
    std::size_t base_size = 0;

    std::size_t size() const { return points.size(); }
    std::uint8_t sum_of(std::size_t a, std::size_t b) const { return pair_to_sum[a * base_size + b]; }
    std::optional<std::size_t> index_of(cplx v) const;
};

SumAlphabet make_sum_alphabet(const Alphabet& alphabet);

/// Mixed-radix label codec. Digit 0 is the most significant (source 1).
std::size_t encode_label(std::span<const std::uint8_t> digits, std::size_t radix);
void decode_label(std::size_t index, std::size_t radix, std::span<std::uint8_t> digits);
std::size_t int_pow(std::size_t base, std::size_t exp);

/// CFNC precoding row Theta plus the scalar that normalises the mean energy of
/// norm_scale * Theta^T x to one over uniform x.
class PrecodingVector {
public:
    /// Row `row` (1-based) of the N_S x N_S Vandermonde matrix.
    static PrecodingVector vandermonde(int n_sources, int row, const Alphabet& alphabet);
    static PrecodingVector custom(std::vector<cplx> thetas, const Alphabet& alphabet);

    std::span<const cplx> thetas() const { return thetas_; }
    std::size_t n_sources() const { return thetas_.size(); }
    double norm_scale() const { return norm_scale_; }
    /// Vandermonde row used, when built from the recipe.
    std::optional<int> row() const { return row_; }
    Modulation modulation() const { return modulation_; }

    /// norm_scale * sum_i theta_i * v_i.
    cplx combine(std::span<const cplx> values) const;

private:
    PrecodingVector(std::vector<cplx> thetas, const Alphabet& alphabet, std::optional<int> row);

    std::vector<cplx> thetas_;
    double norm_scale_ = 1.0;
    std::optional<int> row_;
    Modulation modulation_;
};

enum class LabelKind { Source, Sum, Pair };

/// Finite point set with per-point label vectors and prior weights.
///
/// Source labels hold alphabet indices (width N_S), sum labels hold
/// SumAlphabet indices (width N_S), pair labels hold x indices followed by
/// x_r indices (width 2 N_S).
class LabeledConstellation {
public:
    LabeledConstellation(LabelKind kind, std::vector<cplx> points, std::size_t label_width,
                         std::vector<std::uint8_t> labels, std::vector<double> priors,
                         bool dense_distances);

    LabelKind kind() const { return kind_; }
    std::size_t size() const { return points_.size(); }
    std::size_t label_width() const { return label_width_; }

    const cplx& point(std::size_t i) const { return points_[i]; }
    std::span<const cplx> points() const { return points_; }
    std::span<const std::uint8_t> label(std::size_t i) const {
        return {labels_.data() + i * label_width_, label_width_};
    }
    double prior(std::size_t i) const { return priors_[i]; }
    std::span<const double> priors() const { return priors_; }

    bool has_distance_matrix() const { return !dist_.empty(); }
    /// |point_a - point_b|; read from the dense matrix when present.
    double distance(std::size_t a, std::size_t b) const;

    /// Number of label positions in which a and b differ.
    std::size_t zero_norm(std::size_t a, std::size_t b) const;

    /// Minimum distance between distinct points.
    double min_distance() const;

private:
    LabelKind kind_;
    std::vector<cplx> points_;
    std::size_t label_width_;
    std::vector<std::uint8_t> labels_;
    std::vector<double> priors_;
    std::vector<double> dist_;
};

/// A_s: norm_scale * Theta^T x for every x in A_x^{N_S}, uniform priors.
LabeledConstellation build_source_constellation(const PrecodingVector& theta,
                                                const Alphabet& alphabet);

/// A_y: norm_scale * Theta^T z for z in A_z^{N_S}; priors from preimage counts.
LabeledConstellation build_sum_constellation(const PrecodingVector& theta,
                                             const Alphabet& alphabet);

/// norm_scale * Theta^T (H_SR x + h12 x_r) over every (x, x_r) pair label.
/// Uniform priors 1 / M^{2 N_S}. Distances are computed on demand unless
/// `dense_distances` is set.
LabeledConstellation build_faded_sum_constellation(const PrecodingVector& theta,
                                                   const Alphabet& alphabet,
                                                   std::span<const cplx> h_sr, cplx h12,
                                                   bool dense_distances = false);

/// norm_scale * Theta^T H_SR x over source labels (no interference term).
LabeledConstellation build_faded_source_constellation(const PrecodingVector& theta,
                                                      const Alphabet& alphabet,
                                                      std::span<const cplx> h_sr,
                                                      bool dense_distances = false);

/// Component-wise sum labels (SumAlphabet indices) of a pair label.
void pair_to_sum_label(const SumAlphabet& sums, std::span<const std::uint8_t> pair_label,
                       std::span<std::uint8_t> sum_label);

}  // namespace irisim
