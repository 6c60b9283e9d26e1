#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

namespace irisim {

/// SplitMix64 finaliser, used to derive independent stream seeds.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Counter-based split: the stream for (master, a, b) depends only on those
/// three values, never on how work is scheduled.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b = 0) {
    return mix64(mix64(mix64(master) ^ a) ^ (b * 0xd1b54a32d192ed03ULL));
}

/// Seedable generator with the Gaussian helpers the simulator needs.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

    std::mt19937_64& engine() { return engine_; }

    double gaussian() { return normal_(engine_); }
    double uniform() { return uniform_(engine_); }
    std::size_t uniform_index(std::size_t n) {
        return std::uniform_int_distribution<std::size_t>(0, n - 1)(engine_);
    }

    /// CN(0, variance): real and imaginary parts each carry variance / 2.
    std::complex<double> complex_gaussian(double variance) {
        const double s = std::sqrt(variance / 2.0);
        const double re = gaussian();
        const double im = gaussian();
        return {s * re, s * im};
    }

private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
    std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

}  // namespace irisim
