#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "irisim/constellation.hpp"

namespace irisim {

// Scalar PNC maps. BPSK follows f(z) = 1 - |z| and g(a, b) = 1 - |a + b|;
// QPSK applies them independently to the in-phase and quadrature parts.
// All four throw DomainError outside their alphabets.
double f_bpsk(double z);
double g_bpsk(double relay_symbol, double forwarded);
cplx f_qpsk(cplx z);
cplx g_qpsk(cplx relay_symbol, cplx forwarded);

/// Relay mapping f: A_z -> A_x and destination demapping g: A_x x A_x -> A_x,
/// expressed on alphabet indices. A new modulation plugs in by providing a
/// mapper whose tables satisfy g(x_r, f(x + x_r)) = x.
class PncMapper {
public:
    virtual ~PncMapper() = default;

    virtual const Alphabet& alphabet() const = 0;
    virtual const SumAlphabet& sums() const = 0;

    /// Relay step: sum index -> alphabet index of the symbol to forward.
    virtual std::uint8_t f(std::uint8_t sum_index) const = 0;
    /// Destination step: (previous forwarded, current forwarded) -> source symbol.
    virtual std::uint8_t g(std::uint8_t relay_prev, std::uint8_t relay_next) const = 0;
};

/// Lookup-table mapper for BPSK and QPSK.
class TablePncMapper final : public PncMapper {
public:
    /// Builds and validates the tables; throws DomainError if the round trip fails.
    explicit TablePncMapper(Modulation m);

    const Alphabet& alphabet() const override { return alphabet_; }
    const SumAlphabet& sums() const override { return sums_; }
    std::uint8_t f(std::uint8_t sum_index) const override { return f_table_[sum_index]; }
    std::uint8_t g(std::uint8_t relay_prev, std::uint8_t relay_next) const override {
        return g_table_[relay_prev * alphabet_.size() + relay_next];
    }

private:
    Alphabet alphabet_;
    SumAlphabet sums_;
    std::vector<std::uint8_t> f_table_;
    std::vector<std::uint8_t> g_table_;
};

std::shared_ptr<const PncMapper> make_pnc_mapper(Modulation m);

}  // namespace irisim
