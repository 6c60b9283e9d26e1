#include "irisim/pnc.hpp"

#include <cmath>
#include <string>

#include "irisim/errors.hpp"

namespace irisim {

namespace {

bool is_bpsk_sum(double z) { return z == 2.0 || z == 0.0 || z == -2.0; }
bool is_bpsk_symbol(double x) { return x == 1.0 || x == -1.0; }

}  // namespace

double f_bpsk(double z) {
    if (!is_bpsk_sum(z)) throw DomainError("f_bpsk: " + std::to_string(z) + " is not in {-2, 0, 2}");
    return 1.0 - std::abs(z);
}

double g_bpsk(double relay_symbol, double forwarded) {
    if (!is_bpsk_symbol(relay_symbol) || !is_bpsk_symbol(forwarded))
        throw DomainError("g_bpsk: arguments must be +1 or -1");
    return 1.0 - std::abs(relay_symbol + forwarded);
}

cplx f_qpsk(cplx z) {
    if (!is_bpsk_sum(z.real()) || !is_bpsk_sum(z.imag()))
        throw DomainError("f_qpsk: argument is not a QPSK sum");
    return {f_bpsk(z.real()), f_bpsk(z.imag())};
}

cplx g_qpsk(cplx relay_symbol, cplx forwarded) {
    if (!is_bpsk_symbol(relay_symbol.real()) || !is_bpsk_symbol(relay_symbol.imag()) ||
        !is_bpsk_symbol(forwarded.real()) || !is_bpsk_symbol(forwarded.imag()))
        throw DomainError("g_qpsk: arguments must be QPSK symbols");
    return {g_bpsk(relay_symbol.real(), forwarded.real()),
            g_bpsk(relay_symbol.imag(), forwarded.imag())};
}

TablePncMapper::TablePncMapper(Modulation m)
    : alphabet_(Alphabet::of(m)), sums_(make_sum_alphabet(alphabet_)) {
    const auto f_value = [m](cplx z) { return m == Modulation::BPSK ? cplx{f_bpsk(z.real()), 0.0} : f_qpsk(z); };
    const auto g_value = [m](cplx a, cplx b) {
        return m == Modulation::BPSK ? cplx{g_bpsk(a.real(), b.real()), 0.0} : g_qpsk(a, b);
    };

    f_table_.resize(sums_.size());
    for (std::size_t z = 0; z < sums_.size(); ++z) {
        const auto idx = alphabet_.index_of(f_value(sums_.points[z]));
        if (!idx) throw DomainError("PNC f maps outside the alphabet");
        f_table_[z] = static_cast<std::uint8_t>(*idx);
    }

    const std::size_t mm = alphabet_.size();
    g_table_.resize(mm * mm);
    for (std::size_t a = 0; a < mm; ++a)
        for (std::size_t b = 0; b < mm; ++b) {
            const auto idx = alphabet_.index_of(g_value(alphabet_[a], alphabet_[b]));
            if (!idx) throw DomainError("PNC g maps outside the alphabet");
            g_table_[a * mm + b] = static_cast<std::uint8_t>(*idx);
        }

    for (std::size_t x = 0; x < mm; ++x)
        for (std::size_t xr = 0; xr < mm; ++xr) {
            const auto fr = f(sums_.sum_of(x, xr));
            if (g(static_cast<std::uint8_t>(xr), fr) != x)
                throw DomainError("PNC tables violate g(x_r, f(x + x_r)) = x");
        }
}

std::shared_ptr<const PncMapper> make_pnc_mapper(Modulation m) {
    return std::make_shared<TablePncMapper>(m);
}

}  // namespace irisim
