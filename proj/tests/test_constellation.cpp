#include <cmath>
#include <complex>
#include <set>

#include "doctest.h"
#include "irisim/constellation.hpp"
#include "irisim/errors.hpp"
#include "oracles.hpp"

using namespace irisim;

namespace {

const double kPi = std::acos(-1.0);

oracle::Vec values_of(const Alphabet& a) { return {a.points().begin(), a.points().end()}; }

oracle::Vec source_label_values(const LabeledConstellation& c, std::size_t i, const Alphabet& a) {
    oracle::Vec v;
    for (auto d : c.label(i)) v.push_back(a[d]);
    return v;
}

oracle::Vec sum_label_values(const LabeledConstellation& c, std::size_t i, const SumAlphabet& s) {
    oracle::Vec v;
    for (auto d : c.label(i)) v.push_back(s.points[d]);
    return v;
}

bool oracle_injective(const oracle::Vec& theta, const oracle::Vec& alphabet, bool sums) {
    const auto pts = sums ? oracle::sum_points(theta, alphabet) : oracle::source_points(theta, alphabet);
    for (std::size_t a = 0; a < pts.size(); ++a)
        for (std::size_t b = a + 1; b < pts.size(); ++b)
            if (std::abs(pts[a].point - pts[b].point) < 1e-9) return false;
    return true;
}

}  // namespace

TEST_CASE("alphabets hold the expected points") {
    const auto b = Alphabet::bpsk();
    REQUIRE(b.size() == 2);
    CHECK(b.index_of(1.0).has_value());
    CHECK(b.index_of(-1.0).has_value());
    const auto q = Alphabet::qpsk();
    REQUIRE(q.size() == 4);
    for (cplx v : {cplx(1, 1), cplx(-1, 1), cplx(1, -1), cplx(-1, -1)}) CHECK(q.index_of(v).has_value());
    CHECK_FALSE(q.index_of(cplx(1, 0)).has_value());
    CHECK(modulation_from_string("qpsk") == Modulation::QPSK);
}

TEST_CASE("sum alphabets count preimages") {
    const auto s = make_sum_alphabet(Alphabet::bpsk());
    REQUIRE(s.size() == 3);
    CHECK(s.preimages[*s.index_of(0.0)] == 2);
    CHECK(s.preimages[*s.index_of(2.0)] == 1);
    CHECK(make_sum_alphabet(Alphabet::qpsk()).size() == 9);
}

TEST_CASE("label codec round trips") {
    std::vector<std::uint8_t> d(3);
    for (std::size_t i = 0; i < 27; ++i) {
        decode_label(i, 3, d);
        CHECK(encode_label(d, 3) == i);
    }
    decode_label(5, 3, d);
    CHECK(d == std::vector<std::uint8_t>{0, 1, 2});
}

TEST_CASE("vandermonde rows follow the closed form") {
    const auto a = Alphabet::bpsk();
    const auto t1 = PrecodingVector::vandermonde(2, 1, a);
    CHECK(std::abs(t1.thetas()[0] - cplx(1, 0)) < 1e-12);
    CHECK(std::abs(t1.thetas()[1] - std::polar(1.0, 3 * kPi / 4)) < 1e-12);
    const auto t2 = PrecodingVector::vandermonde(2, 2, a);
    CHECK(std::abs(t2.thetas()[1] - std::polar(1.0, 7 * kPi / 4)) < 1e-12);
    const auto t3 = PrecodingVector::vandermonde(3, 1, a);
    CHECK(std::abs(t3.thetas()[1] - std::polar(1.0, 5 * kPi / 9)) < 1e-12);
    CHECK(std::abs(t3.thetas()[2] - std::polar(1.0, 10 * kPi / 9)) < 1e-12);
    for (auto th : t3.thetas()) CHECK(std::abs(th) == doctest::Approx(1.0));
    CHECK(t1.row() == 1);
}

TEST_CASE("vandermonde rejects unsupported sizes") {
    const auto a = Alphabet::bpsk();
    CHECK_THROWS_AS(PrecodingVector::vandermonde(5, 1, a), UnsupportedSize);
    CHECK_THROWS_AS(PrecodingVector::vandermonde(2, 3, a), UnsupportedSize);
    CHECK_THROWS_AS(PrecodingVector::vandermonde(2, 0, a), UnsupportedSize);
}

TEST_CASE("energy normalisation is one") {
    for (auto m : {Modulation::BPSK, Modulation::QPSK})
        for (int n : {2, 3}) {
            const auto a = Alphabet::of(m);
            const auto t = PrecodingVector::vandermonde(n, 1, a);
            const auto s = build_source_constellation(t, a);
            double e = 0;
            for (auto p : s.points()) e += std::norm(p);
            CHECK(e / static_cast<double>(s.size()) == doctest::Approx(1.0).epsilon(1e-9));
            const oracle::Vec th(t.thetas().begin(), t.thetas().end());
            CHECK(t.norm_scale() == doctest::Approx(oracle::norm_scale(th, values_of(a))).epsilon(1e-12));
        }
}

TEST_CASE("custom theta injectivity") {
    const auto b = Alphabet::bpsk();
    const auto s = build_source_constellation(PrecodingVector::custom({1.0, cplx(0, 1)}, b), b);
    REQUIRE(s.size() == 4);
    const double k = 1.0 / std::sqrt(2.0);
    std::set<std::pair<double, double>> want{{k, k}, {k, -k}, {-k, k}, {-k, -k}};
    for (auto p : s.points()) {
        bool hit = false;
        for (auto [re, im] : want) hit = hit || std::abs(p - cplx(re, im)) < 1e-12;
        CHECK(hit);
    }
    CHECK_THROWS_AS(PrecodingVector::custom({1.0, 1.0}, b), InjectivityViolation);

    // [1, j] with QPSK: the library must agree with brute force.
    const auto q = Alphabet::qpsk();
    const oracle::Vec th{1.0, cplx(0, 1)};
    const bool ok = oracle_injective(th, values_of(q), false) && oracle_injective(th, values_of(q), true);
    if (ok)
        CHECK_NOTHROW(PrecodingVector::custom({1.0, cplx(0, 1)}, q));
    else
        CHECK_THROWS_AS(PrecodingVector::custom({1.0, cplx(0, 1)}, q), InjectivityViolation);
}

TEST_CASE("source constellation matches enumeration") {
    for (auto m : {Modulation::BPSK, Modulation::QPSK})
        for (int n : {2, 3}) {
            const auto a = Alphabet::of(m);
            const auto t = PrecodingVector::vandermonde(n, 1, a);
            const auto s = build_source_constellation(t, a);
            const oracle::Vec th(t.thetas().begin(), t.thetas().end());
            const auto ref = oracle::source_points(th, values_of(a));
            REQUIRE(s.size() == ref.size());
            for (std::size_t i = 0; i < s.size(); ++i) {
                const auto j = oracle::find_label(ref, source_label_values(s, i, a));
                REQUIRE(j < ref.size());
                CHECK(std::abs(s.point(i) - ref[j].point) < 1e-12);
                CHECK(s.prior(i) == doctest::Approx(1.0 / static_cast<double>(ref.size())));
            }
            CHECK(s.min_distance() > 0.0);
        }
}

TEST_CASE("single source constellation is the scaled alphabet") {
    const auto a = Alphabet::qpsk();
    const auto s = build_source_constellation(PrecodingVector::custom({1.0}, a), a);
    REQUIRE(s.size() == 4);
    for (std::size_t i = 0; i < 4; ++i) CHECK(std::abs(s.point(i) - a[s.label(i)[0]] / std::sqrt(2.0)) < 1e-12);
}

TEST_CASE("sum priors are exact preimage fractions") {
    for (auto m : {Modulation::BPSK, Modulation::QPSK})
        for (int n : {1, 2, 3}) {
            const auto a = Alphabet::of(m);
            const auto t = n == 1 ? PrecodingVector::custom({1.0}, a) : PrecodingVector::vandermonde(n, 1, a);
            const auto y = build_sum_constellation(t, a);
            const oracle::Vec th(t.thetas().begin(), t.thetas().end());
            const auto ref = oracle::sum_points(th, values_of(a));
            const auto sums = make_sum_alphabet(a);
            REQUIRE(y.size() == ref.size());
            double total = 0;
            for (std::size_t i = 0; i < y.size(); ++i) {
                const auto j = oracle::find_label(ref, sum_label_values(y, i, sums));
                REQUIRE(j < ref.size());
                const double exact =
                    static_cast<double>(ref[j].count) / std::pow(static_cast<double>(a.size()), 2.0 * n);
                CHECK(y.prior(i) == exact);
                CHECK(std::abs(y.point(i) - ref[j].point) < 1e-12);
                total += y.prior(i);
            }
            CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
        }
}

TEST_CASE("single source BPSK sums") {
    const auto a = Alphabet::bpsk();
    const auto y = build_sum_constellation(PrecodingVector::custom({1.0}, a), a);
    REQUIRE(y.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
        const double p = y.point(i).real();
        if (std::abs(p) < 1e-12)
            CHECK(y.prior(i) == 0.5);
        else
            CHECK(y.prior(i) == 0.25);
    }
}

TEST_CASE("single source QPSK sums") {
    const auto a = Alphabet::qpsk();
    const auto t = PrecodingVector::custom({1.0}, a);
    const auto y = build_sum_constellation(t, a);
    REQUIRE(y.size() == 9);
    for (std::size_t i = 0; i < 9; ++i) {
        const cplx z = y.point(i) / t.norm_scale();
        if (std::abs(z) < 1e-12) CHECK(y.prior(i) == 0.25);
        if (std::abs(std::abs(z.real()) - 2) < 1e-12 && std::abs(std::abs(z.imag()) - 2) < 1e-12)
            CHECK(y.prior(i) == 1.0 / 16);
    }
}

TEST_CASE("faded constellations reduce correctly") {
    const auto a = Alphabet::bpsk();
    const auto t = PrecodingVector::vandermonde(2, 1, a);
    const auto sums = make_sum_alphabet(a);
    const std::vector<cplx> ones{1.0, 1.0};

    SUBCASE("unit channel equals the sum constellation") {
        const auto f = build_faded_sum_constellation(t, a, ones, 1.0, true);
        const auto y = build_sum_constellation(t, a);
        REQUIRE(f.size() == 16);
        std::vector<std::uint8_t> z(2);
        for (std::size_t i = 0; i < f.size(); ++i) {
            pair_to_sum_label(sums, f.label(i), z);
            const auto j = encode_label(z, sums.size());
            CHECK(std::abs(f.point(i) - y.point(j)) < 1e-12);
        }
    }
    SUBCASE("no interference gives the source constellation") {
        const auto f = build_faded_sum_constellation(t, a, ones, 0.0);
        const auto s = build_source_constellation(t, a);
        for (std::size_t i = 0; i < f.size(); ++i) {
            const auto x = f.label(i).first(2);
            CHECK(std::abs(f.point(i) - s.point(encode_label(x, 2))) < 1e-12);
        }
    }
    SUBCASE("random channel keeps every pair") {
        oracle::Vec h{cplx(0.3, -1.1), cplx(-0.7, 0.4)};
        const cplx h12(0.9, 0.2);
        const auto f = build_faded_sum_constellation(t, a, h, h12, true);
        CHECK(f.size() == 16);
        std::set<std::vector<std::uint8_t>> labels;
        for (std::size_t i = 0; i < f.size(); ++i) {
            labels.insert({f.label(i).begin(), f.label(i).end()});
            CHECK(f.prior(i) == 1.0 / 16);
            const auto l = f.label(i);
            const cplx want =
                t.norm_scale() * (t.thetas()[0] * (h[0] * a[l[0]] + h12 * a[l[2]]) +
                                  t.thetas()[1] * (h[1] * a[l[1]] + h12 * a[l[3]]));
            CHECK(std::abs(f.point(i) - want) < 1e-12);
        }
        CHECK(labels.size() == 16);
        const auto lazy = build_faded_sum_constellation(t, a, h, h12, false);
        CHECK(lazy.distance(3, 7) == doctest::Approx(f.distance(3, 7)));
    }
}

TEST_CASE("distance matrix and zero norm") {
    const auto a = Alphabet::qpsk();
    const auto s = build_source_constellation(PrecodingVector::vandermonde(2, 1, a), a);
    for (std::size_t i = 0; i < s.size(); ++i) {
        CHECK(s.distance(i, i) == 0.0);
        for (std::size_t j = 0; j < s.size(); ++j) {
            CHECK(s.distance(i, j) == doctest::Approx(std::abs(s.point(i) - s.point(j))));
            CHECK(s.distance(i, j) == s.distance(j, i));
            const auto zn = oracle::zero_norm(source_label_values(s, i, a), source_label_values(s, j, a));
            CHECK(s.zero_norm(i, j) == zn);
        }
    }
}
