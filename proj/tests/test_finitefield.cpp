#include "arboreal/finitefield.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <random>
#include <set>

using namespace arboreal;
using namespace arboreal::finitefield;

TEST(FiniteField, PrimeFieldInverseAndPow) {
    PrimeField F(101);
    for (std::uint64_t a = 1; a < 101; ++a) {
        EXPECT_EQ(F.mul(a, F.inv(a)), 1u);
        EXPECT_EQ(F.pow(a, 100), 1u);
    }
    EXPECT_THROW(F.inv(0), Error);
    EXPECT_THROW(PrimeField(15), Error);
}

TEST(FiniteField, PolynomialDivisionIdentity) {
    PrimeField F(13);
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<std::uint64_t> coef(0, 12);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<std::uint64_t> a(8), b(4);
        for (auto& x : a) x = coef(rng);
        for (auto& x : b) x = coef(rng);
        b.back() = 1 + coef(rng) % 12;
        FpPoly A(a), B(b);
        auto qr = poly::divmod(F, A, B);
        EXPECT_EQ(poly::add(F, poly::mul(F, qr.quotient, B), qr.remainder), A);
        EXPECT_LT(qr.remainder.degree(), B.degree());
        auto eg = poly::xgcd(F, A, B);
        EXPECT_EQ(poly::add(F, poly::mul(F, eg.s, A), poly::mul(F, eg.t, B)), eg.g);
        EXPECT_TRUE(poly::mod(F, A, eg.g).is_zero());
        EXPECT_TRUE(poly::mod(F, B, eg.g).is_zero());
    }
}

TEST(FiniteField, IrreducibleCountsMatchNecklaceFormula) {
    // Number of monic irreducibles of degree 2 and 3 over F_q: (q^2 - q)/2 and (q^3 - q)/3.
    for (std::uint64_t q : {3ull, 5ull, 7ull}) {
        PrimeField F(q);
        std::uint64_t deg2 = 0, deg3 = 0;
        for (std::uint64_t i = 0; i < q * q; ++i)
            deg2 += poly::is_irreducible(F, FpPoly{i % q, i / q, 1});
        for (std::uint64_t i = 0; i < q * q * q; ++i)
            deg3 += poly::is_irreducible(F, FpPoly{i % q, (i / q) % q, i / (q * q), 1});
        EXPECT_EQ(deg2, (q * q - q) / 2);
        EXPECT_EQ(deg3, (q * q * q - q) / 3);
    }
}

TEST(FiniteField, ExtensionFieldIsAField) {
    for (auto [q, k] : std::vector<std::pair<std::uint64_t, unsigned>>{{3, 2}, {5, 2}, {3, 3}, {7, 2}}) {
        ExtField E(q, k);
        EXPECT_EQ(E.order(), static_cast<std::uint64_t>(std::pow(q, k)));
        std::set<std::vector<std::uint64_t>> seen;
        for (std::uint64_t i = 0; i < E.order(); ++i) {
            auto a = E.from_index(i);
            seen.insert(a.coeffs());
            if (a.is_zero()) continue;
            EXPECT_EQ(E.mul(a, E.inv(a)), E.one());
            EXPECT_EQ(E.pow(a, E.order() - 1), E.one());
        }
        EXPECT_EQ(seen.size(), E.order());
    }
}

TEST(FiniteField, ExtensionModulusIsSmallestIrreducible) {
    EXPECT_EQ(ExtField(3, 2).modulus(), (FpPoly{1, 0, 1}));   // t^2 + 1
    EXPECT_EQ(ExtField(5, 2).modulus(), (FpPoly{1, 1, 1}));   // t^2 + t + 1
    EXPECT_EQ(ExtField(3, 3).modulus(), (FpPoly{1, 0, 2, 1})); // t^3 + 2t^2 + 1
}

TEST(FiniteField, SquareRootsOverPrimeAndExtensionFields) {
    for (std::uint64_t q : {3ull, 5ull, 13ull, 17ull, 97ull, 127ull}) {
        PrimeField F(q);
        std::size_t squares = 0;
        for (std::uint64_t a = 0; a < q; ++a) {
            auto r = field_sqrt(F, a);
            const bool expected = a == 0 || F.pow(a, (q - 1) / 2) == 1;
            EXPECT_EQ(r.has_value(), expected);
            if (r) {
                EXPECT_EQ(F.mul(*r, *r), a);
                ++squares;
            }
        }
        EXPECT_EQ(squares, (q + 1) / 2);
    }
    ExtField E(13, 2);
    std::size_t squares = 0;
    for (std::uint64_t i = 0; i < E.order(); ++i) {
        auto a = E.from_index(i);
        if (auto r = field_sqrt(E, a)) {
            EXPECT_EQ(E.mul(*r, *r), a);
            ++squares;
        }
    }
    EXPECT_EQ(squares, (E.order() + 1) / 2);
}

TEST(FiniteField, PowerResidueMatchesExhaustiveSearch) {
    for (std::uint64_t m : {3ull, 5ull, 7ull, 9ull, 13ull, 16ull, 25ull, 27ull, 29ull, 31ull, 43ull, 127ull}) {
        for (unsigned e : {2u, 3u, 5u, 7u})
            for (std::int64_t u = 0; u < static_cast<std::int64_t>(std::min<std::uint64_t>(m, 12)); ++u)
                for (std::int64_t v = -3; v < static_cast<std::int64_t>(std::min<std::uint64_t>(m, 20)); ++v)
                    EXPECT_EQ(power_residue_solvable(v, u, m, e), oracle::power_residue_bruteforce(v, u, m, e))
                        << "m=" << m << " e=" << e << " u=" << u << " v=" << v;
    }
    EXPECT_THROW(power_residue_solvable(1, 1, 12, 2), Error);
}
