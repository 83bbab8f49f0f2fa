#include "arboreal/eisenstein.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace arboreal;
using namespace arboreal::eisenstein;

TEST(Eisenstein, StrongExampleIsStrong) {
    for (unsigned p : {3u, 5u, 7u}) {
        Context ctx(p);
        EXPECT_TRUE(eisenstein_check(strong_example(ctx), Mode::strong));
    }
}

TEST(Eisenstein, UnicriticalPhiIsStandard) {
    for (unsigned p : {3u, 5u, 7u}) {
        Context ctx(p);
        auto f = expand_iterate(dynamics::unicritical_phi(ctx), ctx, 1);
        EXPECT_EQ(f.degree(), static_cast<int>(p));
        EXPECT_TRUE(eisenstein_check(f, Mode::standard));
        EXPECT_EQ(f[0], CycInt(ctx, {1, -1}));
        for (int j = 1; j < f.degree(); ++j) EXPECT_EQ(nu(f[static_cast<std::size_t>(j)]).value, static_cast<long>(p - 1));
    }
}

TEST(Eisenstein, NonEisensteinExample) {
    Context ctx(3);
    CycPolynomial f(ctx, {CycInt::integer(ctx, 1), CycInt(ctx), CycInt::integer(ctx, 1)});
    EXPECT_FALSE(eisenstein_check(f, Mode::standard));
    EXPECT_THROW(translate_check(f, CycInt(ctx)), Error);
}

TEST(Eisenstein, TranslateByZeroIsIdentity) {
    Context ctx(5);
    auto f = strong_example(ctx);
    EXPECT_EQ(translate_check(f, CycInt(ctx)).g, f);
}

TEST(Eisenstein, TranslateByRootOfUnity) {
    for (unsigned p : {3u, 5u, 7u}) {
        Context ctx(p);
        for (long i = 2; i <= static_cast<long>(p); ++i) {
            const CycInt zi = CycInt::zeta_power(ctx, i);
            auto r = translate_check(strong_example(ctx), -zi);
            EXPECT_TRUE(r.eisenstein);
            // (x - zeta^i)^p + 2 - zeta
            auto expected = pow(CycPolynomial(ctx, {-zi, CycInt::integer(ctx, 1)}), p) + CycPolynomial::constant(CycInt(ctx, {2, -1}));
            EXPECT_EQ(r.g, expected);
            for (int j = 1; j < r.g.degree(); ++j) EXPECT_TRUE(nu(r.g[static_cast<std::size_t>(j)]).exceeds(1));
            EXPECT_EQ(r.constant_valuation.value, 1);
        }
    }
}

TEST(Eisenstein, RandomTranslatesFollowTranslatePattern) {
    std::mt19937_64 rng(2718);
    std::uniform_int_distribution<long> coef(-9, 9);
    for (unsigned p : {3u, 5u, 7u}) {
        Context ctx(p);
        for (int trial = 0; trial < 200 / 3 + 1; ++trial) {
            std::vector<BigInt> a(p - 1);
            for (auto& x : a) x = coef(rng);
            auto r = translate_check(strong_example(ctx), CycInt(ctx, a));
            const auto v = valuation_profile(r.g);
            EXPECT_EQ(v.back().value, 0);
            EXPECT_EQ(v.front().value, 1);
            for (std::size_t j = 1; j + 1 < v.size(); ++j) EXPECT_TRUE(v[j].exceeds(1));
        }
    }
}

TEST(Eisenstein, OneMinusZetaPowersShareValuation) {
    for (unsigned p : {3u, 5u, 7u}) {
        Context ctx(p);
        for (long m = 1; m < 3 * static_cast<long>(p); ++m) {
            if (m % static_cast<long>(p) == 0) continue;
            EXPECT_EQ(nu(CycInt::integer(ctx, 1) - CycInt::zeta_power(ctx, m)), nu(CycInt(ctx, {1, -1})));
        }
    }
}

TEST(Eisenstein, ConjugateFamily) {
    for (unsigned p : {3u, 5u, 7u})
        for (long i = 2; i <= static_cast<long>(p); ++i) {
            auto cert = conjugate_family_check(p, i, 4);
            EXPECT_TRUE(cert.passed()) << p << " " << i;
            EXPECT_TRUE(cert.orbit_identity);
            EXPECT_TRUE(cert.unit_twist_identity);
        }
    auto c = conjugate_family_check(3, 2, 4);
    EXPECT_TRUE(c.iterates[2].direct);  // degree 27
    EXPECT_TRUE(c.iterates[3].direct);  // degree 81
    auto c7 = conjugate_family_check(7, 3, 3);
    EXPECT_TRUE(c7.iterates[1].direct);
    EXPECT_FALSE(c7.iterates[2].direct);
    EXPECT_THROW(conjugate_family_check(5, 1, 2), Error);
}

TEST(Eisenstein, FamilyAtIEqualsPIsPhi) {
    Context ctx(5);
    auto a = dynamics::conjugated_family(ctx, 5);
    auto b = dynamics::unicritical_phi(ctx);
    EXPECT_EQ(a.gamma, b.gamma);
    EXPECT_EQ(a.c, b.c);
}

TEST(Eisenstein, ConstantTermOfIterateMatchesOrbit) {
    Context ctx(3);
    auto phi = dynamics::conjugated_family(ctx, 2);
    for (unsigned n = 1; n <= 3; ++n)
        EXPECT_EQ(expand_iterate(phi, ctx, n)[0], dynamics::iterate_exact(phi, CycInt(ctx), n));
    EXPECT_THROW(expand_iterate(phi, ctx, 5), Error);
}
