#include "arboreal/cyclotomic.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace arboreal;
using namespace arboreal::cyclotomic;

namespace {

CycInt random_element(const Context& ctx, std::mt19937_64& rng, long bound) {
    std::uniform_int_distribution<long> dist(-bound, bound);
    std::vector<BigInt> c(ctx.dimension());
    for (auto& x : c) x = dist(rng);
    return CycInt(ctx, c);
}

std::vector<BigInt> as_poly(const CycInt& a) { return oracle::trim(a.coeffs()); }

}  // namespace

TEST(Cyclotomic, RejectsNonPrimeConductor) {
    EXPECT_THROW(Context(9), Error);
    EXPECT_THROW(Context(2), Error);
    EXPECT_NO_THROW(Context(11));
}

TEST(Cyclotomic, ZetaPowerWrapsAndEliminatesTopPower) {
    Context ctx(5);
    EXPECT_EQ(CycInt::zeta_power(ctx, 5), CycInt::integer(ctx, 1));
    EXPECT_EQ(CycInt::zeta_power(ctx, 4), CycInt(ctx, {-1, -1, -1, -1}));
    EXPECT_EQ(CycInt::zeta_power(ctx, -1), CycInt::zeta_power(ctx, 4));
}

TEST(Cyclotomic, OneMinusZetaCubedForP3) {
    Context ctx(3);
    CycInt pi(ctx, {1, -1});
    EXPECT_EQ(pow(pi, 3), CycInt(ctx, {-3, -6}));
}

TEST(Cyclotomic, MixedContextsThrow) {
    EXPECT_THROW(CycInt::integer(Context(3), 1) + CycInt::integer(Context(5), 1), Error);
}

TEST(Cyclotomic, NormsOfSmallGenerators) {
    struct Case { unsigned p; CycInt a; long n; };
    std::vector<Case> cases{
        {3, CycInt(Context(3), {2, -1}), 7},   {3, CycInt(Context(3), {3, 1}), 7},
        {5, CycInt(Context(5), {2, -1}), 31},  {5, CycInt(Context(5), {2, 1}), 11},
        {5, CycInt(Context(5), {3, 1}), 61},   {7, CycInt(Context(7), {2, -1}), 127},
        {7, CycInt(Context(7), {2, 1}), 43},   {7, CycInt(Context(7), {3, 1}), 547},
        {7, CycInt(Context(7), {2, 3}), 463},  {5, CycInt(Context(5), {1, -1}), 5},
    };
    for (const auto& c : cases) EXPECT_EQ(norm(c.a), c.n) << c.p << " " << c.a;
}

TEST(Cyclotomic, NormMatchesSylvesterResultant) {
    std::mt19937_64 rng(20240917);
    for (unsigned p : {3u, 5u, 7u, 11u}) {
        Context ctx(p);
        for (int trial = 0; trial < 25; ++trial) {
            CycInt a = random_element(ctx, rng, 50);
            if (a.is_zero()) continue;
            EXPECT_EQ(norm(a), oracle::sylvester_resultant(ctx.cyclotomic_polynomial(), as_poly(a))) << p << " " << a;
        }
    }
}

TEST(Cyclotomic, RingAxiomsAndNormMultiplicativity) {
    std::mt19937_64 rng(7);
    for (unsigned p : {3u, 5u, 7u}) {
        Context ctx(p);
        for (int trial = 0; trial < 40; ++trial) {
            CycInt a = random_element(ctx, rng, 20), b = random_element(ctx, rng, 20), c = random_element(ctx, rng, 20);
            EXPECT_EQ(a * (b + c), a * b + a * c);
            EXPECT_EQ((a * b) * c, a * (b * c));
            EXPECT_EQ(a * b, b * a);
            EXPECT_EQ(norm(a * b), norm(a) * norm(b));
            for (unsigned k = 1; k < p; ++k) EXPECT_EQ((a * b).conjugate(k), a.conjugate(k) * b.conjugate(k));
        }
    }
}

TEST(Cyclotomic, RamifiedValuationOfPowersOfPi) {
    for (unsigned p : {3u, 5u, 7u}) {
        Context ctx(p);
        CycInt pi(ctx, {1, -1});
        for (unsigned e = 0; e < 6; ++e) EXPECT_EQ(ramified_valuation(pow(pi, e) * CycInt(ctx, {2, -1})).value, static_cast<long>(e));
        EXPECT_EQ(ramified_valuation(CycInt::integer(ctx, p)).value, static_cast<long>(p - 1));
        EXPECT_TRUE(ramified_valuation(CycInt(ctx)).infinite);
    }
}

TEST(Cyclotomic, ResiduePrimeRootsAndReduction) {
    Context ctx(7);
    auto q = residue_prime(ctx, CycInt(ctx, {2, -1}));
    EXPECT_EQ(q.ell, 127u);
    EXPECT_EQ(q.root, 2u);
    EXPECT_EQ(reduce(CycInt(ctx, {2, -1}), q), 0u);
    auto q2 = residue_prime(ctx, CycInt(ctx, {2, 3}));
    EXPECT_EQ(q2.ell, 463u);
    EXPECT_EQ(reduce(CycInt(ctx, {2, 3}), q2), 0u);
    EXPECT_THROW(residue_prime(ctx, CycInt::zeta(ctx)), Error);
    EXPECT_THROW(residue_prime(ctx, CycInt::integer(ctx, 3)), Error);
    auto r = ramified_prime(ctx);
    EXPECT_TRUE(r.ramified());
    EXPECT_EQ(r.root, 1u);
}

TEST(Cyclotomic, ReductionIsARingHomomorphism) {
    std::mt19937_64 rng(99);
    Context ctx(5);
    auto q = residue_prime(ctx, CycInt(ctx, {3, 1}));
    for (int trial = 0; trial < 50; ++trial) {
        CycInt a = random_element(ctx, rng, 1000), b = random_element(ctx, rng, 1000);
        EXPECT_EQ(reduce(a * b, q), reduce(a, q) * reduce(b, q) % q.ell);
        EXPECT_EQ(reduce(a + b, q), (reduce(a, q) + reduce(b, q)) % q.ell);
    }
}
