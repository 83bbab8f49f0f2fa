#include "arboreal/dynamics.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace arboreal;
using namespace arboreal::dynamics;
using cyclotomic::Context;

TEST(Dynamics, UnicriticalPhiFixesOneMinusZeta) {
    for (unsigned p : {3u, 5u, 7u}) {
        Context ctx(p);
        auto phi = unicritical_phi(ctx);
        const CycInt pi(ctx, {1, -1});
        EXPECT_EQ(phi(CycInt(ctx)), pi);
        EXPECT_EQ(phi(pi), pi);
        for (unsigned n = 1; n <= 10; ++n) EXPECT_EQ(iterate_exact(phi, CycInt(ctx), n), pi);
    }
}

TEST(Dynamics, CriticalOrbitIsOneModuloRamifiedPrime) {
    for (unsigned p : {3u, 5u, 7u}) {
        Context ctx(p);
        auto phi = unicritical_phi(ctx);
        auto r = cyclotomic::ramified_prime(ctx);
        auto orbit = orbit_prefix(phi, CycInt::integer(ctx, 1), p == 7 ? 6 : 10);
        for (std::size_t n = 1; n < orbit.size(); ++n) EXPECT_EQ(cyclotomic::reduce(orbit[n], r), 1u);
    }
}

TEST(Dynamics, QuadraticFamilySmallIterates) {
    auto phi = quadratic_family(3);
    EXPECT_EQ(iterate_exact(phi, BigInt(3), 1), -3);
    EXPECT_EQ(iterate_exact(phi, BigInt(3), 2), 33);
    EXPECT_EQ(iterate_exact(phi, BigInt(3), 3), 897);
}

TEST(Dynamics, SemigroupProperty) {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<long> start(-20, 20);
    std::uniform_int_distribution<unsigned> steps(0, 4);
    for (int trial = 0; trial < 100; ++trial) {
        auto map = quadratic_family(BigInt(static_cast<long>(1 + trial % 17)));
        const BigInt x(start(rng));
        const unsigned m = steps(rng), n = steps(rng);
        EXPECT_EQ(iterate_exact(map, x, m + n), iterate_exact(map, iterate_exact(map, x, m), n));
    }
    Context ctx(5);
    auto phi = unicritical_delta(ctx);
    EXPECT_EQ(iterate_exact(phi, CycInt::integer(ctx, 1), 3), iterate_exact(phi, iterate_exact(phi, CycInt::integer(ctx, 1), 1), 2));
}

TEST(Dynamics, OrbitModCommutesWithReduction) {
    auto map = quadratic_family(BigInt(7));
    auto exact = orbit_prefix(map, BigInt(7), 7);
    for (std::uint64_t m : {2ull, 3ull, 4ull, 13ull, 16ull, 31ull}) {
        auto trace = orbit_mod(map, BigInt(7), m);
        for (std::size_t n = 0; n < exact.size(); ++n) EXPECT_EQ(trace.value_at(n), mod_reduce(exact[n], m)) << m;
    }
    // Longer run in residue arithmetic only: 25 steps against direct iteration of the residue map.
    auto rmap = reduce_map(map, 97);
    auto trace = trace_orbit(rmap, 7);
    std::uint64_t x = 7;
    for (std::size_t n = 0; n < 25; ++n, x = rmap(x)) EXPECT_EQ(trace.value_at(n), x);
}

TEST(Dynamics, OrbitModCyclotomicPrime) {
    Context ctx(3);
    auto q = cyclotomic::residue_prime(ctx, CycInt(ctx, {2, -1}));
    auto trace = orbit_mod(unicritical_phi(ctx), CycInt::integer(ctx, 1), q);
    EXPECT_EQ(trace.tail, 2u);
    EXPECT_EQ(trace.cycle, std::vector<std::uint64_t>{6});
    auto exact = orbit_prefix(unicritical_phi(ctx), CycInt::integer(ctx, 1), 12);
    for (std::size_t n = 0; n < exact.size(); ++n) EXPECT_EQ(trace.value_at(n), cyclotomic::reduce(exact[n], q));
}

TEST(Dynamics, TwoCycleModuloThirteen) {
    auto trace = orbit_mod(quadratic_family(BigInt(9)), BigInt(9), 13);
    EXPECT_EQ(trace.cycle.size(), 2u);
    std::vector<std::uint64_t> sorted = trace.cycle;
    std::sort(sorted.begin(), sorted.end());
    EXPECT_EQ(sorted, (std::vector<std::uint64_t>{6, 11}));
    // Cycle closes: map(last) == first.
    auto rmap = reduce_map(quadratic_family(BigInt(9)), 13);
    EXPECT_EQ(rmap(trace.cycle.back()), trace.cycle.front());
}

TEST(Dynamics, OddModuloTwo) {
    for (long p : {3, 5, 7, 11, 13}) {
        auto trace = orbit_mod(quadratic_family(BigInt(p)), BigInt(p), 2);
        EXPECT_EQ(trace.cycle, std::vector<std::uint64_t>{1});
    }
}

TEST(Dynamics, FiniteOrbitsOfZero) {
    auto orbit = finite_orbit(quadratic_family(BigInt(3)), BigInt(0), 10);
    ASSERT_TRUE(orbit.has_value());
    EXPECT_EQ(*orbit, (std::vector<BigInt>{0, 6}));
    auto f_orbit = finite_orbit(shifted_quadratic_family(BigInt(5)), BigInt(0), 10);
    ASSERT_TRUE(f_orbit.has_value());
    EXPECT_EQ(*f_orbit, (std::vector<BigInt>{0, -1, 10}));
    EXPECT_FALSE(finite_orbit(quadratic_family(BigInt(3)), BigInt(3), 6).has_value());
}

TEST(Dynamics, PrimitivePrimeFilter) {
    const BigInt p = 3;
    auto map = quadratic_family(p);
    EXPECT_TRUE(primitive_prime_filter(map, {6}, 7));
    EXPECT_FALSE(primitive_prime_filter(map, {6}, 2));
    EXPECT_THROW(primitive_prime_filter(map, {}, 7), Error);
    EXPECT_THROW(primitive_prime_filter(map, {5}, 7), Error);
    auto f = shifted_quadratic_family(BigInt(5));
    EXPECT_TRUE(primitive_prime_filter(f, {-1, 10}, 7));
    EXPECT_FALSE(primitive_prime_filter(f, {-1, 10}, 5));
}
