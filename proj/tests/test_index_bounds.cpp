#include "arboreal/index_bounds.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace arboreal;
using namespace arboreal::index_bounds;
using cyclotomic::Context;

namespace {

constexpr mpfr_prec_t kPrec = 256;

// Plain double evaluation of the same closed forms, used as a loose cross-check.
double n_bound_double(unsigned p) {
    const double P = p, h = P / 2;
    const double e = 16 * std::pow(P, h + 9) + 14 * std::pow(P, h + 7) + 84 * std::pow(P, h + 6) +
                     1.5 * std::pow(P, h + 5) + 2 * std::pow(P, 5) - 4 * std::pow(P, 4);
    const double k = P - 1;
    return e + 12 * k * std::pow(2.0, k * k) * std::pow(1 + std::log(4.0), k * k + k) + 2;
}

}  // namespace

TEST(Interval, EnclosesElementaryValues) {
    const Interval two(2, kPrec);
    auto r = sqrt(two);
    EXPECT_LE(r.lower(), std::sqrt(2.0));
    EXPECT_GE(r.upper(), std::sqrt(2.0));
    auto l = log(Interval(4, kPrec));
    EXPECT_LE(l.lower(), std::log(4.0));
    EXPECT_GE(l.upper(), std::log(4.0));
    auto q = Interval::ratio(1, 3, kPrec) * Interval(3, kPrec);
    EXPECT_LE(q.lower(), 1.0);
    EXPECT_GE(q.upper(), 1.0);
    EXPECT_THROW(Interval(1, kPrec) / Interval(0, kPrec), Error);
    EXPECT_THROW(log(Interval(0, kPrec)), Error);
}

TEST(Interval, ProductOfMixedSigns) {
    auto a = Interval::hull(Interval(-2, kPrec), Interval(3, kPrec));
    auto b = Interval::hull(Interval(-5, kPrec), Interval(1, kPrec));
    auto c = a * b;
    EXPECT_EQ(c.lower(), -15.0);
    EXPECT_EQ(c.upper(), 10.0);
}

TEST(HeightLowerBound, ClosedForm) {
    auto r = height_lower_bound_S(2, 1, Interval(0, kPrec));
    EXPECT_LE(r.s_phi.lower(), 24.0);
    EXPECT_GE(r.s_phi.upper(), 24.0);
    EXPECT_LE(r.log_lower.lower(), -24 * std::log(2.0));
    EXPECT_GE(r.log_lower.upper(), -24 * std::log(2.0));

    const double expected = 12 * 2 * 16 * std::pow(1 + std::log(4.0), 6);
    auto s = height_lower_bound_S(3, 2, log4(kPrec)).s_phi;
    EXPECT_NEAR(s.lower(), expected, 1e-9 * expected);
    EXPECT_NEAR(s.upper(), expected, 1e-9 * expected);
    EXPECT_THROW(height_lower_bound_S(1, 2, log4(kPrec)), Error);
}

TEST(HeightLowerBound, MonotoneInC) {
    double prev = 0;
    for (long c = 0; c <= 5; ++c) {
        auto s = height_lower_bound_S(3, 2, Interval(c, kPrec)).s_phi;
        EXPECT_GT(s.lower(), prev);
        prev = s.upper();
    }
}

TEST(BoundReport, DiscriminantAndCounts) {
    auto r3 = bound_report(3);
    EXPECT_EQ(r3.d_p, -3);
    EXPECT_EQ(r3.s_bound, 8);      // 2 + 3 sqrt 3 = 7.196
    EXPECT_EQ(r3.rank_bound, 6);   // 3 sqrt 3 = 5.196
    auto r5 = bound_report(5);
    EXPECT_EQ(r5.d_p, 125);
    EXPECT_EQ(r5.s_bound, 4 + 56);  // 5 sqrt 125 = 55.90
    EXPECT_EQ(r5.rank_bound, 1 + 56);
    EXPECT_EQ(bound_report(7).d_p, -16807);
}

TEST(BoundReport, HbarUsesAbsoluteDiscriminant) {
    auto r = bound_report(3);
    const double expected = 2 * 6 * std::log(3.0) + 7 * std::log(2.0);
    EXPECT_LE(r.hbar_bound.lower(), expected + 1e-12);
    EXPECT_GE(r.hbar_bound.upper(), expected - 1e-12);
}

TEST(BoundReport, NBoundAtThree) {
    auto r = bound_report(3, 40);
    const double approx = n_bound_double(3);
    EXPECT_NEAR(r.n_bound.get_d(), approx, 2.0);
    EXPECT_GT(r.n_bound, 2100000);
    EXPECT_LT(r.n_bound, 2300000);
    ASSERT_TRUE(r.reference_n_bound.has_value());
    EXPECT_EQ(*r.reference_n_bound, 20031664);
    EXPECT_TRUE(r.discrepancy);
    // certified: the real value lies strictly below the reported ceiling
    EXPECT_LT(r.n_real.upper(), r.n_bound.get_d());
    EXPECT_EQ(bound_report(3, 80).n_bound, r.n_bound);
}

TEST(BoundReport, RejectsBadInput) {
    EXPECT_THROW(bound_report(4), Error);
    EXPECT_THROW(bound_report(3, 10), Error);
}

TEST(BoundReport, LowPrecisionCannotCertifyCeiling) {
    // the lower-bound exponent at p = 13 has about 81 integer digits
    try {
        bound_report(13, 50);
        FAIL() << "expected an error";
    } catch (const Error& e) {
        EXPECT_STREQ(e.what(), "raise precision");
    }
    EXPECT_NO_THROW(bound_report(13, 120));
}

TEST(BoundReport, MonotoneInP) {
    BigInt prev = 0;
    for (unsigned p : {3u, 5u, 7u, 11u, 13u}) {
        auto r = bound_report(p, 120);
        EXPECT_GT(r.n_bound, prev) << p;
        EXPECT_FALSE(r.reference_n_bound.has_value() && p != 3);
        prev = r.n_bound;
    }
}

TEST(WeilHeight, SmallElements) {
    for (unsigned p : {3u, 5u, 7u}) {
        Context ctx(p);
        auto h0 = weil_height(CycInt(ctx), 40);
        EXPECT_EQ(h0.lower(), 0.0);
        EXPECT_EQ(h0.upper(), 0.0);
        auto hz = weil_height(CycInt::zeta(ctx), 40);
        EXPECT_LE(hz.lower(), 0.0);
        EXPECT_GE(hz.upper(), 0.0);
        EXPECT_LT(hz.upper(), 1e-30);
        auto h2 = weil_height(CycInt::integer(ctx, 2), 40);
        EXPECT_LE(h2.lower(), std::log(2.0));
        EXPECT_GE(h2.upper(), std::log(2.0));
    }
    // 1 - zeta_3 has absolute value sqrt 3 at both embeddings
    Context ctx(3);
    auto h = weil_height(CycInt(ctx, {1, -1}), 40);
    EXPECT_NEAR(h.lower(), 0.5 * std::log(3.0), 1e-12);
    EXPECT_NEAR(h.upper(), 0.5 * std::log(3.0), 1e-12);
}

TEST(WeilHeight, ProductBound) {
    Context ctx(5);
    const CycInt a(ctx, {3, -1, 2, 0});
    const CycInt b(ctx, {1, 4, 0, -2});
    auto ha = weil_height(a, 40), hb = weil_height(b, 40), hab = weil_height(a * b, 40);
    EXPECT_LE(hab.lower(), ha.upper() + hb.upper());
}

TEST(CanonicalHeight, DeltaThreeAtZero) {
    Context ctx(3);
    auto e = canonical_height_estimate(dynamics::unicritical_delta(ctx), CycInt(ctx), 6);
    EXPECT_FALSE(e.preperiodic);
    EXPECT_TRUE(e.enclosure.positive());
    const double width = e.enclosure.upper() - e.enclosure.lower();
    EXPECT_LE(width, 2 * std::log(4.0) / 729 + 1e-12);
    EXPECT_THROW(canonical_height_estimate(dynamics::unicritical_delta(ctx), CycInt(ctx), 2), Error);
}

TEST(CanonicalHeight, PhiThreeAtZeroIsPreperiodic) {
    Context ctx(3);
    auto e = canonical_height_estimate(dynamics::unicritical_phi(ctx), CycInt(ctx), 6);
    EXPECT_TRUE(e.preperiodic);
    EXPECT_EQ(e.value.lower(), 0.0);
    EXPECT_EQ(e.value.upper(), 0.0);
}

TEST(CanonicalHeight, SuccessiveEstimatesAreCauchy) {
    for (unsigned p : {3u, 5u}) {
        Context ctx(p);
        const unsigned n_max = p == 3 ? 7 : 5;
        auto seq = height_sequence(dynamics::unicritical_delta(ctx), CycInt(ctx), n_max, 40);
        ASSERT_EQ(seq.size(), n_max + 1);
        double dn = 1;
        for (unsigned n = 0; n < n_max; ++n) {
            const double diff = std::max(std::abs(seq[n + 1].upper() - seq[n].lower()),
                                         std::abs(seq[n].upper() - seq[n + 1].lower()));
            EXPECT_LE(diff, 2 * std::log(4.0) / dn + 1e-12) << "p=" << p << " n=" << n;
            dn *= p;
        }
    }
}

TEST(StageInequality, BoundLiesBeyondEveryAdmissibleStage) {
    Context ctx(3);
    auto r = bound_report(3);
    auto e = canonical_height_estimate(dynamics::unicritical_delta(ctx), CycInt(ctx), 6);
    auto s = stage_inequality(r, Interval::hull(e.enclosure, e.enclosure));
    EXPECT_TRUE(s.bound_exceeds_admissible);
    EXPECT_EQ(s.largest_n_height_bound + 2, r.n_bound);
    ASSERT_TRUE(s.largest_n_estimate.has_value());
    EXPECT_LT(*s.largest_n_estimate, s.largest_n_height_bound);
    EXPECT_FALSE(s.n_bound_admissible);
}
