#pragma once

// Effective index bound for the unicritical tower, evaluated in directed-rounding
// interval arithmetic (MPFR), and interval estimates of canonical heights over
// Z[zeta_p] from the archimedean embeddings.

#include "arboreal/common.hpp"
#include "arboreal/cyclotomic.hpp"
#include "arboreal/dynamics.hpp"

#include <mpfr.h>

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

namespace arboreal::index_bounds {

using cyclotomic::CycInt;

inline mpfr_prec_t digits_to_bits(unsigned digits) {
    return static_cast<mpfr_prec_t>(std::ceil(digits * 3.3219280948873623)) + 16;
}

// Closed interval [lo, hi] with outward rounding on every operation.
class Interval {
public:
    explicit Interval(mpfr_prec_t prec = 256) {
        mpfr_init2(lo_, prec);
        mpfr_init2(hi_, prec);
        mpfr_set_zero(lo_, 1);
        mpfr_set_zero(hi_, 1);
    }
    Interval(const BigInt& v, mpfr_prec_t prec) : Interval(prec) {
        mpfr_set_z(lo_, v.get_mpz_t(), MPFR_RNDD);
        mpfr_set_z(hi_, v.get_mpz_t(), MPFR_RNDU);
    }
    Interval(long v, mpfr_prec_t prec) : Interval(BigInt(v), prec) {}
    Interval(const Interval& o) : Interval(mpfr_get_prec(o.lo_)) {
        mpfr_set(lo_, o.lo_, MPFR_RNDD);
        mpfr_set(hi_, o.hi_, MPFR_RNDU);
    }
    Interval& operator=(const Interval& o) {
        if (this != &o) {
            mpfr_set_prec(lo_, mpfr_get_prec(o.lo_));
            mpfr_set_prec(hi_, mpfr_get_prec(o.hi_));
            mpfr_set(lo_, o.lo_, MPFR_RNDD);
            mpfr_set(hi_, o.hi_, MPFR_RNDU);
        }
        return *this;
    }
    ~Interval() {
        mpfr_clear(lo_);
        mpfr_clear(hi_);
    }

    mpfr_prec_t precision() const { return mpfr_get_prec(lo_); }
    const mpfr_t& lo() const { return lo_; }
    const mpfr_t& hi() const { return hi_; }
    double lower() const { return mpfr_get_d(lo_, MPFR_RNDD); }
    double upper() const { return mpfr_get_d(hi_, MPFR_RNDU); }
    bool positive() const { return mpfr_sgn(lo_) > 0; }

    static Interval pi(mpfr_prec_t prec) {
        Interval r(prec);
        mpfr_const_pi(r.lo_, MPFR_RNDD);
        mpfr_const_pi(r.hi_, MPFR_RNDU);
        return r;
    }

    static Interval point(const mpfr_t x, mpfr_prec_t prec) {
        Interval r(prec);
        mpfr_set(r.lo_, x, MPFR_RNDD);
        mpfr_set(r.hi_, x, MPFR_RNDU);
        return r;
    }

    // Smallest interval containing both.
    static Interval hull(const Interval& a, const Interval& b) {
        Interval r(std::max(a.precision(), b.precision()));
        mpfr_min(r.lo_, a.lo_, b.lo_, MPFR_RNDD);
        mpfr_max(r.hi_, a.hi_, b.hi_, MPFR_RNDU);
        return r;
    }

    // Rational a / b.
    static Interval ratio(long a, long b, mpfr_prec_t prec) { return Interval(a, prec) / Interval(b, prec); }

    friend Interval operator+(const Interval& a, const Interval& b) {
        Interval r(std::max(a.precision(), b.precision()));
        mpfr_add(r.lo_, a.lo_, b.lo_, MPFR_RNDD);
        mpfr_add(r.hi_, a.hi_, b.hi_, MPFR_RNDU);
        return r;
    }
    friend Interval operator-(const Interval& a, const Interval& b) {
        Interval r(std::max(a.precision(), b.precision()));
        mpfr_sub(r.lo_, a.lo_, b.hi_, MPFR_RNDD);
        mpfr_sub(r.hi_, a.hi_, b.lo_, MPFR_RNDU);
        return r;
    }
    friend Interval operator*(const Interval& a, const Interval& b) {
        return extremes(a, b, [](mpfr_t out, const mpfr_t x, const mpfr_t y, mpfr_rnd_t rnd) { mpfr_mul(out, x, y, rnd); });
    }
    friend Interval operator/(const Interval& a, const Interval& b) {
        if (mpfr_sgn(b.lo_) <= 0 && mpfr_sgn(b.hi_) >= 0) throw Error("interval division by an interval containing 0");
        return extremes(a, b, [](mpfr_t out, const mpfr_t x, const mpfr_t y, mpfr_rnd_t rnd) { mpfr_div(out, x, y, rnd); });
    }

    friend Interval log(const Interval& a) {
        if (!a.positive()) throw Error("log of a non-positive interval");
        return a.monotone([](mpfr_t out, const mpfr_t x, mpfr_rnd_t rnd) { mpfr_log(out, x, rnd); });
    }
    friend Interval exp(const Interval& a) {
        return a.monotone([](mpfr_t out, const mpfr_t x, mpfr_rnd_t rnd) { mpfr_exp(out, x, rnd); });
    }
    friend Interval sqrt(const Interval& a) {
        if (mpfr_sgn(a.lo_) < 0) throw Error("sqrt of a negative interval");
        return a.monotone([](mpfr_t out, const mpfr_t x, mpfr_rnd_t rnd) { mpfr_sqrt(out, x, rnd); });
    }
    // a^b for a > 0.
    friend Interval pow(const Interval& a, const Interval& b) { return exp(b * log(a)); }

    friend Interval max_with_one(const Interval& a) {
        Interval r(a);
        if (mpfr_cmp_ui(r.lo_, 1) < 0) mpfr_set_ui(r.lo_, 1, MPFR_RNDD);
        if (mpfr_cmp_ui(r.hi_, 1) < 0) mpfr_set_ui(r.hi_, 1, MPFR_RNDU);
        return r;
    }

    // Widen by radius on both sides.
    Interval inflate(const mpfr_t radius) const {
        Interval r(*this);
        mpfr_sub(r.lo_, r.lo_, radius, MPFR_RNDD);
        mpfr_add(r.hi_, r.hi_, radius, MPFR_RNDU);
        return r;
    }

    BigInt floor_lo() const { return to_int(lo_, MPFR_RNDD); }
    BigInt floor_hi() const { return to_int(hi_, MPFR_RNDD); }
    BigInt ceil_lo() const { return to_int(lo_, MPFR_RNDU); }
    BigInt ceil_hi() const { return to_int(hi_, MPFR_RNDU); }

    static std::string format(const mpfr_t x, unsigned digits, mpfr_rnd_t rnd) {
        char* buf = nullptr;
        std::string fmt = "%." + std::to_string(digits) + "R" + (rnd == MPFR_RNDD ? "D" : "U") + "g";
        mpfr_asprintf(&buf, fmt.c_str(), x);
        std::string s(buf);
        mpfr_free_str(buf);
        return s;
    }
    std::string lo_string(unsigned digits = 20) const { return format(lo_, digits, MPFR_RNDD); }
    std::string hi_string(unsigned digits = 20) const { return format(hi_, digits, MPFR_RNDU); }
    std::string to_string(unsigned digits = 20) const { return "[" + lo_string(digits) + ", " + hi_string(digits) + "]"; }

private:
    template <class Op>
    static Interval extremes(const Interval& a, const Interval& b, Op op) {
        const mpfr_prec_t prec = std::max(a.precision(), b.precision());
        Interval r(prec);
        mpfr_t t;
        mpfr_init2(t, prec);
        const mpfr_srcptr xs[2] = {a.lo_, a.hi_};
        const mpfr_srcptr ys[2] = {b.lo_, b.hi_};
        bool first = true;
        for (auto x : xs)
            for (auto y : ys) {
                op(t, x, y, MPFR_RNDD);
                if (first || mpfr_cmp(t, r.lo_) < 0) mpfr_set(r.lo_, t, MPFR_RNDD);
                op(t, x, y, MPFR_RNDU);
                if (first || mpfr_cmp(t, r.hi_) > 0) mpfr_set(r.hi_, t, MPFR_RNDU);
                first = false;
            }
        mpfr_clear(t);
        return r;
    }

    template <class Op>
    Interval monotone(Op op) const {
        Interval r(precision());
        op(r.lo_, lo_, MPFR_RNDD);
        op(r.hi_, hi_, MPFR_RNDU);
        return r;
    }

    static BigInt to_int(const mpfr_t x, mpfr_rnd_t rnd) {
        BigInt z;
        mpfr_get_z(z.get_mpz_t(), x, rnd);
        return z;
    }

    mpfr_t lo_;
    mpfr_t hi_;
};

// ---------------------------------------------------------------- bound formulas

inline constexpr long kReferenceBoundP3 = 20031664;

// 12 [K:Q] 2^([K:Q]^2) (1 + C)^([K:Q]^2 + [K:Q]); the height lower bound is d^(-S).
struct HeightLowerBound {
    Interval s_phi;
    Interval log_lower;  // -S log d
};

inline HeightLowerBound height_lower_bound_S(unsigned d, unsigned field_degree, const Interval& c_phi) {
    if (d < 2 || field_degree < 1) throw Error("height lower bound needs d >= 2 and [K:Q] >= 1");
    if (mpfr_sgn(c_phi.lo()) < 0) throw Error("height lower bound needs C >= 0");
    const mpfr_prec_t prec = c_phi.precision();
    const long k = field_degree;
    const Interval two_pow = pow(Interval(2, prec), Interval(k * k, prec));
    const Interval s = Interval(12 * k, prec) * two_pow * pow(Interval(1, prec) + c_phi, Interval(k * k + k, prec));
    return {s, Interval(0, prec) - s * log(Interval(static_cast<long>(d), prec))};
}

inline Interval log4(mpfr_prec_t prec) { return log(Interval(4, prec)); }

struct BoundReport {
    unsigned p = 0;
    BigInt d_p;            // (-1)^((p-1)/2) p^(p-2)
    BigInt s_bound;        // ceil((p-1) + p |D_p|^(1/2))
    BigInt rank_bound;     // ceil((p-1)/2 - 1 + p |D_p|^(1/2))
    Interval hbar_bound;   // (p-1) rank log|D_p| + (p(p-1)+1) log 2
    Interval crude_log;    // base-p logarithm of the crude height bound
    Interval s_phi;        // lower-bound exponent for delta_p, C = log 4
    Interval n_real;       // crude_log + s_phi + 2
    BigInt n_bound;        // certified ceiling of n_real
    unsigned precision = 0;
    std::optional<BigInt> reference_n_bound;  // stated value, available at p = 3
    bool discrepancy = false;
};

// The exponent 16p^(p/2+9) + 14p^(p/2+7) + 84p^(p/2+6) + 1.5p^(p/2+5) + 2p^5 - 4p^4.
inline Interval crude_exponent(unsigned p, mpfr_prec_t prec) {
    const Interval P(static_cast<long>(p), prec);
    const Interval half = Interval::ratio(static_cast<long>(p), 2, prec);
    auto term = [&](long coeff_num, long coeff_den, long shift) {
        return Interval::ratio(coeff_num, coeff_den, prec) * pow(P, half + Interval(shift, prec));
    };
    const BigInt p4 = BigInt(p) * p * p * p;
    return term(16, 1, 9) + term(14, 1, 7) + term(84, 1, 6) + term(3, 2, 5) + Interval(BigInt(2 * p4 * p - 4 * p4), prec);
}

inline BoundReport bound_report(unsigned p, unsigned precision_digits = 50) {
    if (p < 3 || !is_prime(static_cast<std::uint64_t>(p))) throw Error("bound report needs an odd prime");
    if (precision_digits < 30) throw Error("precision must be at least 30 digits");
    const mpfr_prec_t prec = digits_to_bits(precision_digits);
    cyclotomic::Context ctx(p);
    BoundReport r;
    r.p = p;
    r.precision = precision_digits;
    r.d_p = ctx.discriminant();
    const BigInt abs_d = abs(r.d_p);

    const Interval root = Interval(static_cast<long>(p), prec) * sqrt(Interval(abs_d, prec));
    r.s_bound = (Interval(static_cast<long>(p) - 1, prec) + root).ceil_hi();
    r.rank_bound = (Interval::ratio(static_cast<long>(p) - 3, 2, prec) + root).ceil_hi();

    const long pl = p;
    r.hbar_bound = Interval(pl - 1, prec) * Interval(r.rank_bound, prec) * log(Interval(abs_d, prec)) +
                   Interval(pl * (pl - 1) + 1, prec) * log(Interval(2, prec));
    r.crude_log = crude_exponent(p, prec);
    r.s_phi = height_lower_bound_S(p, p - 1, log4(prec)).s_phi;
    r.n_real = r.crude_log + r.s_phi + Interval(2, prec);
    if (r.n_real.ceil_lo() != r.n_real.ceil_hi()) throw Error("raise precision");
    r.n_bound = r.n_real.ceil_hi();
    if (p == 3) {
        r.reference_n_bound = BigInt(kReferenceBoundP3);
        r.discrepancy = r.n_bound != *r.reference_n_bound;
    }
    return r;
}

// The height inequality p^(n-1) * h_low <= p^E + log 8 bounds every non-maximal
// stage n. largest_n is the largest n it admits; log(p^E + log 8) is enclosed
// by E log p + log 8 * p^(-E).
struct StageInequality {
    BigInt largest_n_height_bound;     // with h_low = p^(-S)
    std::optional<BigInt> largest_n_estimate;  // with a numerical lower endpoint
    bool bound_exceeds_admissible = false;     // n_bound > largest_n_height_bound
    bool n_bound_admissible = false;           // inequality at n = n_bound, with the estimate
};

inline StageInequality stage_inequality(const BoundReport& r, const std::optional<Interval>& hhat_lower = std::nullopt) {
    const mpfr_prec_t prec = r.crude_log.precision();
    const Interval logp = log(Interval(static_cast<long>(r.p), prec));
    const Interval slack = log(Interval(8, prec)) * exp(Interval(0, prec) - r.crude_log * logp) / logp;
    auto largest = [&](const Interval& log_h) {
        return (Interval(1, prec) + r.crude_log + slack - log_h / logp).floor_hi();
    };
    StageInequality s;
    const Interval log_height_bound = Interval(0, prec) - r.s_phi * logp;
    s.largest_n_height_bound = largest(log_height_bound);
    s.bound_exceeds_admissible = r.n_bound > s.largest_n_height_bound;
    if (hhat_lower) {
        if (!hhat_lower->positive()) throw Error("height lower endpoint must be positive");
        s.largest_n_estimate = largest(log(*hhat_lower));
        s.n_bound_admissible = r.n_bound <= *s.largest_n_estimate;
    }
    return s;
}

// ---------------------------------------------------------------- heights

// (1/(p-1)) sum over embeddings of log max(1, |sigma_k(a)|), for an algebraic integer a.
inline Interval weil_height(const CycInt& a, unsigned precision_digits) {
    const unsigned p = a.context().p();
    const mpfr_prec_t prec = digits_to_bits(precision_digits) + static_cast<mpfr_prec_t>(a.max_bits()) + 64;
    const Interval two_pi_over_p = Interval(2, prec) * Interval::pi(prec) / Interval(static_cast<long>(p), prec);

    // cos and sin at the midpoint of the angle, widened by the angle radius plus rounding.
    mpfr_t mid, radius, c, s;
    mpfr_inits2(prec, mid, radius, c, s, static_cast<mpfr_ptr>(nullptr));
    auto trig = [&](long m, Interval& cos_out, Interval& sin_out) {
        const Interval angle = Interval(m, prec) * two_pi_over_p;
        mpfr_add(mid, angle.lo(), angle.hi(), MPFR_RNDN);
        mpfr_div_2ui(mid, mid, 1, MPFR_RNDN);
        mpfr_sub(radius, angle.hi(), angle.lo(), MPFR_RNDU);
        mpfr_set_ui_2exp(c, 1, -(prec - 4), MPFR_RNDU);
        mpfr_add(radius, radius, c, MPFR_RNDU);
        mpfr_sin_cos(s, c, mid, MPFR_RNDN);
        cos_out = Interval::point(c, prec).inflate(radius);
        sin_out = Interval::point(s, prec).inflate(radius);
    };

    Interval total(0, prec);
    const auto& coeffs = a.coeffs();
    for (unsigned k = 1; k < p; ++k) {
        Interval re(0, prec), im(0, prec);
        for (std::size_t j = 0; j < coeffs.size(); ++j) {
            if (coeffs[j] == 0) continue;
            Interval cj(prec), sj(prec);
            trig(static_cast<long>((j * k) % p), cj, sj);
            const Interval aj(coeffs[j], prec);
            re = re + aj * cj;
            im = im + aj * sj;
        }
        const Interval mod2 = max_with_one(re * re + im * im);
        total = total + log(mod2) / Interval(2, prec);
    }
    mpfr_clears(mid, radius, c, s, static_cast<mpfr_ptr>(nullptr));
    return total / Interval(static_cast<long>(p) - 1, prec);
}

struct HeightEstimate {
    unsigned n_iter = 0;
    bool preperiodic = false;
    Interval weil;      // h(phi^n(x0))
    Interval value;     // h(phi^n(x0)) / d^n
    Interval enclosure; // value widened by C / d^n, C = log 4
};

// a_n = h(phi^n(x0)) / d^n for n = 0..n_iter, stopping early at a repeat.
inline std::vector<Interval> height_sequence(const dynamics::CyclotomicMap& map, const CycInt& x0, unsigned n_iter,
                                             unsigned precision_digits, bool* preperiodic = nullptr) {
    std::vector<Interval> out;
    std::vector<CycInt> seen{x0};
    CycInt x = x0;
    BigInt dn = 1;
    if (preperiodic) *preperiodic = false;
    for (unsigned n = 0; n <= n_iter; ++n) {
        if (n > 0) {
            x = map(x);
            dn *= map.degree;
            if (std::find(seen.begin(), seen.end(), x) != seen.end()) {
                if (preperiodic) *preperiodic = true;
                return out;
            }
            seen.push_back(x);
        }
        const Interval h = weil_height(x, precision_digits);
        out.push_back(h / Interval(dn, h.precision()));
    }
    return out;
}

inline HeightEstimate canonical_height_estimate(const dynamics::CyclotomicMap& map, const CycInt& x0, unsigned n_iter,
                                                unsigned precision_digits = 50) {
    if (n_iter < 3) throw Error("canonical height estimate needs n_iter >= 3");
    const mpfr_prec_t prec = digits_to_bits(precision_digits);
    HeightEstimate e;
    e.n_iter = n_iter;
    bool pre = false;
    const auto seq = height_sequence(map, x0, n_iter, precision_digits, &pre);
    if (pre) {
        e.preperiodic = true;
        e.weil = Interval(0, prec);
        e.value = Interval(0, prec);
        e.enclosure = Interval(0, prec);
        return e;
    }
    BigInt dn = 1;
    for (unsigned k = 0; k < n_iter; ++k) dn *= map.degree;
    e.value = seq.back();
    e.weil = e.value * Interval(dn, prec);
    const Interval radius = log4(prec) / Interval(dn, prec);
    e.enclosure = Interval::hull(e.value - radius, e.value + radius);
    return e;
}

}  // namespace arboreal::index_bounds
