#pragma once

// Eisenstein criteria at the ramified prime (1 - zeta_p), the translation
// rule f(x + a) - c_p a^p, and the conjugated family (x - zeta^i)^p + 1 + zeta^i - zeta.

#include "arboreal/common.hpp"
#include "arboreal/cyclotomic.hpp"
#include "arboreal/dynamics.hpp"

#include <string>
#include <vector>

namespace arboreal::eisenstein {

using cyclotomic::Context;
using cyclotomic::CycInt;
using cyclotomic::Valuation;

inline constexpr std::size_t kDefaultDegreeCap = 200;

inline Valuation nu(const CycInt& a) { return cyclotomic::ramified_valuation(a); }

// Polynomial over Z[zeta_p], low degree first, leading coefficient nonzero.
class CycPolynomial {
public:
    explicit CycPolynomial(Context ctx) : ctx_(ctx) {}
    CycPolynomial(Context ctx, std::vector<CycInt> coeffs) : ctx_(ctx), c_(std::move(coeffs)) { trim(); }

    static CycPolynomial constant(const CycInt& a) { return CycPolynomial(a.context(), {a}); }
    static CycPolynomial x(Context ctx) { return CycPolynomial(ctx, {CycInt(ctx), CycInt::integer(ctx, 1)}); }

    const Context& context() const { return ctx_; }
    int degree() const { return static_cast<int>(c_.size()) - 1; }
    const std::vector<CycInt>& coeffs() const { return c_; }
    const CycInt& operator[](std::size_t i) const { return c_.at(i); }
    const CycInt& lead() const { return c_.back(); }

    friend CycPolynomial operator+(const CycPolynomial& a, const CycPolynomial& b) {
        std::vector<CycInt> c(std::max(a.c_.size(), b.c_.size()), CycInt(a.ctx_));
        for (std::size_t i = 0; i < a.c_.size(); ++i) c[i] += a.c_[i];
        for (std::size_t i = 0; i < b.c_.size(); ++i) c[i] += b.c_[i];
        return CycPolynomial(a.ctx_, std::move(c));
    }

    friend CycPolynomial operator-(const CycPolynomial& a, const CycPolynomial& b) {
        std::vector<CycInt> c(std::max(a.c_.size(), b.c_.size()), CycInt(a.ctx_));
        for (std::size_t i = 0; i < a.c_.size(); ++i) c[i] += a.c_[i];
        for (std::size_t i = 0; i < b.c_.size(); ++i) c[i] -= b.c_[i];
        return CycPolynomial(a.ctx_, std::move(c));
    }

    friend CycPolynomial operator*(const CycPolynomial& a, const CycPolynomial& b) {
        if (a.c_.empty() || b.c_.empty()) return CycPolynomial(a.ctx_);
        std::vector<CycInt> c(a.c_.size() + b.c_.size() - 1, CycInt(a.ctx_));
        for (std::size_t i = 0; i < a.c_.size(); ++i) {
            if (a.c_[i].is_zero()) continue;
            for (std::size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
        }
        return CycPolynomial(a.ctx_, std::move(c));
    }

    friend bool operator==(const CycPolynomial& a, const CycPolynomial& b) { return a.c_ == b.c_; }

    CycInt eval(const CycInt& x) const {
        CycInt acc(ctx_);
        for (std::size_t i = c_.size(); i-- > 0;) acc = acc * x + c_[i];
        return acc;
    }

    // f(x + a)
    CycPolynomial shift(const CycInt& a) const {
        CycPolynomial lin(ctx_, {a, CycInt::integer(ctx_, 1)});
        CycPolynomial acc(ctx_);
        for (std::size_t i = c_.size(); i-- > 0;) acc = acc * lin + constant(c_[i]);
        return acc;
    }

private:
    void trim() {
        while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
    }

    Context ctx_;
    std::vector<CycInt> c_;
};

inline CycPolynomial pow(CycPolynomial base, unsigned e) {
    CycPolynomial result = CycPolynomial::constant(CycInt::integer(base.context(), 1));
    while (e) {
        if (e & 1) result = result * base;
        e >>= 1;
        if (e) base = base * base;
    }
    return result;
}

// (inner - gamma)^d + c as a polynomial.
inline CycPolynomial compose(const dynamics::CyclotomicMap& map, const CycPolynomial& inner) {
    return pow(inner - CycPolynomial::constant(map.gamma), map.degree) + CycPolynomial::constant(map.c);
}

// Coefficient form of the n-th iterate; throws when p^n exceeds the cap.
inline CycPolynomial expand_iterate(const dynamics::CyclotomicMap& map, const Context& ctx, unsigned n,
                                    std::size_t degree_cap = kDefaultDegreeCap) {
    std::size_t deg = 1;
    for (unsigned k = 0; k < n; ++k) {
        deg *= map.degree;
        if (deg > degree_cap) throw Error("degree cap exceeded: " + std::to_string(deg) + " > " + std::to_string(degree_cap));
    }
    CycPolynomial f = CycPolynomial::x(ctx);
    for (unsigned k = 0; k < n; ++k) f = compose(map, f);
    return f;
}

inline std::vector<Valuation> valuation_profile(const CycPolynomial& f) {
    std::vector<Valuation> out;
    for (const auto& c : f.coeffs()) out.push_back(nu(c));
    return out;
}

enum class Mode { standard, strong };

// standard: nu(lead) = 0, nu(c_i) >= 1 in the middle, nu(c_0) = 1.
// strong:   the same with nu(c_i) > 1 in the middle.
inline bool eisenstein_check(const CycPolynomial& f, Mode mode) {
    if (f.degree() < 1) throw Error("Eisenstein check needs a nonconstant polynomial");
    const auto v = valuation_profile(f);
    if (v.back().infinite || v.back().value != 0) return false;
    if (v.front().infinite || v.front().value != 1) return false;
    const long middle = mode == Mode::strong ? 2 : 1;
    for (std::size_t i = 1; i + 1 < v.size(); ++i)
        if (!v[i].at_least(middle)) return false;
    return true;
}

struct TranslateResult {
    CycPolynomial g;
    bool eisenstein = false;
    Valuation constant_valuation;
};

// g(x) = f(x + alpha) - c_d alpha^d; requires the strong conditions on f.
// Every alpha in Z[zeta_p] is integral, so nu(alpha) >= 0 holds automatically.
inline TranslateResult translate_check(const CycPolynomial& f, const CycInt& alpha) {
    if (!eisenstein_check(f, Mode::strong)) throw Error("translate needs the strong Eisenstein conditions");
    const unsigned d = static_cast<unsigned>(f.degree());
    CycPolynomial g = f.shift(alpha) - CycPolynomial::constant(f.lead() * cyclotomic::pow(alpha, d));
    TranslateResult r{g, eisenstein_check(g, Mode::standard), nu(g[0])};
    return r;
}

// x^p + (1 - zeta_p)
inline CycPolynomial strong_example(const Context& ctx) {
    std::vector<CycInt> c(ctx.p() + 1, CycInt(ctx));
    c[0] = CycInt(ctx, {1, -1});
    c[ctx.p()] = CycInt::integer(ctx, 1);
    return CycPolynomial(ctx, std::move(c));
}

struct IterateCoverage {
    unsigned n = 0;
    bool direct = false;      // expanded and scanned
    bool eisenstein = false;  // verdict (direct scan, or constant-term argument)
    bool constant_term_matches_orbit = false;
};

struct ConjugateFamilyCertificate {
    unsigned p = 0;
    long i = 0;
    unsigned n_max = 0;
    std::size_t degree_cap = kDefaultDegreeCap;
    bool orbit_identity = false;        // phi(0) = phi^2(0) = zeta^i - zeta
    bool unit_twist_identity = false;   // zeta^(p-i) phi(0) = 1 - zeta^(p-i+1)
    bool translate_eisenstein = false;  // (x - zeta^i)^p + 2 - zeta
    std::vector<Valuation> orbit_valuations;  // nu(phi^n(0)), n = 1..n_max
    std::vector<IterateCoverage> iterates;

    bool passed() const {
        if (!orbit_identity || !unit_twist_identity || !translate_eisenstein) return false;
        for (const auto& v : orbit_valuations)
            if (v.infinite || v.value != 1) return false;
        for (const auto& it : iterates)
            if (!it.eisenstein || (it.direct && !it.constant_term_matches_orbit)) return false;
        return true;
    }
};

inline ConjugateFamilyCertificate conjugate_family_check(unsigned p, long i, unsigned n_max,
                                                   std::size_t degree_cap = kDefaultDegreeCap) {
    if (i < 2 || i > static_cast<long>(p)) throw Error("family index must satisfy 2 <= i <= p");
    Context ctx(p);
    const auto phi = dynamics::conjugated_family(ctx, i);
    const CycInt zero(ctx);
    const CycInt z = CycInt::zeta(ctx);
    const CycInt zi = CycInt::zeta_power(ctx, i);

    ConjugateFamilyCertificate cert;
    cert.p = p;
    cert.i = i;
    cert.n_max = n_max;
    cert.degree_cap = degree_cap;

    const CycInt phi0 = phi(zero);
    cert.orbit_identity = phi0 == zi - z && phi(phi0) == phi0;
    cert.unit_twist_identity = CycInt::zeta_power(ctx, static_cast<long>(p) - i) * phi0 ==
                               CycInt::integer(ctx, 1) - CycInt::zeta_power(ctx, static_cast<long>(p) - i + 1);
    cert.translate_eisenstein = translate_check(strong_example(ctx), -zi).eisenstein;

    CycInt x = zero;
    std::size_t deg = 1;
    for (unsigned n = 1; n <= n_max; ++n) {
        x = phi(x);
        cert.orbit_valuations.push_back(nu(x));
        deg *= p;
        IterateCoverage cov;
        cov.n = n;
        if (deg <= degree_cap) {
            const auto f = expand_iterate(phi, ctx, n, degree_cap);
            cov.direct = true;
            cov.eisenstein = eisenstein_check(f, Mode::standard);
            cov.constant_term_matches_orbit = f[0] == x;
        } else {
            // Monic iterate whose non-constant coefficients reduce to those of x^(p^n)
            // modulo (1 - zeta); Eisenstein once nu(phi^n(0)) = 1.
            const auto v = nu(x);
            cov.eisenstein = !v.infinite && v.value == 1;
        }
        cert.iterates.push_back(cov);
    }
    return cert;
}

}  // namespace arboreal::eisenstein
