#pragma once

// Hyperelliptic curves a*y^2 = f(x) over small prime fields: point counts,
// L-polynomials, and Mumford-representation arithmetic (Cantor's algorithm)
// on odd-degree models.

#include "arboreal/common.hpp"
#include "arboreal/finitefield.hpp"

#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <string>
#include <unordered_set>
#include <vector>

namespace arboreal::hyperelliptic {

using finitefield::ExtField;
using finitefield::FpPoly;
using finitefield::PrimeField;
namespace poly = finitefield::poly;

struct HyperCurve {
    BigInt a = 1;
    std::vector<BigInt> f;  // low degree first

    int degree() const {
        int d = static_cast<int>(f.size()) - 1;
        while (d >= 0 && f[static_cast<std::size_t>(d)] == 0) --d;
        return d;
    }
    unsigned genus() const { return static_cast<unsigned>(std::max(0, (degree() - 1) / 2)); }
    bool odd_degree() const { return degree() % 2 == 1; }
    const BigInt& lead() const { return f[static_cast<std::size_t>(degree())]; }

    // Integer polynomial value at x.
    BigInt eval(const BigInt& x) const {
        BigInt acc = 0;
        for (std::size_t i = f.size(); i-- > 0;) acc = acc * x + f[i];
        return acc;
    }
};

// y^2 = x^3 - 2x^2 + 2
inline HyperCurve curve_c1() { return {1, {2, 0, -2, 1}}; }
// y^2 = x^7 - 4x^6 + 4x^5 + 2x^4 - 4x^3 + 2
inline HyperCurve curve_c2() { return {1, {2, 0, 0, -4, 2, 4, -4, 1}}; }
// y^2 = x^3 + 2x^2 + 2x + 2
inline HyperCurve curve_x1() { return {1, {2, 2, 2, 1}}; }
// 2y^2 = x^8 + 4x^7 + 8x^6 + 10x^5 + 8x^4 + 4x^3 - 1
inline HyperCurve curve_x2() { return {2, {-1, 0, 0, 4, 8, 10, 8, 4, 1}}; }

// The model a*y^2 = f normalised to Y^2 = h(x) with h = a*f, Y = a*y.
inline FpPoly normalized_rhs(const HyperCurve& curve, const PrimeField& F) {
    return poly::scale(F, poly::reduce(F, curve.f), F.from_big(curve.a));
}

inline bool has_good_reduction(const HyperCurve& curve, std::uint64_t q) {
    if (q % 2 == 0 || !is_prime(q)) return false;
    if (mod_reduce(curve.a, q) == 0 || mod_reduce(curve.lead(), q) == 0) return false;
    PrimeField F(q);
    return poly::is_squarefree(F, poly::reduce(F, curve.f));
}

inline void require_good_reduction(const HyperCurve& curve, std::uint64_t q) {
    if (!has_good_reduction(curve, q)) throw Error("bad reduction at q = " + std::to_string(q));
}

namespace detail {

// Res(a, b) over F_q.
inline std::uint64_t resultant(const PrimeField& F, FpPoly a, FpPoly b) {
    std::uint64_t acc = 1;
    while (true) {
        if (a.is_zero() || b.is_zero()) return 0;
        const int da = a.degree(), db = b.degree();
        if (db == 0) return F.mul(acc, F.pow(b.lead(), static_cast<std::uint64_t>(da)));
        if (da == 0) return F.mul(acc, F.pow(a.lead(), static_cast<std::uint64_t>(db)));
        FpPoly r = poly::mod(F, a, b);
        if (r.is_zero()) return 0;
        if ((da * db) % 2 == 1) acc = F.neg(acc);
        acc = F.mul(acc, F.pow(b.lead(), static_cast<std::uint64_t>(da - r.degree())));
        a = std::move(b);
        b = std::move(r);
    }
}

inline int legendre(const PrimeField& F, std::uint64_t a) { return finitefield::quadratic_character(F, a); }

}  // namespace detail

// Number of points on the smooth projective model over F_{q^k}.
inline std::uint64_t count_points(const HyperCurve& curve, std::uint64_t q, unsigned k) {
    require_good_reduction(curve, q);
    if (k < 1 || k > 3) throw Error("point counting supports extension degree 1..3");
    PrimeField F(q);
    const FpPoly h = normalized_rhs(curve, F);
    std::int64_t affine = 0;
    if (k == 1) {
        for (std::uint64_t x = 0; x < q; ++x) affine += 1 + detail::legendre(F, poly::eval(F, h, x));
    } else {
        ExtField E(q, k);
        for (std::uint64_t i = 0; i < E.order(); ++i) {
            const FpPoly y2 = E.eval(h, E.from_index(i));
            if (y2.is_zero()) {
                affine += 1;
                continue;
            }
            affine += 1 + detail::legendre(F, detail::resultant(F, E.modulus(), y2));
        }
    }
    std::int64_t at_infinity = 1;
    if (!curve.odd_degree()) {
        const bool square = (k % 2 == 0) || detail::legendre(F, h.lead()) == 1;
        at_infinity = square ? 2 : 0;
    }
    return static_cast<std::uint64_t>(affine + at_infinity);
}

struct LPolynomial {
    std::uint64_t q = 0;
    std::vector<std::int64_t> coeffs;  // c_0 .. c_{2g}, c_0 = 1

    unsigned genus() const { return static_cast<unsigned>(coeffs.size() / 2); }
    std::int64_t at_one() const { return std::accumulate(coeffs.begin(), coeffs.end(), std::int64_t{0}); }

    bool satisfies_functional_equation() const {
        const unsigned g = genus();
        std::int64_t qpow = 1;
        for (unsigned i = g + 1; i-- > 0;) {
            if (coeffs[2 * g - i] != qpow * coeffs[i]) return false;
            if (i > 0) qpow *= static_cast<std::int64_t>(q);
        }
        return true;
    }
};

inline LPolynomial l_polynomial(const HyperCurve& curve, std::uint64_t q) {
    const unsigned g = curve.genus();
    if (g < 1 || g > 3) throw Error("L-polynomial supports genus 1..3");
    std::vector<std::int64_t> s(g + 1, 0);
    std::int64_t qk = 1;
    for (unsigned k = 1; k <= g; ++k) {
        qk *= static_cast<std::int64_t>(q);
        s[k] = qk + 1 - static_cast<std::int64_t>(count_points(curve, q, k));
    }
    LPolynomial L{q, std::vector<std::int64_t>(2 * g + 1, 0)};
    L.coeffs[0] = 1;
    for (unsigned k = 1; k <= g; ++k) {
        std::int64_t acc = 0;
        for (unsigned i = 1; i <= k; ++i) acc += s[i] * L.coeffs[k - i];
        if (acc % static_cast<std::int64_t>(k) != 0) throw Error("internal: Newton identity not integral");
        L.coeffs[k] = -acc / static_cast<std::int64_t>(k);
    }
    std::int64_t qpow = 1;
    for (unsigned i = g; i-- > 0;) {
        qpow *= static_cast<std::int64_t>(q);
        L.coeffs[2 * g - i] = qpow * L.coeffs[i];
    }
    const double sq = std::sqrt(static_cast<double>(q));
    const double lo = std::pow(sq - 1.0, 2.0 * g), hi = std::pow(sq + 1.0, 2.0 * g);
    const auto order = static_cast<double>(L.at_one());
    if (order < lo * (1 - 1e-12) - 1e-9 || order > hi * (1 + 1e-12) + 1e-9)
        throw Error("internal: Jacobian order outside the Weil interval");
    return L;
}

inline std::int64_t jacobian_order(const HyperCurve& curve, std::uint64_t q) { return l_polynomial(curve, q).at_one(); }

struct CurvePoint {
    bool at_infinity = false;
    int branch = 0;  // 0 for the single point at infinity, +1/-1 on even-degree models
    std::uint64_t x = 0;
    std::uint64_t y = 0;

    friend bool operator==(const CurvePoint&, const CurvePoint&) = default;
    std::string to_string() const {
        if (at_infinity) return branch == 0 ? "inf" : (branch > 0 ? "inf+" : "inf-");
        return "(" + std::to_string(x) + "," + std::to_string(y) + ")";
    }
};

// Affine solutions of a*y^2 = f(x) in x-then-y order, followed by the points at infinity.
inline std::vector<CurvePoint> enumerate_points(const HyperCurve& curve, std::uint64_t q) {
    require_good_reduction(curve, q);
    PrimeField F(q);
    const FpPoly f = poly::reduce(F, curve.f);
    const auto a = F.from_big(curve.a);
    std::vector<std::uint64_t> sqrt_table(q, q);  // y^2 -> smallest y
    for (std::uint64_t y = q; y-- > 0;) sqrt_table[F.mul(y, y)] = y;
    std::vector<CurvePoint> out;
    for (std::uint64_t x = 0; x < q; ++x) {
        const auto rhs = F.mul(poly::eval(F, f, x), F.inv(a));
        const auto y = sqrt_table[rhs];
        if (y == q) continue;
        out.push_back({false, 0, x, y});
        if (y != 0) out.push_back({false, 0, x, F.neg(y)});
    }
    if (curve.odd_degree()) {
        out.push_back({true, 0, 0, 0});
    } else if (detail::legendre(F, F.mul(F.from_big(curve.lead()), a)) == 1) {
        out.push_back({true, 1, 0, 0});
        out.push_back({true, -1, 0, 0});
    }
    return out;
}

struct MumfordDivisor {
    FpPoly u = FpPoly::constant(1);
    FpPoly v;

    friend bool operator==(const MumfordDivisor&, const MumfordDivisor&) = default;
    friend auto operator<=>(const MumfordDivisor& a, const MumfordDivisor& b) {
        if (auto c = a.u <=> b.u; c != 0) return c;
        return a.v <=> b.v;
    }
    std::string to_string() const {
        auto show = [](const FpPoly& p) {
            std::string s = "[";
            for (std::size_t i = 0; i < p.coeffs().size(); ++i) s += (i ? "," : "") + std::to_string(p[i]);
            return s + "]";
        };
        return "(" + show(u) + ", " + show(v) + ")";
    }
};

// Group law on J(F_q) for an odd-degree model.
class Jacobian {
    struct LocalRoots {
        FpPoly modulus;
        std::vector<FpPoly> roots;
    };

public:
    Jacobian(const HyperCurve& curve, std::uint64_t q) : F_(q), genus_(curve.genus()) {
        if (!curve.odd_degree()) throw Error("Cantor arithmetic restricted to odd-degree models");
        require_good_reduction(curve, q);
        h_ = normalized_rhs(curve, F_);
    }

    const PrimeField& field() const { return F_; }
    unsigned genus() const { return genus_; }
    const FpPoly& rhs() const { return h_; }

    MumfordDivisor identity() const { return {}; }

    bool is_valid(const MumfordDivisor& D) const {
        if (D.u.is_zero() || D.u.lead() != 1) return false;
        if (D.u.degree() > static_cast<int>(genus_)) return false;
        if (D.v.degree() >= D.u.degree()) return false;
        return poly::mod(F_, poly::sub(F_, poly::mul(F_, D.v, D.v), h_), D.u).is_zero();
    }

    void require_valid(const MumfordDivisor& D) const {
        if (!is_valid(D)) throw Error("invalid divisor " + D.to_string());
    }

    // Reduce integer Mumford data (monic u) modulo q.
    MumfordDivisor reduce(const std::vector<BigInt>& u, const std::vector<BigInt>& v) const {
        MumfordDivisor D{poly::reduce(F_, u), poly::reduce(F_, v)};
        D.v = poly::mod(F_, D.v, D.u);
        require_valid(D);
        return D;
    }

    // [P - inf] for an affine point.
    MumfordDivisor from_point(const CurvePoint& P) const {
        if (P.at_infinity) return identity();
        MumfordDivisor D{FpPoly{F_.neg(P.x), 1}, FpPoly::constant(P.y)};
        require_valid(D);
        return D;
    }

    MumfordDivisor negate(const MumfordDivisor& D) const { return {D.u, poly::mod(F_, poly::neg(F_, D.v), D.u)}; }

    MumfordDivisor add(const MumfordDivisor& D1, const MumfordDivisor& D2) const {
        auto e = poly::xgcd(F_, D1.u, D2.u);
        auto c = poly::xgcd(F_, e.g, poly::add(F_, D1.v, D2.v));
        const FpPoly& d = c.g;
        const FpPoly s1 = poly::mul(F_, c.s, e.s);
        const FpPoly s2 = poly::mul(F_, c.s, e.t);
        const FpPoly& s3 = c.t;
        FpPoly u = poly::exact_div(F_, poly::mul(F_, D1.u, D2.u), poly::mul(F_, d, d));
        FpPoly num = poly::add(F_, poly::add(F_, poly::mul(F_, poly::mul(F_, s1, D1.u), D2.v),
                                               poly::mul(F_, poly::mul(F_, s2, D2.u), D1.v)),
                               poly::mul(F_, s3, poly::add(F_, poly::mul(F_, D1.v, D2.v), h_)));
        FpPoly v = poly::mod(F_, poly::exact_div(F_, num, d), u);
        while (u.degree() > static_cast<int>(genus_)) {
            FpPoly u2 = poly::exact_div(F_, poly::sub(F_, h_, poly::mul(F_, v, v)), u);
            u = poly::monic(F_, u2);
            v = poly::mod(F_, poly::neg(F_, v), u);
        }
        return {poly::monic(F_, u), poly::mod(F_, v, u)};
    }

    MumfordDivisor scalar(std::int64_t n, MumfordDivisor D) const {
        if (n < 0) {
            n = -n;
            D = negate(D);
        }
        MumfordDivisor acc = identity();
        while (n) {
            if (n & 1) acc = add(acc, D);
            n >>= 1;
            if (n) D = add(D, D);
        }
        return acc;
    }

    // Smallest k >= 1 with kD = 0, by repeated addition up to bound.
    std::int64_t order_of(const MumfordDivisor& D, std::int64_t bound) const {
        MumfordDivisor acc = D;
        for (std::int64_t k = 1; k <= bound; ++k) {
            if (acc == identity()) return k;
            acc = add(acc, D);
        }
        throw Error("internal: divisor order exceeds bound " + std::to_string(bound));
    }

    // Injective key for hashing; valid while q^(2g) * (g + 1) < 2^64.
    std::uint64_t key(const MumfordDivisor& D) const {
        const std::uint64_t q = F_.q();
        std::uint64_t k = static_cast<std::uint64_t>(D.u.degree());
        for (unsigned i = 0; i < genus_; ++i) k = k * q + D.u[i];
        for (unsigned i = 0; i < genus_; ++i) k = k * q + D.v[i];
        return k;
    }

    // All reduced divisors, sorted. Square roots of h modulo each monic u are
    // assembled from its factorisation (roots, Hensel lifts, CRT).
    std::vector<MumfordDivisor> enumerate() const {
        std::uint64_t size = 1;
        for (unsigned i = 0; i < genus_; ++i) size *= F_.q();
        if (size > 200000) throw Error("size cap exceeded: q^g > 2e5");
        std::vector<MumfordDivisor> out;
        for (unsigned d = 0; d <= genus_; ++d) {
            std::uint64_t count = 1;
            for (unsigned i = 0; i < d; ++i) count *= F_.q();
            for (std::uint64_t idx = 0; idx < count; ++idx) {
                std::vector<std::uint64_t> c(d + 1, 1);
                std::uint64_t rest = idx;
                for (unsigned j = 0; j < d; ++j) {
                    c[j] = rest % F_.q();
                    rest /= F_.q();
                }
                FpPoly u(std::move(c));
                for (auto& v : sqrt_mod_poly(u)) out.push_back({u, std::move(v)});
            }
        }
        std::sort(out.begin(), out.end());
        return out;
    }

    // All v with deg v < deg u and v^2 = h (mod u), for monic u with deg u <= 3.
    std::vector<FpPoly> sqrt_mod_poly(const FpPoly& u) const {
        if (u.degree() == 0) return {FpPoly{}};
        std::vector<LocalRoots> locals;
        FpPoly rest = u;
        for (std::uint64_t r = 0; r < F_.q() && rest.degree() > 0; ++r) {
            unsigned mult = 0;
            const FpPoly lin{F_.neg(r), 1};
            while (rest.degree() > 0 && poly::eval(F_, rest, r) == 0) {
                rest = poly::exact_div(F_, rest, lin);
                ++mult;
            }
            if (mult == 0) continue;
            locals.push_back(local_roots_at(r, mult));
        }
        if (rest.degree() > 0) {
            if (rest.degree() > 3) throw Error("sqrt_mod_poly supports deg u <= 3");
            ExtField K(F_, rest);
            std::vector<FpPoly> rs;
            if (auto s = finitefield::field_sqrt(K, poly::mod(F_, h_, rest))) {
                rs.push_back(*s);
                FpPoly other = K.neg(*s);
                if (!(other == *s)) rs.push_back(std::move(other));
            }
            locals.push_back({rest, std::move(rs)});
        }
        std::vector<FpPoly> acc{FpPoly{}};
        FpPoly acc_mod = FpPoly::constant(1);
        for (const auto& loc : locals) {
            auto eg = poly::xgcd(F_, acc_mod, loc.modulus);
            FpPoly new_mod = poly::mul(F_, acc_mod, loc.modulus);
            std::vector<FpPoly> next;
            for (const auto& a : acc)
                for (const auto& b : loc.roots) {
                    // a + (b - a) * s * acc_mod
                    FpPoly t = poly::mul(F_, poly::mul(F_, poly::sub(F_, b, a), eg.s), acc_mod);
                    next.push_back(poly::mod(F_, poly::add(F_, a, t), new_mod));
                }
            acc = std::move(next);
            acc_mod = std::move(new_mod);
        }
        return acc;
    }

private:
    // Solutions of v^2 = h modulo (x - r)^mult, mult <= 3.
    LocalRoots local_roots_at(std::uint64_t r, unsigned mult) const {
        // Taylor coefficients of h at r.
        std::vector<std::uint64_t> taylor;
        FpPoly cur = h_;
        const FpPoly lin{F_.neg(r), 1};
        for (unsigned j = 0; j < 3; ++j) {
            auto qr = poly::divmod(F_, cur, lin);
            taylor.push_back(qr.remainder[0]);
            cur = qr.quotient;
        }
        FpPoly modulus = FpPoly::constant(1);
        for (unsigned i = 0; i < mult; ++i) modulus = poly::mul(F_, modulus, lin);
        std::vector<FpPoly> roots;
        if (taylor[0] == 0) {
            if (mult == 1) roots.push_back(FpPoly{});
            else if (taylor[1] == 0) throw Error("internal: singular point on a good-reduction model");
        } else if (auto a0 = finitefield::sqrt_mod(static_cast<std::int64_t>(taylor[0]), F_.q())) {
            for (std::uint64_t a : {*a0, F_.neg(*a0)}) {
                const std::uint64_t inv2a = F_.inv(F_.mul(2, a));
                const std::uint64_t b = F_.mul(taylor[1], inv2a);
                const std::uint64_t c = F_.mul(F_.sub(taylor[2], F_.mul(b, b)), inv2a);
                // a + b (x - r) + c (x - r)^2, truncated modulo (x - r)^mult
                FpPoly v = FpPoly::constant(a);
                if (mult >= 2) v = poly::add(F_, v, poly::scale(F_, lin, b));
                if (mult >= 3) v = poly::add(F_, v, poly::scale(F_, poly::mul(F_, lin, lin), c));
                roots.push_back(poly::mod(F_, v, modulus));
            }
        }
        return LocalRoots{std::move(modulus), std::move(roots)};
    }

    PrimeField F_;
    unsigned genus_;
    FpPoly h_;
};

struct SubgroupReport {
    std::uint64_t order = 0;
    std::uint64_t exponent = 0;
    bool cyclic = false;
};

// Subgroup of prod_j J_j generated by the given tuples (one divisor per factor).
inline SubgroupReport subgroup_probe(const std::vector<const Jacobian*>& factors,
                                     const std::vector<std::vector<MumfordDivisor>>& generators,
                                     std::uint64_t cap = 10'000'000) {
    using Tuple = std::vector<MumfordDivisor>;
    for (const auto& g : generators) {
        if (g.size() != factors.size()) throw Error("generator arity does not match factor count");
        for (std::size_t j = 0; j < factors.size(); ++j) factors[j]->require_valid(g[j]);
    }
    auto tuple_key = [&](const Tuple& t) {
        std::string k;
        for (std::size_t j = 0; j < t.size(); ++j) k += std::to_string(factors[j]->key(t[j])) + ":";
        return k;
    };
    Tuple identity;
    for (auto* J : factors) identity.push_back(J->identity());
    std::unordered_set<std::string> seen{tuple_key(identity)};
    std::vector<Tuple> frontier{identity};
    while (!frontier.empty()) {
        std::vector<Tuple> next;
        for (const auto& t : frontier)
            for (const auto& g : generators) {
                Tuple s(t.size());
                for (std::size_t j = 0; j < t.size(); ++j) s[j] = factors[j]->add(t[j], g[j]);
                if (seen.insert(tuple_key(s)).second) {
                    if (seen.size() > cap) throw Error("subgroup closure exceeds cap");
                    next.push_back(std::move(s));
                }
            }
        frontier = std::move(next);
    }
    std::uint64_t exponent = 1;
    for (const auto& g : generators) {
        std::uint64_t ord = 1;
        for (std::size_t j = 0; j < factors.size(); ++j)
            ord = std::lcm(ord, static_cast<std::uint64_t>(factors[j]->order_of(g[j], static_cast<std::int64_t>(cap))));
        exponent = std::lcm(exponent, ord);
    }
    SubgroupReport r;
    r.order = seen.size();
    r.exponent = exponent;
    r.cyclic = (r.exponent == r.order);
    return r;
}

}  // namespace arboreal::hyperelliptic
