#pragma once

// Small finite fields F_q and F_{q^k}, dense polynomials over F_q, and the
// power-residue tests the sieves run on.

#include "arboreal/common.hpp"

#include <algorithm>
#include <cstdint>
#include <optional>
#include <vector>

namespace arboreal::finitefield {

class PrimeField {
public:
    using Element = std::uint64_t;

    explicit PrimeField(std::uint64_t q) : q_(q) {
        if (q < 2 || q > (1ull << 31) || !is_prime(q)) throw Error("field characteristic must be a prime below 2^31");
    }

    std::uint64_t q() const { return q_; }
    std::uint64_t order() const { return q_; }

    Element zero() const { return 0; }
    Element one() const { return 1; }
    Element from_int(std::int64_t a) const { return static_cast<Element>(mod_reduce(a, static_cast<std::int64_t>(q_))); }
    Element from_big(const BigInt& a) const { return mod_reduce(a, q_); }
    Element from_index(std::uint64_t i) const { return i % q_; }

    Element add(Element a, Element b) const { return (a + b) % q_; }
    Element sub(Element a, Element b) const { return (a + q_ - b) % q_; }
    Element neg(Element a) const { return (q_ - a) % q_; }
    Element mul(Element a, Element b) const { return a * b % q_; }
    Element inv(Element a) const {
        if (a % q_ == 0) throw Error("division by zero in F_" + std::to_string(q_));
        return inv_mod(a, q_);
    }
    Element pow(Element a, std::uint64_t e) const { return pow_mod(a, e, q_); }
    bool is_zero(Element a) const { return a % q_ == 0; }
    bool equal(Element a, Element b) const { return a % q_ == b % q_; }

    friend bool operator==(const PrimeField&, const PrimeField&) = default;

private:
    std::uint64_t q_;
};

// Dense polynomial over F_q, low degree first, no trailing zeros.
class FpPoly {
public:
    FpPoly() = default;
    explicit FpPoly(std::vector<std::uint64_t> c) : c_(std::move(c)) { trim(); }
    FpPoly(std::initializer_list<std::uint64_t> c) : c_(c) { trim(); }

    static FpPoly constant(std::uint64_t a) { return FpPoly(std::vector<std::uint64_t>{a}); }
    static FpPoly monomial(std::size_t deg, std::uint64_t a = 1) {
        std::vector<std::uint64_t> c(deg + 1, 0);
        c[deg] = a;
        return FpPoly(std::move(c));
    }

    // -1 for the zero polynomial.
    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    bool is_one() const { return c_.size() == 1 && c_[0] == 1; }
    std::uint64_t lead() const { return c_.empty() ? 0 : c_.back(); }
    std::uint64_t operator[](std::size_t i) const { return i < c_.size() ? c_[i] : 0; }
    const std::vector<std::uint64_t>& coeffs() const { return c_; }

    friend bool operator==(const FpPoly&, const FpPoly&) = default;
    friend auto operator<=>(const FpPoly& a, const FpPoly& b) {
        if (a.c_.size() != b.c_.size()) return a.c_.size() <=> b.c_.size();
        return std::lexicographical_compare_three_way(a.c_.rbegin(), a.c_.rend(), b.c_.rbegin(), b.c_.rend());
    }

private:
    void trim() {
        while (!c_.empty() && c_.back() == 0) c_.pop_back();
    }
    std::vector<std::uint64_t> c_;
};

namespace poly {

inline FpPoly reduce(const PrimeField& F, const std::vector<BigInt>& integer_coeffs) {
    std::vector<std::uint64_t> c;
    c.reserve(integer_coeffs.size());
    for (const auto& a : integer_coeffs) c.push_back(F.from_big(a));
    return FpPoly(std::move(c));
}

inline FpPoly add(const PrimeField& F, const FpPoly& a, const FpPoly& b) {
    std::vector<std::uint64_t> c(std::max(a.coeffs().size(), b.coeffs().size()));
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = F.add(a[i], b[i]);
    return FpPoly(std::move(c));
}

inline FpPoly sub(const PrimeField& F, const FpPoly& a, const FpPoly& b) {
    std::vector<std::uint64_t> c(std::max(a.coeffs().size(), b.coeffs().size()));
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = F.sub(a[i], b[i]);
    return FpPoly(std::move(c));
}

inline FpPoly neg(const PrimeField& F, const FpPoly& a) { return sub(F, FpPoly{}, a); }

inline FpPoly scale(const PrimeField& F, const FpPoly& a, std::uint64_t s) {
    std::vector<std::uint64_t> c(a.coeffs());
    for (auto& x : c) x = F.mul(x, s);
    return FpPoly(std::move(c));
}

inline FpPoly mul(const PrimeField& F, const FpPoly& a, const FpPoly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    const auto& x = a.coeffs();
    const auto& y = b.coeffs();
    std::vector<std::uint64_t> c(x.size() + y.size() - 1, 0);
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] == 0) continue;
        for (std::size_t j = 0; j < y.size(); ++j) c[i + j] = (c[i + j] + x[i] * y[j]) % F.q();
    }
    return FpPoly(std::move(c));
}

struct DivMod {
    FpPoly quotient;
    FpPoly remainder;
};

inline DivMod divmod(const PrimeField& F, const FpPoly& a, const FpPoly& b) {
    if (b.is_zero()) throw Error("polynomial division by zero");
    std::vector<std::uint64_t> r(a.coeffs());
    const int db = b.degree();
    if (a.degree() < db) return {{}, a};
    std::vector<std::uint64_t> q(static_cast<std::size_t>(a.degree() - db + 1), 0);
    const std::uint64_t inv_lead = F.inv(b.lead());
    for (int i = a.degree(); i >= db; --i) {
        const std::uint64_t coef = F.mul(r[static_cast<std::size_t>(i)], inv_lead);
        if (coef == 0) continue;
        q[static_cast<std::size_t>(i - db)] = coef;
        for (int j = 0; j <= db; ++j) {
            auto& slot = r[static_cast<std::size_t>(i - db + j)];
            slot = F.sub(slot, F.mul(coef, b[static_cast<std::size_t>(j)]));
        }
    }
    return {FpPoly(std::move(q)), FpPoly(std::move(r))};
}

inline FpPoly mod(const PrimeField& F, const FpPoly& a, const FpPoly& b) { return divmod(F, a, b).remainder; }

// Exact division; throws if b does not divide a.
inline FpPoly exact_div(const PrimeField& F, const FpPoly& a, const FpPoly& b) {
    auto qr = divmod(F, a, b);
    if (!qr.remainder.is_zero()) throw Error("internal: inexact polynomial division");
    return qr.quotient;
}

inline FpPoly monic(const PrimeField& F, const FpPoly& a) {
    if (a.is_zero()) return a;
    return scale(F, a, F.inv(a.lead()));
}

inline FpPoly derivative(const PrimeField& F, const FpPoly& a) {
    if (a.degree() < 1) return {};
    std::vector<std::uint64_t> c(static_cast<std::size_t>(a.degree()));
    for (std::size_t i = 1; i < a.coeffs().size(); ++i) c[i - 1] = F.mul(a[i], F.from_index(i));
    return FpPoly(std::move(c));
}

inline std::uint64_t eval(const PrimeField& F, const FpPoly& a, std::uint64_t x) {
    std::uint64_t acc = 0;
    for (std::size_t i = a.coeffs().size(); i-- > 0;) acc = F.add(F.mul(acc, x), a[i]);
    return acc;
}

// Monic gcd.
inline FpPoly gcd(const PrimeField& F, FpPoly a, FpPoly b) {
    while (!b.is_zero()) {
        FpPoly r = mod(F, a, b);
        a = std::move(b);
        b = std::move(r);
    }
    return monic(F, a);
}

struct ExtendedGcd {
    FpPoly g;  // monic
    FpPoly s;
    FpPoly t;  // g = s*a + t*b
};

inline ExtendedGcd xgcd(const PrimeField& F, const FpPoly& a, const FpPoly& b) {
    FpPoly r0 = a, r1 = b;
    FpPoly s0 = FpPoly::constant(1), s1{};
    FpPoly t0{}, t1 = FpPoly::constant(1);
    while (!r1.is_zero()) {
        auto qr = divmod(F, r0, r1);
        FpPoly s2 = sub(F, s0, mul(F, qr.quotient, s1));
        FpPoly t2 = sub(F, t0, mul(F, qr.quotient, t1));
        r0 = std::move(r1);
        r1 = std::move(qr.remainder);
        s0 = std::move(s1);
        s1 = std::move(s2);
        t0 = std::move(t1);
        t1 = std::move(t2);
    }
    if (r0.is_zero()) return {{}, {}, {}};
    const std::uint64_t k = F.inv(r0.lead());
    return {scale(F, r0, k), scale(F, s0, k), scale(F, t0, k)};
}

inline FpPoly powmod(const PrimeField& F, FpPoly base, BigInt e, const FpPoly& m) {
    FpPoly result = mod(F, FpPoly::constant(1), m);
    base = mod(F, base, m);
    while (e > 0) {
        if (mpz_odd_p(e.get_mpz_t())) result = mod(F, mul(F, result, base), m);
        e >>= 1;
        if (e > 0) base = mod(F, mul(F, base, base), m);
    }
    return result;
}

// Ben-Or: f of degree k is irreducible iff gcd(f, x^(q^i) - x) = 1 for i <= k/2.
inline bool is_irreducible(const PrimeField& F, const FpPoly& f) {
    const int k = f.degree();
    if (k < 1) return false;
    if (k == 1) return true;
    const FpPoly x = FpPoly::monomial(1);
    FpPoly xq = x;
    for (int i = 1; i <= k / 2; ++i) {
        xq = powmod(F, xq, BigInt(F.q()), f);
        if (!gcd(F, f, sub(F, xq, x)).is_one()) return false;
    }
    return true;
}

// Squarefree test via gcd(f, f') (for f of degree >= 1).
inline bool is_squarefree(const PrimeField& F, const FpPoly& f) {
    FpPoly d = derivative(F, f);
    if (d.is_zero()) return f.degree() <= 0;
    return gcd(F, f, d).is_one();
}

}  // namespace poly

// F_{q^k} = F_q[t] / (modulus). Elements are FpPoly of degree < k.
class ExtField {
public:
    using Element = FpPoly;

    // The modulus is the lexicographically smallest monic irreducible of
    // degree k, comparing (c_0, c_1, ..., c_{k-1}) with c_0 most significant.
    ExtField(std::uint64_t q, unsigned k) : base_(q), k_(k) {
        if (q % 2 == 0) throw Error("extension fields require an odd characteristic");
        if (k < 1 || k > 6) throw Error("extension degree must lie in [1, 6]");
        std::uint64_t count = 1;
        for (unsigned i = 0; i < k; ++i) count *= q;
        for (std::uint64_t idx = 0; idx < count; ++idx) {
            std::vector<std::uint64_t> c(k + 1, 0);
            std::uint64_t rest = idx;
            for (unsigned j = k; j-- > 0;) {
                c[j] = rest % q;
                rest /= q;
            }
            c[k] = 1;
            FpPoly f(std::move(c));
            if (poly::is_irreducible(base_, f)) {
                modulus_ = std::move(f);
                break;
            }
        }
        if (modulus_.degree() != static_cast<int>(k)) throw Error("internal: no irreducible polynomial found");
        init_order();
    }

    // Any monic irreducible modulus (used for residue fields F_q[x]/(w)).
    ExtField(const PrimeField& base, FpPoly modulus) : base_(base), k_(static_cast<unsigned>(modulus.degree())), modulus_(std::move(modulus)) {
        if (modulus_.degree() < 1 || modulus_.lead() != 1 || !poly::is_irreducible(base_, modulus_))
            throw Error("extension modulus must be monic irreducible");
        init_order();
    }

    const PrimeField& base() const { return base_; }
    unsigned degree() const { return k_; }
    const FpPoly& modulus() const { return modulus_; }
    std::uint64_t order() const { return order_; }

    Element zero() const { return {}; }
    Element one() const { return FpPoly::constant(1); }
    Element from_base(std::uint64_t a) const { return FpPoly::constant(a % base_.q()); }
    // Bijection [0, q^k) -> field, base-q digits as coefficients.
    Element from_index(std::uint64_t i) const {
        std::vector<std::uint64_t> c(k_);
        for (unsigned j = 0; j < k_; ++j) {
            c[j] = i % base_.q();
            i /= base_.q();
        }
        return FpPoly(std::move(c));
    }
    Element generator_t() const { return poly::mod(base_, FpPoly::monomial(1), modulus_); }

    Element add(const Element& a, const Element& b) const { return poly::add(base_, a, b); }
    Element sub(const Element& a, const Element& b) const { return poly::sub(base_, a, b); }
    Element neg(const Element& a) const { return poly::neg(base_, a); }
    Element mul(const Element& a, const Element& b) const { return poly::mod(base_, poly::mul(base_, a, b), modulus_); }
    Element inv(const Element& a) const {
        if (a.is_zero()) throw Error("division by zero in extension field");
        auto eg = poly::xgcd(base_, a, modulus_);
        return poly::mod(base_, eg.s, modulus_);
    }
    Element pow(Element a, std::uint64_t e) const {
        Element r = one();
        while (e) {
            if (e & 1) r = mul(r, a);
            e >>= 1;
            if (e) a = mul(a, a);
        }
        return r;
    }
    Element frobenius(const Element& a) const { return pow(a, base_.q()); }
    bool is_zero(const Element& a) const { return a.is_zero(); }
    bool equal(const Element& a, const Element& b) const { return a == b; }

    // Horner evaluation of an F_q polynomial at an element.
    Element eval(const FpPoly& f, const Element& x) const {
        Element acc;
        for (std::size_t i = f.coeffs().size(); i-- > 0;) acc = add(mul(acc, x), from_base(f[i]));
        return acc;
    }

private:
    void init_order() {
        order_ = 1;
        for (unsigned i = 0; i < k_; ++i) order_ *= base_.q();
    }

    PrimeField base_;
    unsigned k_;
    FpPoly modulus_;
    std::uint64_t order_ = 0;
};

// Quadratic character on any odd-order field: 0, 1 or -1.
template <class Field>
int quadratic_character(const Field& F, const typename Field::Element& a) {
    if (F.is_zero(a)) return 0;
    return F.equal(F.pow(a, (F.order() - 1) / 2), F.one()) ? 1 : -1;
}

// Tonelli-Shanks over any finite field of odd order.
template <class Field>
std::optional<typename Field::Element> field_sqrt(const Field& F, const typename Field::Element& a) {
    using E = typename Field::Element;
    if (F.is_zero(a)) return F.zero();
    if (quadratic_character(F, a) != 1) return std::nullopt;
    std::uint64_t q = F.order() - 1;
    unsigned s = 0;
    while (q % 2 == 0) {
        q /= 2;
        ++s;
    }
    E z = F.one();
    for (std::uint64_t i = 2; i < F.order(); ++i) {
        z = F.from_index(i);
        if (quadratic_character(F, z) == -1) break;
    }
    E c = F.pow(z, q);
    E x = F.pow(a, (q + 1) / 2);
    E t = F.pow(a, q);
    unsigned m = s;
    while (!F.equal(t, F.one())) {
        unsigned i = 0;
        E t2 = t;
        while (!F.equal(t2, F.one())) {
            t2 = F.mul(t2, t2);
            ++i;
        }
        E b = c;
        for (unsigned j = 0; j + i + 1 < m; ++j) b = F.mul(b, b);
        x = F.mul(x, b);
        c = F.mul(b, b);
        t = F.mul(t, c);
        m = i;
    }
    return x;
}

// Square root in F_q; returns the smaller of the two roots.
inline std::optional<std::uint64_t> sqrt_mod(std::int64_t v, std::uint64_t q) {
    PrimeField F(q);
    auto r = field_sqrt(F, F.from_int(v));
    if (!r) return std::nullopt;
    return std::min(*r, F.neg(*r));
}

// Decides whether v = u * y^e has a solution y in Z/m, for m a prime power.
inline bool power_residue_solvable(std::int64_t v, std::int64_t u, std::uint64_t m, unsigned e) {
    auto pp = as_prime_power(m);
    if (!pp) throw Error("modulus must be a prime or prime power, got " + std::to_string(m));
    const auto mm = static_cast<std::int64_t>(m);
    const std::uint64_t vr = static_cast<std::uint64_t>(mod_reduce(v, mm));
    const std::uint64_t ur = static_cast<std::uint64_t>(mod_reduce(u, mm));
    if (pp->exponent == 1) {
        if (vr == 0) return true;  // y = 0
        if (ur == 0) return false;
        const std::uint64_t g = std::gcd(static_cast<std::uint64_t>(e), m - 1);
        const std::uint64_t ratio = mul_mod(vr, inv_mod(ur, m), m);
        return pow_mod(ratio, (m - 1) / g, m) == 1;
    }
    for (std::uint64_t y = 0; y < m; ++y)
        if (mul_mod(ur, pow_mod(y, e, m), m) == vr) return true;
    return false;
}

}  // namespace arboreal::finitefield
