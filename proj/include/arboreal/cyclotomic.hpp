#pragma once

// Exact arithmetic in Z[zeta_p] for odd primes p.
//
// Elements are stored in the power basis 1, zeta, ..., zeta^(p-2); every
// operation returns the canonical form, so equality is coefficientwise.

#include "arboreal/common.hpp"

#include <algorithm>
#include <compare>
#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace arboreal::cyclotomic {

class Context {
public:
    explicit Context(unsigned p) : p_(p) {
        if (p < 3 || !is_prime(static_cast<std::uint64_t>(p)))
            throw Error("cyclotomic conductor must be an odd prime, got " + std::to_string(p));
    }

    unsigned p() const { return p_; }
    unsigned dimension() const { return p_ - 1; }

    // (-1)^((p-1)/2) * p^(p-2)
    BigInt discriminant() const {
        BigInt d;
        mpz_ui_pow_ui(d.get_mpz_t(), p_, p_ - 2);
        if (((p_ - 1) / 2) % 2 == 1) d = -d;
        return d;
    }

    // Coefficients of Phi_p, low degree first (all ones).
    std::vector<BigInt> cyclotomic_polynomial() const { return std::vector<BigInt>(p_, BigInt(1)); }

    friend bool operator==(const Context&, const Context&) = default;

private:
    unsigned p_;
};

class CycInt {
public:
    explicit CycInt(Context ctx) : ctx_(ctx), coeffs_(ctx.dimension()) {}

    // Accepts any polynomial in zeta (low degree first) and reduces it.
    CycInt(Context ctx, std::span<const BigInt> poly) : CycInt(ctx) {
        std::vector<BigInt> folded(ctx.p());
        for (std::size_t i = 0; i < poly.size(); ++i) folded[i % ctx.p()] += poly[i];
        assign_folded(folded);
    }

    CycInt(Context ctx, std::initializer_list<long> poly) : CycInt(ctx) {
        std::vector<BigInt> folded(ctx.p());
        std::size_t i = 0;
        for (long c : poly) folded[i++ % ctx.p()] += c;
        assign_folded(folded);
    }

    static CycInt integer(Context ctx, const BigInt& m) {
        CycInt r(ctx);
        r.coeffs_[0] = m;
        return r;
    }

    // zeta^k for any integer k
    static CycInt zeta_power(Context ctx, long k) {
        std::vector<BigInt> folded(ctx.p());
        folded[static_cast<std::size_t>(mod_reduce(static_cast<std::int64_t>(k), ctx.p()))] = 1;
        CycInt r(ctx);
        r.assign_folded(folded);
        return r;
    }

    static CycInt zeta(Context ctx) { return zeta_power(ctx, 1); }

    const Context& context() const { return ctx_; }
    const std::vector<BigInt>& coeffs() const { return coeffs_; }

    bool is_zero() const {
        return std::all_of(coeffs_.begin(), coeffs_.end(), [](const BigInt& c) { return c == 0; });
    }

    bool is_rational() const {
        return std::all_of(coeffs_.begin() + 1, coeffs_.end(), [](const BigInt& c) { return c == 0; });
    }

    // Largest coefficient size in bits (0 for zero).
    std::size_t max_bits() const {
        std::size_t bits = 0;
        for (const auto& c : coeffs_)
            if (c != 0) bits = std::max(bits, mpz_sizeinbase(c.get_mpz_t(), 2));
        return bits;
    }

    CycInt& operator+=(const CycInt& o) {
        check_context(o);
        for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
        return *this;
    }

    CycInt& operator-=(const CycInt& o) {
        check_context(o);
        for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
        return *this;
    }

    CycInt& operator*=(const CycInt& o) {
        check_context(o);
        const unsigned p = ctx_.p();
        std::vector<BigInt> folded(p);
        BigInt term;
        for (std::size_t i = 0; i < coeffs_.size(); ++i) {
            if (coeffs_[i] == 0) continue;
            for (std::size_t j = 0; j < o.coeffs_.size(); ++j) {
                if (o.coeffs_[j] == 0) continue;
                mpz_mul(term.get_mpz_t(), coeffs_[i].get_mpz_t(), o.coeffs_[j].get_mpz_t());
                folded[(i + j) % p] += term;
            }
        }
        assign_folded(folded);
        return *this;
    }

    friend CycInt operator+(CycInt a, const CycInt& b) { return a += b; }
    friend CycInt operator-(CycInt a, const CycInt& b) { return a -= b; }
    friend CycInt operator*(CycInt a, const CycInt& b) { return a *= b; }

    friend CycInt operator-(CycInt a) {
        for (auto& c : a.coeffs_) c = -c;
        return a;
    }

    friend bool operator==(const CycInt& a, const CycInt& b) {
        return a.ctx_ == b.ctx_ && a.coeffs_ == b.coeffs_;
    }

    // Image under the automorphism zeta -> zeta^k, gcd(k, p) = 1.
    CycInt conjugate(unsigned k) const {
        const unsigned p = ctx_.p();
        if (k % p == 0) throw Error("conjugate exponent must be prime to p");
        std::vector<BigInt> folded(p);
        for (std::size_t i = 0; i < coeffs_.size(); ++i)
            folded[(i * k) % p] += coeffs_[i];
        CycInt r(ctx_);
        r.assign_folded(folded);
        return r;
    }

    std::string to_string() const {
        std::string s = "[";
        for (std::size_t i = 0; i < coeffs_.size(); ++i) {
            if (i) s += ", ";
            s += coeffs_[i].get_str();
        }
        return s + "]";
    }

    friend std::ostream& operator<<(std::ostream& os, const CycInt& a) { return os << a.to_string(); }

private:
    void check_context(const CycInt& o) const {
        if (!(ctx_ == o.ctx_)) throw Error("mixed cyclotomic contexts");
    }

    // Input indexed 0..p-1 modulo zeta^p = 1; eliminates zeta^(p-1).
    void assign_folded(std::vector<BigInt>& folded) {
        const unsigned p = ctx_.p();
        const BigInt top = folded[p - 1];
        for (unsigned i = 0; i + 1 < p; ++i) {
            if (top != 0) folded[i] -= top;
            coeffs_[i].swap(folded[i]);
        }
    }

    Context ctx_;
    std::vector<BigInt> coeffs_;
};

inline CycInt pow(CycInt base, unsigned long e) {
    CycInt result = CycInt::integer(base.context(), 1);
    while (e) {
        if (e & 1) result *= base;
        e >>= 1;
        if (e) base *= base;
    }
    return result;
}

// Absolute norm N_{Q(zeta_p)/Q}(a) = Res(Phi_p, a) = prod_k sigma_k(a).
inline BigInt norm(const CycInt& a) {
    const unsigned p = a.context().p();
    std::vector<CycInt> layer;
    layer.reserve(p - 1);
    for (unsigned k = 1; k < p; ++k) layer.push_back(a.conjugate(k));
    while (layer.size() > 1) {
        std::vector<CycInt> next;
        for (std::size_t i = 0; i + 1 < layer.size(); i += 2) next.push_back(layer[i] * layer[i + 1]);
        if (layer.size() % 2) next.push_back(layer.back());
        layer = std::move(next);
    }
    if (!layer.front().is_rational()) throw Error("internal: conjugate product is not rational");
    return layer.front().coeffs()[0];
}

struct Valuation {
    long value = 0;
    bool infinite = false;

    static Valuation infinity() { return {0, true}; }
    static Valuation finite(long v) { return {v, false}; }

    friend bool operator==(const Valuation&, const Valuation&) = default;
    friend Valuation operator+(Valuation a, Valuation b) {
        if (a.infinite || b.infinite) return infinity();
        return finite(a.value + b.value);
    }
    bool at_least(long v) const { return infinite || value >= v; }
    bool exceeds(long v) const { return infinite || value > v; }
    std::string to_string() const { return infinite ? "inf" : std::to_string(value); }
};

// Valuation at the unique prime (1 - zeta_p) above p, read off from v_p(N(a)).
inline Valuation ramified_valuation(const CycInt& a) {
    if (a.is_zero()) return Valuation::infinity();
    BigInt n = abs(norm(a));
    BigInt rest;
    BigInt prime(a.context().p());
    long v = static_cast<long>(mpz_remove(rest.get_mpz_t(), n.get_mpz_t(), prime.get_mpz_t()));
    return Valuation::finite(v);
}

// A degree-one (or the ramified) prime of Z[zeta_p], with reduction zeta -> root.
struct ResiduePrime {
    Context ctx;
    std::uint64_t ell = 0;
    std::uint64_t root = 0;
    std::optional<CycInt> generator;

    std::uint64_t residue_size() const { return ell; }
    bool ramified() const { return ell == ctx.p(); }
};

inline std::uint64_t reduce(const CycInt& a, const ResiduePrime& q) {
    if (!(a.context() == q.ctx)) throw Error("mixed cyclotomic contexts");
    std::uint64_t acc = 0;
    const auto& c = a.coeffs();
    for (std::size_t i = c.size(); i-- > 0;)
        acc = (mul_mod(acc, q.root, q.ell) + mod_reduce(c[i], q.ell)) % q.ell;
    return acc;
}

inline ResiduePrime residue_prime(const Context& ctx, const CycInt& generator) {
    if (!(generator.context() == ctx)) throw Error("mixed cyclotomic contexts");
    const BigInt n = abs(norm(generator));
    if (n == 1) throw Error("unit generates no prime");
    if (!is_prime(n)) throw Error("not a degree-one prime: |norm| = " + n.get_str());
    if (!n.fits_ulong_p() || n > BigInt(1u << 31))
        throw Error("residue field too large: " + n.get_str());
    ResiduePrime q{ctx, n.get_ui(), 0, generator};
    for (std::uint64_t t = 0; t < q.ell; ++t) {
        q.root = t;
        std::uint64_t phi = 0;
        for (unsigned i = 0; i < ctx.p(); ++i) phi = (mul_mod(phi, t, q.ell) + 1) % q.ell;
        if (phi == 0 && reduce(generator, q) == 0) return q;
    }
    throw Error("not a degree-one prime: no root annihilates the generator");
}

inline ResiduePrime ramified_prime(const Context& ctx) {
    return residue_prime(ctx, CycInt(ctx, {1, -1}));
}

}  // namespace arboreal::cyclotomic
