#pragma once

// Iteration of unicritical maps x -> (x - gamma)^d + c over exact rings and
// residue rings, with exact tail/cycle detection.

#include "arboreal/common.hpp"
#include "arboreal/cyclotomic.hpp"

#include <algorithm>
#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

namespace arboreal::dynamics {

using cyclotomic::CycInt;
using cyclotomic::ResiduePrime;

inline BigInt power(const BigInt& x, unsigned d) {
    BigInt r;
    mpz_pow_ui(r.get_mpz_t(), x.get_mpz_t(), d);
    return r;
}

inline CycInt power(const CycInt& x, unsigned d) { return cyclotomic::pow(x, d); }

template <class Ring>
struct UnicriticalMap {
    unsigned degree = 2;
    Ring gamma;
    Ring c;

    Ring operator()(const Ring& x) const { return power(x - gamma, degree) + c; }
};

using IntegerMap = UnicriticalMap<BigInt>;
using CyclotomicMap = UnicriticalMap<CycInt>;

// (x - 1)^p + 2 - zeta_p
inline CyclotomicMap unicritical_phi(const cyclotomic::Context& ctx) {
    return {ctx.p(), CycInt::integer(ctx, 1), CycInt(ctx, {2, -1})};
}

// x^p + 1 - zeta_p
inline CyclotomicMap unicritical_delta(const cyclotomic::Context& ctx) {
    return {ctx.p(), CycInt(ctx), CycInt(ctx, {1, -1})};
}

// (x - zeta^i)^p + 1 + zeta^i - zeta
inline CyclotomicMap conjugated_family(const cyclotomic::Context& ctx, long i) {
    CycInt zi = CycInt::zeta_power(ctx, i);
    return {ctx.p(), zi, CycInt::integer(ctx, 1) + zi - CycInt::zeta(ctx)};
}

// (x - p)^2 + 2p - p^2
inline IntegerMap quadratic_family(const BigInt& p) { return {2, p, 2 * p - p * p}; }

// (x - p)^2 - p^2 - 1
inline IntegerMap shifted_quadratic_family(const BigInt& p) { return {2, p, -p * p - 1}; }

template <class Ring>
Ring iterate_exact(const UnicriticalMap<Ring>& map, Ring x, unsigned n) {
    for (unsigned i = 0; i < n; ++i) x = map(x);
    return x;
}

// Values x0, map(x0), ..., map^n(x0).
template <class Ring>
std::vector<Ring> orbit_prefix(const UnicriticalMap<Ring>& map, Ring x, unsigned n) {
    std::vector<Ring> out;
    out.reserve(n + 1);
    out.push_back(x);
    for (unsigned i = 0; i < n; ++i) out.push_back(map(out.back()));
    return out;
}

// The same map with gamma and c reduced into Z/modulus.
struct ResidueMap {
    std::uint64_t modulus = 2;
    unsigned degree = 2;
    std::uint64_t gamma = 0;
    std::uint64_t c = 0;

    std::uint64_t operator()(std::uint64_t x) const {
        std::uint64_t t = (x % modulus + modulus - gamma) % modulus;
        return (pow_mod(t, degree, modulus) + c) % modulus;
    }
};

inline ResidueMap reduce_map(const IntegerMap& map, std::uint64_t modulus) {
    if (modulus < 2) throw Error("modulus must be at least 2");
    return {modulus, map.degree, mod_reduce(map.gamma, modulus), mod_reduce(map.c, modulus)};
}

inline ResidueMap reduce_map(const CyclotomicMap& map, const ResiduePrime& q) {
    return {q.ell, map.degree, cyclotomic::reduce(map.gamma, q), cyclotomic::reduce(map.c, q)};
}

struct OrbitTrace {
    std::uint64_t modulus = 0;
    std::size_t tail = 0;
    std::vector<std::uint64_t> cycle;
    // Every value visited before the first repeat: indices 0 .. tail + |cycle| - 1.
    std::vector<std::uint64_t> raw_prefix;

    std::uint64_t value_at(std::size_t n) const {
        if (n < raw_prefix.size()) return raw_prefix[n];
        return cycle[(n - tail) % cycle.size()];
    }

    // Distinct values taken at indices n >= from.
    std::vector<std::uint64_t> values_from(std::size_t from) const {
        std::vector<std::uint64_t> out;
        for (std::size_t n = from; n < tail; ++n) out.push_back(raw_prefix[n]);
        for (auto v : cycle)
            if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
        return out;
    }

    bool stabilized_by(std::size_t n) const { return tail <= n; }
};

inline OrbitTrace trace_orbit(const ResidueMap& map, std::uint64_t x0) {
    OrbitTrace trace;
    trace.modulus = map.modulus;
    std::unordered_map<std::uint64_t, std::size_t> seen;
    std::uint64_t x = x0 % map.modulus;
    while (!seen.contains(x)) {
        seen.emplace(x, trace.raw_prefix.size());
        trace.raw_prefix.push_back(x);
        x = map(x);
    }
    trace.tail = seen.at(x);
    trace.cycle.assign(trace.raw_prefix.begin() + static_cast<std::ptrdiff_t>(trace.tail),
                       trace.raw_prefix.end());
    return trace;
}

inline OrbitTrace orbit_mod(const IntegerMap& map, const BigInt& x0, std::uint64_t modulus) {
    return trace_orbit(reduce_map(map, modulus), mod_reduce(x0, modulus));
}

inline OrbitTrace orbit_mod(const CyclotomicMap& map, const CycInt& x0, const ResiduePrime& q) {
    return trace_orbit(reduce_map(map, q), cyclotomic::reduce(x0, q));
}

// Exact forward orbit of x0, stopping at the first repeated value. Returns
// nullopt when no repeat occurs within max_steps iterations.
template <class Ring>
std::optional<std::vector<Ring>> finite_orbit(const UnicriticalMap<Ring>& map, Ring x0, unsigned max_steps) {
    std::vector<Ring> orbit{x0};
    for (unsigned i = 0; i < max_steps; ++i) {
        Ring next = map(orbit.back());
        if (std::find(orbit.begin(), orbit.end(), next) != orbit.end()) return orbit;
        orbit.push_back(std::move(next));
    }
    return std::nullopt;
}

namespace detail {
template <class Ring>
void check_forward_orbit(const UnicriticalMap<Ring>& map, const std::vector<Ring>& orbit0, const Ring& zero) {
    if (orbit0.empty()) throw Error("orbit of 0 must be nonempty");
    auto contains = [&](const Ring& v) { return std::find(orbit0.begin(), orbit0.end(), v) != orbit0.end(); };
    if (!contains(map(zero))) throw Error("supplied orbit does not contain the image of 0");
    for (const auto& v : orbit0)
        if (!contains(map(v))) throw Error("supplied orbit of 0 is not forward invariant");
}
}  // namespace detail

// True iff q divides no element of the (finite) forward orbit of 0; then any
// q dividing map^n(gamma) is a primitive prime divisor.
inline bool primitive_prime_filter(const IntegerMap& map, const std::vector<BigInt>& orbit0, const BigInt& q) {
    detail::check_forward_orbit(map, orbit0, BigInt(0));
    for (const auto& v : orbit0)
        if (mpz_divisible_p(v.get_mpz_t(), q.get_mpz_t())) return false;
    return true;
}

inline bool primitive_prime_filter(const CyclotomicMap& map, const std::vector<CycInt>& orbit0, const ResiduePrime& q) {
    detail::check_forward_orbit(map, orbit0, CycInt(q.ctx));
    for (const auto& v : orbit0)
        if (cyclotomic::reduce(v, q) == 0) return false;
    return true;
}

}  // namespace arboreal::dynamics
