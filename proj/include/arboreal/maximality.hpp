#pragma once

// Maximality of every stage of the tower for phi_p = (x - 1)^p + 2 - zeta_p:
// p-th power tests on norms for small n, then elimination of unit exponent
// tuples (n_0, ..., n_t) in phi_p^n(1) = zeta^n_0 u_1^n_1 ... u_t^n_t y^p
// by residue primes where the critical orbit has stabilised.

#include "arboreal/common.hpp"
#include "arboreal/cyclotomic.hpp"
#include "arboreal/dynamics.hpp"
#include "arboreal/eisenstein.hpp"
#include "arboreal/finitefield.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace arboreal::maximality {

using cyclotomic::Context;
using cyclotomic::CycInt;
using cyclotomic::ResiduePrime;

struct UnitBasis {
    Context ctx;
    CycInt torsion_gen;
    std::vector<CycInt> free_gens;

    UnitBasis(Context c, std::vector<CycInt> gens) : ctx(c), torsion_gen(CycInt::zeta(c)), free_gens(std::move(gens)) {
        for (const auto& u : free_gens)
            if (abs(cyclotomic::norm(u)) != 1) throw Error("unit basis element is not a unit: " + u.to_string());
    }

    std::size_t rank() const { return free_gens.size(); }
    // zeta first, then the free generators.
    std::vector<CycInt> all() const {
        std::vector<CycInt> out{torsion_gen};
        out.insert(out.end(), free_gens.begin(), free_gens.end());
        return out;
    }
};

inline std::optional<UnitBasis> default_unit_basis(unsigned p) {
    Context ctx(p);
    switch (p) {
        case 3: return UnitBasis(ctx, {});
        case 5: return UnitBasis(ctx, {CycInt(ctx, {1, 1})});
        case 7: return UnitBasis(ctx, {CycInt(ctx, {1, 1}), CycInt(ctx, {0, 1, 0, 0, 1})});
        default: return std::nullopt;
    }
}

// Generator a + b*zeta with its residue prime.
struct PrimeSpec {
    long a = 0;
    long b = 0;
};

inline std::vector<PrimeSpec> default_prime_list(unsigned p) {
    switch (p) {
        case 3: return {{2, -1}, {3, 1}};
        case 5: return {{2, -1}, {2, 1}, {3, 1}};
        case 7: return {{2, -1}, {2, 1}, {3, 1}, {2, 3}};
        default: return {};
    }
}

// Generators a + b*zeta with |a|, |b| <= bound whose norm is a prime splitting
// completely (ell = 1 mod p), ordered by (ell, a, b); one generator per ell.
inline std::vector<PrimeSpec> search_prime_list(unsigned p, long bound = 5) {
    Context ctx(p);
    std::map<std::uint64_t, PrimeSpec> by_ell;
    for (long a = -bound; a <= bound; ++a)
        for (long b = -bound; b <= bound; ++b) {
            if (b == 0) continue;
            const BigInt n = abs(cyclotomic::norm(CycInt(ctx, {a, b})));
            if (!is_prime(n) || n % p != 1 || n > BigInt(1u << 31)) continue;
            by_ell.try_emplace(n.get_ui(), PrimeSpec{a, b});
        }
    std::vector<PrimeSpec> out;
    for (const auto& [ell, spec] : by_ell) out.push_back(spec);
    return out;
}

inline ResiduePrime make_prime(const Context& ctx, const PrimeSpec& s) {
    return cyclotomic::residue_prime(ctx, CycInt(ctx, {s.a, s.b}));
}

using Tuple = std::vector<unsigned>;

// phi_p^n(1) for n = 0..n_max.
inline std::vector<CycInt> critical_orbit(const Context& ctx, unsigned n_max) {
    return dynamics::orbit_prefix(dynamics::unicritical_phi(ctx), CycInt::integer(ctx, 1), n_max);
}

struct NormTest {
    unsigned n = 0;
    BigInt norm;
    bool is_power = false;
};

// True iff |N(phi_p^n(1))| is not a perfect p-th power.
inline bool norm_power_test(unsigned p, unsigned n) {
    if (n == 0) throw Error("norm test needs n >= 1");
    Context ctx(p);
    const CycInt x = dynamics::iterate_exact(dynamics::unicritical_phi(ctx), CycInt::integer(ctx, 1), n);
    return !is_perfect_power(cyclotomic::norm(x), p);
}

inline std::vector<NormTest> norm_tests(const Context& ctx, unsigned n_direct) {
    std::vector<NormTest> out;
    const auto orbit = critical_orbit(ctx, n_direct);
    for (unsigned n = 1; n <= n_direct; ++n) {
        NormTest t;
        t.n = n;
        t.norm = cyclotomic::norm(orbit[n]);
        t.is_power = is_perfect_power(t.norm, ctx.p());
        out.push_back(std::move(t));
    }
    return out;
}

struct PrimeData {
    PrimeSpec spec;
    ResiduePrime prime;
    dynamics::OrbitTrace trace;
    std::vector<std::uint64_t> values;       // orbit values at indices n >= n_min
    std::vector<std::uint64_t> unit_images;  // zeta, u_1, ..., u_t reduced
};

inline PrimeData prepare_prime(const Context& ctx, const UnitBasis& basis, const PrimeSpec& spec, unsigned n_min) {
    PrimeData d{spec, make_prime(ctx, spec), {}, {}, {}};
    d.trace = dynamics::orbit_mod(dynamics::unicritical_phi(ctx), CycInt::integer(ctx, 1), d.prime);
    d.values = d.trace.values_from(n_min);
    for (const auto& u : basis.all()) d.unit_images.push_back(cyclotomic::reduce(u, d.prime));
    return d;
}

inline std::uint64_t unit_image(const PrimeData& d, const Tuple& t) {
    std::uint64_t acc = 1;
    for (std::size_t i = 0; i < t.size(); ++i) acc = mul_mod(acc, pow_mod(d.unit_images[i], t[i], d.prime.ell), d.prime.ell);
    return acc;
}

// Some reachable orbit value v admits v = u * y^p in F_ell.
inline bool tuple_survives(const PrimeData& d, const Tuple& t, unsigned p) {
    const auto u = static_cast<std::int64_t>(unit_image(d, t));
    for (auto v : d.values)
        if (finitefield::power_residue_solvable(static_cast<std::int64_t>(v), u, d.prime.ell, p)) return true;
    return false;
}

struct Elimination {
    Tuple tuple;
    std::size_t prime_index = 0;
    PrimeSpec prime;
    std::uint64_t ell = 0;
    std::size_t stabilization_n = 0;
    std::vector<std::uint64_t> cycle;
    std::vector<std::uint64_t> values;
    std::uint64_t unit_image = 0;
    bool solvable = false;
};

struct Stage {
    PrimeSpec prime;
    std::uint64_t ell = 0;
    std::uint64_t root = 0;
    std::size_t tail = 0;
    std::vector<std::uint64_t> cycle;
    std::vector<Tuple> survivors;  // after this prime, lexicographic
};

enum class Verdict { surjective, inconclusive };

inline std::string to_string(Verdict v) { return v == Verdict::surjective ? "surjective" : "inconclusive"; }

struct MaximalityCertificate {
    unsigned p = 0;
    unsigned n_direct = 0;
    unsigned n_min = 0;
    std::vector<NormTest> norm_tests;
    std::vector<Stage> stages;
    std::vector<Elimination> eliminations;  // lexicographic by tuple
    std::vector<Tuple> survivors;
    bool stabilization_covered = true;
    bool eisenstein_reference = false;  // phi_p Eisenstein at (1 - zeta_p)
    Verdict verdict = Verdict::inconclusive;
};

inline std::vector<Tuple> all_tuples(unsigned p, std::size_t length) {
    std::vector<Tuple> out;
    Tuple t(length, 0);
    while (true) {
        out.push_back(t);
        std::size_t i = length;
        while (i > 0) {
            --i;
            if (++t[i] < p) break;
            t[i] = 0;
            if (i == 0) return out;
        }
        if (length == 0) return out;
    }
}

inline MaximalityCertificate tuple_elimination(unsigned p, const UnitBasis& basis, const std::vector<PrimeSpec>& primes,
                                               unsigned n_min) {
    Context ctx(p);
    if (!(basis.ctx == ctx)) throw Error("mixed cyclotomic contexts");
    MaximalityCertificate cert;
    cert.p = p;
    cert.n_min = n_min;
    cert.n_direct = n_min > 0 ? n_min - 1 : 0;
    std::vector<Tuple> alive = all_tuples(p, basis.rank() + 1);
    std::map<Tuple, Elimination> eliminated;
    for (std::size_t k = 0; k < primes.size(); ++k) {
        const PrimeData d = prepare_prime(ctx, basis, primes[k], n_min);
        if (d.trace.tail > n_min) cert.stabilization_covered = false;
        std::vector<Tuple> next;
        for (const auto& t : alive) {
            if (tuple_survives(d, t, p)) {
                next.push_back(t);
                continue;
            }
            eliminated.emplace(t, Elimination{t, k, d.spec, d.prime.ell, d.trace.tail, d.trace.cycle, d.values,
                                              unit_image(d, t), false});
        }
        alive = std::move(next);
        cert.stages.push_back({d.spec, d.prime.ell, d.prime.root, d.trace.tail, d.trace.cycle, alive});
    }
    for (auto& [t, e] : eliminated) cert.eliminations.push_back(std::move(e));
    cert.survivors = alive;
    cert.verdict = alive.empty() && cert.stabilization_covered ? Verdict::surjective : Verdict::inconclusive;
    return cert;
}

// Recomputes an elimination from scratch; true iff it reproduces the record.
inline bool replay(unsigned p, const UnitBasis& basis, const Elimination& e, unsigned n_min) {
    Context ctx(p);
    const PrimeData d = prepare_prime(ctx, basis, e.prime, n_min);
    return d.prime.ell == e.ell && d.trace.tail == e.stabilization_n && d.trace.cycle == e.cycle && d.values == e.values &&
           unit_image(d, e.tuple) == e.unit_image && tuple_survives(d, e.tuple, p) == e.solvable;
}

struct Config {
    unsigned n_direct = 7;
    std::optional<UnitBasis> basis;
    std::optional<std::vector<PrimeSpec>> primes;
};

inline MaximalityCertificate verify_unicritical(unsigned p, const Config& config = {}) {
    Context ctx(p);
    std::optional<UnitBasis> basis = config.basis ? config.basis : default_unit_basis(p);
    if (!basis) throw Error("no unit basis available for p = " + std::to_string(p) + "; supply one");
    std::vector<PrimeSpec> primes = config.primes ? *config.primes : default_prime_list(p);
    if (primes.empty()) primes = search_prime_list(p);
    if (config.n_direct == 0) throw Error("n_direct must be at least 1");

    MaximalityCertificate cert = tuple_elimination(p, *basis, primes, config.n_direct + 1);
    cert.n_direct = config.n_direct;
    cert.norm_tests = norm_tests(ctx, config.n_direct);
    cert.eisenstein_reference =
        eisenstein::eisenstein_check(eisenstein::expand_iterate(dynamics::unicritical_phi(ctx), ctx, 1), eisenstein::Mode::standard);
    const bool norms_ok = std::none_of(cert.norm_tests.begin(), cert.norm_tests.end(), [](const NormTest& t) { return t.is_power; });
    cert.verdict = norms_ok && cert.survivors.empty() && cert.stabilization_covered && cert.eisenstein_reference
                       ? Verdict::surjective
                       : Verdict::inconclusive;
    return cert;
}

}  // namespace arboreal::maximality
