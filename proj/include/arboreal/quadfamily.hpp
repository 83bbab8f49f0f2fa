#pragma once

// The quadratic family phi_p(x) = (x - p)^2 + 2p - p^2 and its shifted
// relative f_p(x) = (x - p)^2 - p^2 - 1: exact square tests on small iterates,
// congruence obstructions to phi_p^n(p) = p * y^2, and the sweep over p.

#include "arboreal/common.hpp"
#include "arboreal/dynamics.hpp"
#include "arboreal/hyperelliptic.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <vector>

namespace arboreal::quadfamily {

// ---------------------------------------------------------------- exact tests

struct DirectCheck {
    unsigned n = 0;
    BigInt value;
    BigInt quotient;  // value / divisor when exact, else 0
    bool is_square = false;
};

// value = divisor * y^2 with value > 0?
inline DirectCheck square_check(unsigned n, const BigInt& value, const BigInt& divisor) {
    DirectCheck c{n, value, 0, false};
    if (value > 0 && mpz_divisible_p(value.get_mpz_t(), divisor.get_mpz_t())) {
        c.quotient = value / divisor;
        c.is_square = is_perfect_square(c.quotient);
    }
    return c;
}

inline DirectCheck direct_check(const BigInt& p, unsigned n) {
    return square_check(n, dynamics::iterate_exact(dynamics::quadratic_family(p), p, n), p);
}

// True when phi_p^n(p) = p * y^2 is impossible.
inline bool square_refinement_test(const BigInt& p, unsigned n) {
    if (n < 2) throw Error("square refinement test needs n >= 2");
    return !direct_check(p, n).is_square;
}

// ---------------------------------------------------------------- symbolic identities

using IntPoly = std::vector<BigInt>;  // low degree first

namespace detail {

inline IntPoly trim(IntPoly a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
    return a;
}

inline IntPoly add(const IntPoly& a, const IntPoly& b) {
    IntPoly c(std::max(a.size(), b.size()));
    for (std::size_t i = 0; i < a.size(); ++i) c[i] += a[i];
    for (std::size_t i = 0; i < b.size(); ++i) c[i] += b[i];
    return trim(c);
}

inline IntPoly sub(const IntPoly& a, const IntPoly& b) {
    IntPoly c(std::max(a.size(), b.size()));
    for (std::size_t i = 0; i < a.size(); ++i) c[i] += a[i];
    for (std::size_t i = 0; i < b.size(); ++i) c[i] -= b[i];
    return trim(c);
}

inline IntPoly mul(const IntPoly& a, const IntPoly& b) {
    if (a.empty() || b.empty()) return {};
    IntPoly c(a.size() + b.size() - 1);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
    return trim(c);
}

// Iterate x -> (x - P)^2 + c(P) with x0 = P, in Z[P].
inline IntPoly symbolic_iterate(const IntPoly& c, unsigned n) {
    const IntPoly P{0, 1};
    IntPoly x = P;
    for (unsigned k = 0; k < n; ++k) {
        IntPoly t = sub(x, P);
        x = add(mul(t, t), c);
    }
    return x;
}

}  // namespace detail

inline IntPoly phi_constant() { return {0, 2, -1}; }       // 2P - P^2
inline IntPoly f_constant() { return {-1, 0, -1}; }        // -P^2 - 1

struct CorrespondenceReport {
    unsigned n = 0;
    bool symbolic = false;
    std::size_t primes_checked = 0;
    bool numeric = false;
    bool ok() const { return symbolic && numeric; }
};

// phi_P^n(P) = P * F_n(P) with F_2 the cubic of C1 and F_3 the septic of C2;
// symbolic identity in Z[P] plus numeric agreement at the first 50 odd primes.
inline CorrespondenceReport curve_correspondence_check(unsigned n) {
    if (n != 2 && n != 3) throw Error("curve correspondence defined for n = 2, 3");
    const auto curve = n == 2 ? hyperelliptic::curve_c1() : hyperelliptic::curve_c2();
    CorrespondenceReport r;
    r.n = n;
    r.symbolic = detail::symbolic_iterate(phi_constant(), n) == detail::mul({0, 1}, detail::trim(curve.f));
    bool numeric = true;
    for (auto q : primes_below(240)) {
        if (q == 2 || r.primes_checked == 50) continue;
        const BigInt p(static_cast<unsigned long>(q));
        const BigInt value = dynamics::iterate_exact(dynamics::quadratic_family(p), p, n);
        numeric = numeric && value == p * curve.eval(p);
        ++r.primes_checked;
    }
    r.numeric = numeric && r.primes_checked == 50;
    if (!r.ok()) throw Error("curve correspondence failed at n = " + std::to_string(n));
    return r;
}

// ---------------------------------------------------------------- congruence rules

struct CaseRule {
    std::string name;
    std::uint64_t modulus = 0;
    std::vector<std::uint64_t> residues;
    std::vector<std::uint64_t> cycle;
    unsigned threshold = 0;
};

inline std::vector<CaseRule> case_rules() {
    return {
        {"case1", 3, {2}, {1}, 2},
        {"case2", 4, {3}, {1}, 1},
        {"case3", 5, {2}, {4}, 2},
        {"case4", 7, {3, 6}, {1}, 3},
        {"case5a", 11, {2}, {4}, 2},
        {"case5b", 11, {3}, {6}, 3},
        {"case5c", 11, {5}, {10}, 3},
        {"case5d", 11, {7, 10}, {1}, 3},
        {"case6a", 13, {2}, {4}, 2},
        {"case6b", 13, {3}, {6}, 4},
        {"case6c", 13, {9}, {6, 11}, 3},
        {"case6d", 13, {7, 11}, {1}, 4},
    };
}

// Squares table for Z/m.
inline std::vector<bool> square_table(std::uint64_t m) {
    std::vector<bool> sq(m, false);
    for (std::uint64_t y = 0; y < m; ++y) sq[y * y % m] = true;
    return sq;
}

// Smallest y with v = r * y^2 (mod m), if any.
inline std::optional<std::uint64_t> class_witness(std::uint64_t v, std::uint64_t r, std::uint64_t m) {
    for (std::uint64_t y = 0; y < m; ++y)
        if (mul_mod(r % m, y * y % m, m) == v % m) return y;
    return std::nullopt;
}

inline bool obstructed(std::uint64_t v, std::uint64_t r, std::uint64_t m) { return !class_witness(v, r, m).has_value(); }

inline dynamics::OrbitTrace residue_orbit(std::uint64_t r, std::uint64_t m) {
    return dynamics::orbit_mod(dynamics::quadratic_family(BigInt(static_cast<unsigned long>(r))),
                               BigInt(static_cast<unsigned long>(r)), m);
}

struct RuleFailure {
    std::uint64_t residue = 0;
    std::uint64_t value = 0;
    std::optional<std::uint64_t> y;  // square-class witness, absent for a wrong cycle
    std::string reason;
};

struct RuleReport {
    std::string name;
    bool passed = false;
    std::vector<dynamics::OrbitTrace> traces;  // one per residue
    std::optional<RuleFailure> failure;
};

inline RuleReport congruence_case_check(const CaseRule& rule) {
    RuleReport rep{rule.name, true, {}, std::nullopt};
    std::vector<std::uint64_t> claimed = rule.cycle;
    std::sort(claimed.begin(), claimed.end());
    for (auto r : rule.residues) {
        auto tr = residue_orbit(r, rule.modulus);
        rep.traces.push_back(tr);
        std::vector<std::uint64_t> got = tr.cycle;
        std::sort(got.begin(), got.end());
        if (got != claimed || tr.tail > rule.threshold) {
            rep.passed = false;
            rep.failure = RuleFailure{r, tr.cycle.front(), std::nullopt, "cycle or threshold mismatch"};
            return rep;
        }
        for (auto v : tr.cycle)
            if (auto y = class_witness(v, r, rule.modulus)) {
                rep.passed = false;
                rep.failure = RuleFailure{r, v, y, "cycle value in r * squares"};
                return rep;
            }
    }
    return rep;
}

// ---------------------------------------------------------------- certificates

inline constexpr unsigned kFirstSieveStage = 4;
inline constexpr std::size_t kMaxTail = 8;

enum class Verdict { surjective, inconclusive, outside_hypothesis };
inline std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::surjective: return "surjective";
        case Verdict::inconclusive: return "inconclusive";
        default: return "outside-hypothesis";
    }
}

struct QuadCertificate {
    std::uint64_t p = 0;
    std::string rule;  // "case..." or "search"
    std::uint64_t modulus = 0;
    std::size_t tail = 0;
    std::vector<std::uint64_t> cycle;
    std::vector<DirectCheck> direct_checks;
    std::vector<std::string> assumptions;
    bool refinement_excluded = false;  // phi_p^n(p) = p y^2 ruled out for every n >= 2
    Verdict verdict = Verdict::inconclusive;

    void settle(bool excluded) {
        refinement_excluded = excluded;
        if (!excluded) verdict = Verdict::inconclusive;
        else verdict = p >= 3 ? Verdict::surjective : Verdict::outside_hypothesis;
    }
};

// Whether modulus m rules out phi_p^n(p) = p y^2 for all n >= 4, given exact
// checks for transient indices that the congruence leaves open.
struct ModulusCheck {
    bool works = false;
    dynamics::OrbitTrace trace;
    std::vector<unsigned> gap;  // indices needing an exact check
};

inline ModulusCheck check_modulus(std::uint64_t p, std::uint64_t m) {
    ModulusCheck mc;
    mc.trace = dynamics::orbit_mod(dynamics::quadratic_family(BigInt(static_cast<unsigned long>(p))),
                                   BigInt(static_cast<unsigned long>(p)), m);
    if (mc.trace.tail > kMaxTail) return mc;
    const std::uint64_t r = p % m;
    for (auto v : mc.trace.cycle)
        if (!obstructed(v, r, m)) return mc;
    for (unsigned n = kFirstSieveStage; n < mc.trace.tail; ++n)
        if (!obstructed(mc.trace.value_at(n), r, m)) mc.gap.push_back(n);
    mc.works = true;
    return mc;
}

inline std::vector<std::uint64_t> default_modulus_pool() {
    std::vector<std::uint64_t> pool;
    for (std::uint64_t m = 2; m <= 100; ++m)
        if (as_prime_power(m)) pool.push_back(m);
    return pool;
}

inline std::vector<std::string> quad_assumptions() {
    return {"phi_p^n irreducible over Q and phi_p^n(p) not a rational square for all n (cited)",
            "maximality at stage n follows from a prime of odd valuation in phi_p^n(p) absent from earlier iterates (cited)"};
}

inline void fill_direct(QuadCertificate& cert, const BigInt& p, const std::vector<unsigned>& stages) {
    for (auto n : stages) cert.direct_checks.push_back(direct_check(p, n));
}

inline bool direct_all_negative(const QuadCertificate& cert) {
    return std::none_of(cert.direct_checks.begin(), cert.direct_checks.end(), [](const DirectCheck& c) { return c.is_square; });
}

inline QuadCertificate modulus_search_certify(std::uint64_t p, const std::vector<std::uint64_t>& pool = default_modulus_pool()) {
    QuadCertificate cert;
    cert.p = p;
    cert.rule = "search";
    cert.assumptions = quad_assumptions();
    const BigInt P(static_cast<unsigned long>(p));
    for (auto m : pool) {
        auto mc = check_modulus(p, m);
        if (!mc.works) continue;
        cert.modulus = m;
        cert.tail = mc.trace.tail;
        cert.cycle = mc.trace.cycle;
        std::vector<unsigned> stages{2, 3};
        stages.insert(stages.end(), mc.gap.begin(), mc.gap.end());
        fill_direct(cert, P, stages);
        cert.settle(direct_all_negative(cert));
        return cert;
    }
    fill_direct(cert, P, {2, 3});
    return cert;
}

// First case rule whose residue set contains p mod m.
inline std::optional<CaseRule> matching_rule(std::uint64_t p, const std::vector<CaseRule>& rules = case_rules()) {
    for (const auto& rule : rules)
        if (std::find(rule.residues.begin(), rule.residues.end(), p % rule.modulus) != rule.residues.end()) return rule;
    return std::nullopt;
}

// p = 2 runs through the same sieve but lies outside the p >= 3 hypothesis.
inline QuadCertificate certify(std::uint64_t p, const std::vector<CaseRule>& rules = case_rules()) {
    if (!is_prime(p)) throw Error("quadratic family needs a prime, got " + std::to_string(p));
    auto rule = matching_rule(p, rules);
    if (!rule) return modulus_search_certify(p);
    QuadCertificate cert;
    cert.p = p;
    cert.rule = rule->name;
    cert.modulus = rule->modulus;
    cert.assumptions = quad_assumptions();
    const auto rep = congruence_case_check(*rule);
    auto tr = dynamics::orbit_mod(dynamics::quadratic_family(BigInt(static_cast<unsigned long>(p))),
                                  BigInt(static_cast<unsigned long>(p)), rule->modulus);
    cert.tail = tr.tail;
    cert.cycle = tr.cycle;
    fill_direct(cert, BigInt(static_cast<unsigned long>(p)), {2, 3});
    const bool covered = tr.tail <= std::max<std::size_t>(kFirstSieveStage, 4);
    cert.settle(rep.passed && covered && direct_all_negative(cert));
    return cert;
}

// Moduli stated for the primes no case rule covers below 5000.
inline const std::map<std::uint64_t, std::uint64_t>& reference_exceptional_moduli() {
    static const std::map<std::uint64_t, std::uint64_t> table{
        {229, 16},  {1009, 19}, {1093, 16}, {1321, 17}, {1453, 16}, {3169, 53}, {3229, 16},
        {3301, 16}, {3529, 19}, {4153, 31}, {4261, 16}, {4621, 16}, {4789, 16},
    };
    return table;
}

struct SweepEntry {
    QuadCertificate cert;
    std::optional<std::uint64_t> reference_modulus;
    bool reference_modulus_works = false;
};

struct SweepReport {
    std::uint64_t p_max = 0;
    std::vector<SweepEntry> entries;  // ascending p
    std::vector<RuleReport> rules;

    std::size_t sieved() const { return entries.size(); }
    std::size_t excluded() const {
        return static_cast<std::size_t>(std::count_if(entries.begin(), entries.end(), [](const SweepEntry& e) {
            return e.cert.refinement_excluded;
        }));
    }
    std::size_t in_scope() const {
        return static_cast<std::size_t>(std::count_if(entries.begin(), entries.end(), [](const SweepEntry& e) {
            return e.cert.p >= 3;
        }));
    }
    std::size_t certified() const {
        return static_cast<std::size_t>(std::count_if(entries.begin(), entries.end(), [](const SweepEntry& e) {
            return e.cert.verdict == Verdict::surjective;
        }));
    }
    std::vector<std::uint64_t> exceptional() const {
        std::vector<std::uint64_t> out;
        for (const auto& e : entries)
            if (e.cert.rule == "search") out.push_back(e.cert.p);
        return out;
    }
    bool failure() const { return certified() != in_scope() || excluded() != sieved(); }
};

inline SweepReport sweep(std::uint64_t p_max = 5000, unsigned jobs = 0, const std::vector<CaseRule>& rules = case_rules()) {
    if (p_max < 3) throw Error("p_max must be at least 3");
    SweepReport rep;
    rep.p_max = p_max;
    for (const auto& rule : rules) rep.rules.push_back(congruence_case_check(rule));
    std::vector<std::uint64_t> primes;
    for (auto q : primes_below(p_max)) primes.push_back(q);
    rep.entries.resize(primes.size());
    if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
    jobs = std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(primes.size(), 1)));
    auto work = [&](std::size_t start) {
        for (std::size_t i = start; i < primes.size(); i += jobs) {
            SweepEntry e;
            e.cert = certify(primes[i], rules);
            const auto& ref = reference_exceptional_moduli();
            if (auto it = ref.find(primes[i]); it != ref.end()) {
                e.reference_modulus = it->second;
                e.reference_modulus_works = check_modulus(primes[i], it->second).works;
            }
            rep.entries[i] = std::move(e);
        }
    };
    std::vector<std::thread> threads;
    for (unsigned j = 1; j < jobs; ++j) threads.emplace_back(work, j);
    work(0);
    for (auto& t : threads) t.join();
    return rep;
}

// ---------------------------------------------------------------- shifted family f_p

struct ParityRow {
    unsigned n = 0;
    bool odd = false;
    bool divisible_by_p = false;
};

struct ShiftedFamilyCertificate {
    std::uint64_t p = 0;
    std::vector<BigInt> orbit_of_zero;  // forward orbit of 0, excluding 0
    std::vector<ParityRow> parity;      // n = 1..6
    bool parity_pattern = false;        // n even: odd and divisible by p; n odd: even, prime to p
    bool x1_identity = false;           // f_P^2(P) = P * X1(P)
    bool x2_identity = false;           // f_P^3(P) = X2 right-hand side at P
    DirectCheck n2;                     // f^2(p) = p y^2 ?
    DirectCheck n3;                     // f^3(p) = 2 y^2 ?
    bool mod5_applicable = false;
    std::optional<dynamics::OrbitTrace> mod5_trace;
    bool mod5_obstructs = false;
    std::string scope;                  // "stage3" or "all-stages"
    bool passed = false;
};

inline ShiftedFamilyCertificate shifted_family_check(std::uint64_t p) {
    if (p < 3 || !is_prime(p)) throw Error("shifted family needs an odd prime");
    const BigInt P(static_cast<unsigned long>(p));
    const auto f = dynamics::shifted_quadratic_family(P);
    ShiftedFamilyCertificate c;
    c.p = p;

    auto orbit = dynamics::finite_orbit(f, BigInt(0), 8);
    if (!orbit) throw Error("internal: orbit of 0 under f_p not finite");
    c.orbit_of_zero.assign(orbit->begin() + 1, orbit->end());

    auto values = dynamics::orbit_prefix(f, P, 6);
    c.parity_pattern = true;
    for (unsigned n = 1; n <= 6; ++n) {
        const BigInt& v = values[n];
        ParityRow row{n, mpz_odd_p(v.get_mpz_t()) != 0, mpz_divisible_p(v.get_mpz_t(), P.get_mpz_t()) != 0};
        c.parity.push_back(row);
        const bool even_n = n % 2 == 0;
        c.parity_pattern = c.parity_pattern && row.odd == even_n && row.divisible_by_p == even_n;
    }

    const auto x1 = hyperelliptic::curve_x1();
    const auto x2 = hyperelliptic::curve_x2();
    c.x1_identity = detail::symbolic_iterate(f_constant(), 2) == detail::mul({0, 1}, detail::trim(x1.f));
    c.x2_identity = detail::symbolic_iterate(f_constant(), 3) == detail::trim(x2.f);

    c.n2 = square_check(2, values[2], P);
    c.n3 = square_check(3, values[3], BigInt(2));
    const bool stage3 = c.parity_pattern && c.x1_identity && c.x2_identity && !c.n2.is_square && !c.n3.is_square;

    c.mod5_applicable = p % 5 == 2;
    if (c.mod5_applicable) {
        auto tr = dynamics::orbit_mod(f, P, 5);
        // n even: value = p y^2; n odd: value = 2 y^2. Both classes must miss every value from n = 2 on.
        bool ok = tr.tail <= 2;
        for (auto v : tr.values_from(2)) ok = ok && obstructed(v, p % 5, 5) && obstructed(v, 2, 5);
        c.mod5_trace = tr;
        c.mod5_obstructs = ok;
    }
    c.scope = c.mod5_applicable && c.mod5_obstructs ? "all-stages" : "stage3";
    c.passed = stage3 && (!c.mod5_applicable || c.mod5_obstructs);
    return c;
}

// Integral points with |x| <= bound on y^2 = f(x) (a = 1), by exact square tests.
inline std::vector<std::pair<BigInt, BigInt>> bounded_integral_points(const hyperelliptic::HyperCurve& curve, long bound) {
    std::vector<std::pair<BigInt, BigInt>> out;
    for (long x = -bound; x <= bound; ++x) {
        const BigInt rhs = curve.eval(BigInt(x));
        if (rhs % curve.a != 0) continue;
        const BigInt y2 = rhs / curve.a;
        if (!is_perfect_square(y2)) continue;
        BigInt y = sqrt(y2);
        out.emplace_back(BigInt(x), y);
        if (y != 0) out.emplace_back(BigInt(x), -y);
    }
    return out;
}

}  // namespace arboreal::quadfamily
