#pragma once

// Mordell-Weil sieve on a genus-3 Jacobian with two known generators: torsion
// via coprime local orders, index checks G/lG -> prod J(F_q)/lJ(F_q), the
// residue-class split from a reduced differential, and the CRT sieve.

#include "arboreal/common.hpp"
#include "arboreal/hyperelliptic.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

namespace arboreal::mwsieve {

using hyperelliptic::CurvePoint;
using hyperelliptic::HyperCurve;
using hyperelliptic::Jacobian;
using hyperelliptic::MumfordDivisor;

// Mumford pair over Z, reduced prime by prime.
struct RationalDivisor {
    std::vector<BigInt> u;
    std::vector<BigInt> v;
};

struct SieveTarget {
    std::uint64_t x = 0;
    std::uint64_t y = 0;
    std::string to_string() const { return "(" + std::to_string(x) + "," + std::to_string(y) + ")"; }
};

struct SieveConfig {
    std::string name;
    HyperCurve curve;
    RationalDivisor p0;
    RationalDivisor q0;
    std::map<unsigned, std::vector<std::uint64_t>> index_sets;  // l -> S_l
    std::vector<std::uint64_t> sieve_primes;                    // S'
    std::uint64_t target_prime = 0;                             // q0
    std::vector<SieveTarget> targets;
    std::vector<SieveTarget> controls;  // classes of known rational points
    std::vector<std::uint64_t> differential;  // reduced numerator at q0, low degree first
};

inline SieveConfig preset_c2() {
    SieveConfig c;
    c.name = "paper-C2";
    c.curve = hyperelliptic::curve_c2();
    c.p0 = {{-1, -1, 1}, {1, -1}};  // (x^2 - x - 1, -x + 1)
    c.q0 = {{-1, 1}, {1}};          // [(1,1) - inf]
    c.index_sets = {{2, {3, 5}}, {3, {3, 5}}, {5, {5, 19}}, {7, {11, 47}}, {11, {13, 37}}};
    c.sieve_primes = {3, 5, 7, 13};
    c.target_prime = 5;
    c.targets = {{3, 2}, {3, 3}, {4, 2}, {4, 3}};
    c.controls = {{1, 1}, {1, 4}};
    c.differential = {0, 2, 1};  // x^2 + 2x
    return c;
}

// Jacobians over F_q and their lJ images, built once per (curve, q).
class JacobianCache {
public:
    explicit JacobianCache(HyperCurve curve) : curve_(std::move(curve)) {}

    const HyperCurve& curve() const { return curve_; }

    const Jacobian& at(std::uint64_t q) {
        std::lock_guard lock(mu_);
        auto it = jac_.find(q);
        if (it == jac_.end()) it = jac_.emplace(q, std::make_unique<Jacobian>(curve_, q)).first;
        return *it->second;
    }

    const std::vector<MumfordDivisor>& elements(std::uint64_t q) {
        const Jacobian& J = at(q);
        std::lock_guard lock(mu_);
        auto it = elems_.find(q);
        if (it == elems_.end()) it = elems_.emplace(q, J.enumerate()).first;
        return it->second;
    }

    // Keys of {l D : D in J(F_q)}.
    const std::unordered_set<std::uint64_t>& multiples(std::uint64_t q, unsigned l) {
        const auto& elems = elements(q);
        const Jacobian& J = at(q);
        {
            std::lock_guard lock(mu_);
            if (auto it = mult_.find({q, l}); it != mult_.end()) return it->second;
        }
        std::unordered_set<std::uint64_t> image;
        for (const auto& D : elems) image.insert(J.key(J.scalar(l, D)));
        std::lock_guard lock(mu_);
        return mult_.emplace(std::make_pair(q, l), std::move(image)).first->second;
    }

private:
    HyperCurve curve_;
    std::mutex mu_;
    std::map<std::uint64_t, std::unique_ptr<Jacobian>> jac_;
    std::map<std::uint64_t, std::vector<MumfordDivisor>> elems_;
    std::map<std::pair<std::uint64_t, unsigned>, std::unordered_set<std::uint64_t>> mult_;
};

inline MumfordDivisor reduce_divisor(const Jacobian& J, const RationalDivisor& D) {
    MumfordDivisor r = J.reduce(D.u, D.v);
    J.require_valid(r);
    return r;
}

// ---------------------------------------------------------------- torsion and index

struct TorsionCheck {
    std::uint64_t q1 = 0;
    std::uint64_t q2 = 0;
    std::int64_t order1 = 0;
    std::int64_t order2 = 0;
    std::int64_t gcd = 0;
    bool trivial_torsion() const { return gcd == 1; }
};

inline TorsionCheck torsion_gcd_check(const HyperCurve& curve, std::uint64_t q1, std::uint64_t q2) {
    hyperelliptic::require_good_reduction(curve, q1);
    hyperelliptic::require_good_reduction(curve, q2);
    TorsionCheck t{q1, q2, hyperelliptic::jacobian_order(curve, q1), hyperelliptic::jacobian_order(curve, q2), 0};
    t.gcd = std::gcd(t.order1, t.order2);
    return t;
}

struct IndexCheck {
    unsigned l = 0;
    std::vector<std::uint64_t> primes;
    bool injective = false;
    std::vector<std::pair<unsigned, unsigned>> kernel;  // (a, b) mod l landing in every lJ
};

// G/lG -> prod_{q in S} J(F_q)/lJ(F_q) injective on G = <P0, Q0>?
inline IndexCheck index_injectivity_check(JacobianCache& cache, unsigned l, const std::vector<std::uint64_t>& primes,
                                          const RationalDivisor& p0, const RationalDivisor& q0) {
    if (l < 2 || !is_prime(static_cast<std::uint64_t>(l))) throw Error("index check needs a prime l");
    IndexCheck r{l, primes, true, {}};
    struct Local {
        const Jacobian* J;
        MumfordDivisor P, Q;
        const std::unordered_set<std::uint64_t>* image;
    };
    std::vector<Local> locals;
    for (auto q : primes) {
        const Jacobian& J = cache.at(q);
        locals.push_back({&J, reduce_divisor(J, p0), reduce_divisor(J, q0), &cache.multiples(q, l)});
    }
    for (unsigned a = 0; a < l; ++a)
        for (unsigned b = 0; b < l; ++b) {
            if (a == 0 && b == 0) continue;
            bool detected = false;
            for (const auto& loc : locals) {
                const auto D = loc.J->add(loc.J->scalar(a, loc.P), loc.J->scalar(b, loc.Q));
                if (!loc.image->contains(loc.J->key(D))) {
                    detected = true;
                    break;
                }
            }
            if (!detected) {
                r.injective = false;
                r.kernel.emplace_back(a, b);
            }
        }
    return r;
}

// ---------------------------------------------------------------- residue classes

struct ResidueClassification {
    std::uint64_t q = 0;
    std::vector<CurvePoint> vanishing;  // numerator vanishes at x: possibly several rational points
    std::vector<CurvePoint> at_most_one;
};

// w(x) dx / 2y has order 2(g - 1 - deg w) at the point at infinity of an odd-degree model.
inline ResidueClassification chabauty_residue_classifier(const HyperCurve& curve, std::uint64_t q,
                                                         const std::vector<std::uint64_t>& numerator) {
    const finitefield::PrimeField F(q);
    std::vector<BigInt> coeffs;
    for (auto c : numerator) coeffs.emplace_back(static_cast<unsigned long>(c));
    const finitefield::FpPoly w = finitefield::poly::reduce(F, coeffs);
    ResidueClassification r;
    r.q = q;
    for (const auto& P : hyperelliptic::enumerate_points(curve, q)) {
        const bool zero_form = w.degree() < 0;
        const bool vanishes = zero_form || (P.at_infinity ? w.degree() < static_cast<int>(curve.genus()) - 1
                                                          : finitefield::poly::eval(F, w, P.x) == 0);
        (vanishes ? r.vanishing : r.at_most_one).push_back(P);
    }
    return r;
}

// ---------------------------------------------------------------- sieve

using Pair = std::pair<std::uint64_t, std::uint64_t>;

// (sqrt q + 1)^(2g) bounds #J(F_q), hence every element order.
inline std::int64_t order_bound(const Jacobian& J) {
    return static_cast<std::int64_t>(std::ceil(std::pow(std::sqrt(static_cast<double>(J.field().q())) + 1, 2.0 * J.genus()))) + 1;
}

// Pairs (a mod m1, b mod m2) compatible with reduction at one prime.
struct LocalSolutions {
    std::uint64_t q = 0;
    std::uint64_t m1 = 0;  // order of P0 mod q
    std::uint64_t m2 = 0;  // order of Q0 mod q
    std::vector<Pair> pairs;
};

// A_q(T) = {(a, b) : a P0 + b Q0 in iota(T)}, iota(P) = [P - inf].
inline LocalSolutions local_solutions(const Jacobian& J, const MumfordDivisor& P, const MumfordDivisor& Q,
                                      const std::vector<CurvePoint>& T) {
    LocalSolutions s;
    s.q = J.field().q();
    const auto bound = order_bound(J);
    s.m1 = static_cast<std::uint64_t>(J.order_of(P, bound));
    s.m2 = static_cast<std::uint64_t>(J.order_of(Q, bound));
    std::unordered_map<std::uint64_t, std::uint64_t> b_of;  // key(bQ) -> b
    MumfordDivisor acc = J.identity();
    for (std::uint64_t b = 0; b < s.m2; ++b) {
        b_of.emplace(J.key(acc), b);
        acc = J.add(acc, Q);
    }
    std::vector<MumfordDivisor> images;
    for (const auto& t : T) images.push_back(J.from_point(t));
    MumfordDivisor aP = J.identity();
    const MumfordDivisor negP = J.negate(P);
    std::vector<MumfordDivisor> shifted = images;  // iota(t) - aP
    for (std::uint64_t a = 0; a < s.m1; ++a) {
        for (const auto& D : shifted)
            if (auto it = b_of.find(J.key(D)); it != b_of.end()) s.pairs.emplace_back(a, it->second);
        for (auto& D : shifted) D = J.add(D, negP);
        aP = J.add(aP, P);
    }
    std::sort(s.pairs.begin(), s.pairs.end());
    s.pairs.erase(std::unique(s.pairs.begin(), s.pairs.end()), s.pairs.end());
    return s;
}

// Same set by scanning every (a, b); the slow reference.
inline LocalSolutions local_solutions_direct(const Jacobian& J, const MumfordDivisor& P, const MumfordDivisor& Q,
                                             const std::vector<CurvePoint>& T) {
    LocalSolutions s;
    s.q = J.field().q();
    const auto bound = order_bound(J);
    s.m1 = static_cast<std::uint64_t>(J.order_of(P, bound));
    s.m2 = static_cast<std::uint64_t>(J.order_of(Q, bound));
    std::unordered_set<std::uint64_t> keys;
    for (const auto& t : T) keys.insert(J.key(J.from_point(t)));
    for (std::uint64_t a = 0; a < s.m1; ++a)
        for (std::uint64_t b = 0; b < s.m2; ++b)
            if (keys.contains(J.key(J.add(J.scalar(static_cast<std::int64_t>(a), P), J.scalar(static_cast<std::int64_t>(b), Q)))))
                s.pairs.emplace_back(a, b);
    return s;
}

// Residue classes on (Z/n1) x (Z/n2).
struct ClassSet {
    std::uint64_t n1 = 1;
    std::uint64_t n2 = 1;
    std::vector<Pair> pairs{{0, 0}};
};

namespace detail {

// x = r1 mod m1, x = r2 mod m2; nullopt when incompatible.
inline std::optional<std::uint64_t> crt(std::uint64_t r1, std::uint64_t m1, std::uint64_t r2, std::uint64_t m2) {
    const std::uint64_t g = std::gcd(m1, m2);
    if ((r1 % g) != (r2 % g)) return std::nullopt;
    const std::uint64_t L = m1 / g * m2;
    for (std::uint64_t x = r1; x < L; x += m1)
        if (x % m2 == r2) return x;
    return std::nullopt;
}

}  // namespace detail

inline ClassSet combine(const ClassSet& S, const LocalSolutions& A) {
    ClassSet out;
    out.n1 = std::lcm(S.n1, A.m1);
    out.n2 = std::lcm(S.n2, A.m2);
    out.pairs.clear();
    const std::uint64_t g1 = std::gcd(S.n1, A.m1), g2 = std::gcd(S.n2, A.m2);
    std::map<Pair, std::vector<Pair>> by_residue;
    for (const auto& pr : A.pairs) by_residue[{pr.first % g1, pr.second % g2}].push_back(pr);
    for (const auto& s : S.pairs) {
        auto it = by_residue.find({s.first % g1, s.second % g2});
        if (it == by_residue.end()) continue;
        for (const auto& a : it->second) {
            auto x = detail::crt(s.first, S.n1, a.first, A.m1);
            auto y = detail::crt(s.second, S.n2, a.second, A.m2);
            if (x && y) out.pairs.emplace_back(*x, *y);
        }
    }
    std::sort(out.pairs.begin(), out.pairs.end());
    return out;
}

enum class TargetVerdict { eliminated, survives };
inline std::string to_string(TargetVerdict v) { return v == TargetVerdict::eliminated ? "eliminated" : "survives"; }

struct PrimeStep {
    std::uint64_t q = 0;
    std::uint64_t m1 = 0;
    std::uint64_t m2 = 0;
    std::size_t local_size = 0;     // |A_q|
    std::uint64_t lattice_n1 = 0;   // after combining
    std::uint64_t lattice_n2 = 0;
    std::size_t combined_size = 0;  // classes still compatible
};

struct TargetReport {
    SieveTarget target;
    TargetVerdict verdict = TargetVerdict::survives;
    std::vector<PrimeStep> steps;  // q0 first, then S' in increasing order
    std::vector<Pair> remaining;   // empty when eliminated
};

struct SieveReport {
    std::string config_name;
    std::vector<std::uint64_t> sieve_primes;
    std::uint64_t target_prime = 0;
    std::vector<TargetReport> targets;
    std::vector<TargetReport> controls;
    std::vector<std::string> assumptions;
    bool passed() const {
        return std::all_of(targets.begin(), targets.end(), [](const TargetReport& t) { return t.verdict == TargetVerdict::eliminated; }) &&
               std::all_of(controls.begin(), controls.end(), [](const TargetReport& t) { return t.verdict == TargetVerdict::survives; });
    }
};

inline std::vector<std::string> sieve_assumptions() {
    return {"rank of J(Q) is at most 2 (descent, cited)",
            "index [J(Q) : G] prime to the l checked by the index sets, so G and J(Q) have the same image mod each q in S' (cited inference)",
            "a residue class where the reduced differential does not vanish holds at most one rational point (cited)"};
}

// Generators independent in the sense of generating a non-cyclic subgroup of J(F_3) x J(F_5).
inline bool generators_independent(JacobianCache& cache, const SieveConfig& config) {
    std::vector<std::uint64_t> qs;
    for (auto q : {3u, 5u, 7u, 11u, 13u})
        if (hyperelliptic::has_good_reduction(config.curve, q) && qs.size() < 2) qs.push_back(q);
    std::vector<const Jacobian*> factors;
    std::vector<MumfordDivisor> P, Q;
    for (auto q : qs) {
        const Jacobian& J = cache.at(q);
        factors.push_back(&J);
        P.push_back(reduce_divisor(J, config.p0));
        Q.push_back(reduce_divisor(J, config.q0));
    }
    return !hyperelliptic::subgroup_probe(factors, {P, Q}).cyclic;
}

inline SieveReport sieve_eliminate(const SieveConfig& config, JacobianCache* shared = nullptr) {
    std::unique_ptr<JacobianCache> own;
    if (!shared) own = std::make_unique<JacobianCache>(config.curve);
    JacobianCache& cache = shared ? *shared : *own;
    if (std::find(config.sieve_primes.begin(), config.sieve_primes.end(), config.target_prime) == config.sieve_primes.end())
        throw Error("target prime must belong to the sieve primes");
    for (auto q : config.sieve_primes) hyperelliptic::require_good_reduction(config.curve, q);
    if (!generators_independent(cache, config)) throw Error("sieve requires independent generators");

    std::vector<std::uint64_t> order{config.target_prime};
    std::vector<std::uint64_t> rest;
    for (auto q : config.sieve_primes)
        if (q != config.target_prime) rest.push_back(q);
    std::sort(rest.begin(), rest.end());
    order.insert(order.end(), rest.begin(), rest.end());

    // Local data for q != q0 do not depend on the target: compute once, in parallel.
    std::vector<std::future<LocalSolutions>> futures;
    for (std::size_t i = 1; i < order.size(); ++i) {
        const Jacobian& J = cache.at(order[i]);
        futures.push_back(std::async(std::launch::async, [&J, &config] {
            return local_solutions(J, reduce_divisor(J, config.p0), reduce_divisor(J, config.q0),
                                   hyperelliptic::enumerate_points(config.curve, J.field().q()));
        }));
    }
    std::vector<LocalSolutions> others;
    for (auto& f : futures) others.push_back(f.get());

    const Jacobian& J0 = cache.at(config.target_prime);
    const auto P0 = reduce_divisor(J0, config.p0), Q0 = reduce_divisor(J0, config.q0);
    auto run = [&](const SieveTarget& t) {
        const CurvePoint pt{false, 0, t.x, t.y};
        const auto pts = hyperelliptic::enumerate_points(config.curve, config.target_prime);
        if (std::find(pts.begin(), pts.end(), pt) == pts.end())
            throw Error("target " + t.to_string() + " is not a point mod " + std::to_string(config.target_prime));
        TargetReport r;
        r.target = t;
        ClassSet S;
        auto step = [&](const LocalSolutions& A) {
            S = combine(S, A);
            r.steps.push_back({A.q, A.m1, A.m2, A.pairs.size(), S.n1, S.n2, S.pairs.size()});
        };
        step(local_solutions(J0, P0, Q0, {pt}));
        for (const auto& A : others) step(A);
        r.remaining = S.pairs;
        r.verdict = S.pairs.empty() ? TargetVerdict::eliminated : TargetVerdict::survives;
        return r;
    };

    SieveReport rep;
    rep.config_name = config.name;
    rep.sieve_primes = order;
    rep.target_prime = config.target_prime;
    rep.assumptions = sieve_assumptions();
    for (const auto& t : config.targets) rep.targets.push_back(run(t));
    for (const auto& t : config.controls) rep.controls.push_back(run(t));
    return rep;
}

// ---------------------------------------------------------------- full pipeline

enum class ClassStatus { known_point, eliminated, open };
inline std::string to_string(ClassStatus s) {
    switch (s) {
        case ClassStatus::known_point: return "known-point";
        case ClassStatus::eliminated: return "eliminated";
        default: return "open";
    }
}

struct ClassOutcome {
    CurvePoint point;
    bool multi_point = false;  // differential vanishes here
    ClassStatus status = ClassStatus::open;
};

struct RationalPointsReport {
    std::vector<TorsionCheck> torsion;
    std::vector<IndexCheck> index_checks;
    ResidueClassification classes;
    SieveReport sieve;
    std::vector<ClassOutcome> outcomes;
    std::vector<std::string> known_points;  // rational points whose classes are accounted for
    bool complete = false;                  // every class is known-point or eliminated
};

// Classes mod q0: singleton classes of known points are closed by the one-point
// Chabauty bound; every other class must be eliminated by the sieve.
inline RationalPointsReport rational_points_pipeline(const SieveConfig& config, const std::vector<std::pair<std::uint64_t, std::uint64_t>>& torsion_pairs) {
    JacobianCache cache(config.curve);
    RationalPointsReport r;
    for (const auto& [a, b] : torsion_pairs) r.torsion.push_back(torsion_gcd_check(config.curve, a, b));
    for (const auto& [l, S] : config.index_sets) r.index_checks.push_back(index_injectivity_check(cache, l, S, config.p0, config.q0));
    r.classes = chabauty_residue_classifier(config.curve, config.target_prime, config.differential);

    SieveConfig all = config;
    all.targets.clear();
    all.controls.clear();
    std::vector<CurvePoint> known{{true, 0, 0, 0}};
    for (const auto& c : config.controls) known.push_back({false, 0, c.x, c.y});
    auto is_known = [&](const CurvePoint& P) { return std::find(known.begin(), known.end(), P) != known.end(); };
    auto consider = [&](const CurvePoint& P, bool multi) {
        ClassOutcome o{P, multi, ClassStatus::open};
        if (!multi && is_known(P)) o.status = ClassStatus::known_point;
        else if (!P.at_infinity) all.targets.push_back({P.x, P.y});
        r.outcomes.push_back(o);
    };
    for (const auto& P : r.classes.vanishing) consider(P, true);
    for (const auto& P : r.classes.at_most_one) consider(P, false);
    r.sieve = sieve_eliminate(all, &cache);
    for (auto& o : r.outcomes) {
        if (o.status != ClassStatus::open) continue;
        for (const auto& t : r.sieve.targets)
            if (!o.point.at_infinity && t.target.x == o.point.x && t.target.y == o.point.y && t.verdict == TargetVerdict::eliminated)
                o.status = ClassStatus::eliminated;
    }
    for (const auto& P : known) r.known_points.push_back(P.to_string());
    const bool torsion_ok = std::all_of(r.torsion.begin(), r.torsion.end(), [](const TorsionCheck& t) { return t.trivial_torsion(); });
    const bool index_ok = std::all_of(r.index_checks.begin(), r.index_checks.end(), [](const IndexCheck& c) { return c.injective; });
    r.complete = torsion_ok && index_ok &&
                 std::all_of(r.outcomes.begin(), r.outcomes.end(), [](const ClassOutcome& o) { return o.status != ClassStatus::open; });
    return r;
}

}  // namespace arboreal::mwsieve
