#pragma once

// JSON encoding of certificates and decoding of input files. Integers that may
// exceed 64 bits are written as decimal strings; key order is fixed.

#include "arboreal/common.hpp"
#include "arboreal/cyclotomic.hpp"
#include "arboreal/dynamics.hpp"
#include "arboreal/eisenstein.hpp"
#include "arboreal/hyperelliptic.hpp"
#include "arboreal/index_bounds.hpp"
#include "arboreal/maximality.hpp"
#include "arboreal/mwsieve.hpp"
#include "arboreal/quadfamily.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace arboreal::serialize {

using json = nlohmann::ordered_json;

inline json encode(const BigInt& v) { return v.get_str(); }

inline json encode(const std::vector<BigInt>& v) {
    json a = json::array();
    for (const auto& x : v) a.push_back(encode(x));
    return a;
}

inline json encode(const cyclotomic::CycInt& a) { return encode(a.coeffs()); }

inline json encode(const cyclotomic::Valuation& v) { return v.infinite ? json("inf") : json(v.value); }

inline json encode(const dynamics::OrbitTrace& t) {
    return {{"modulus", t.modulus}, {"tail", t.tail}, {"cycle", t.cycle}, {"prefix", t.raw_prefix}};
}

inline json encode(const index_bounds::Interval& i, unsigned digits = 30) {
    return {{"lo", i.lo_string(digits)}, {"hi", i.hi_string(digits)}};
}

// ---------------------------------------------------------------- maximality

inline json encode(const maximality::PrimeSpec& s) { return {{"a", s.a}, {"b", s.b}}; }

inline json encode(const maximality::MaximalityCertificate& c) {
    json norms = json::array();
    for (const auto& t : c.norm_tests) norms.push_back({{"n", t.n}, {"norm", encode(t.norm)}, {"is_power", t.is_power}});
    json stages = json::array();
    for (const auto& s : c.stages)
        stages.push_back({{"prime", encode(s.prime)},
                          {"ell", s.ell},
                          {"root", s.root},
                          {"tail", s.tail},
                          {"cycle", s.cycle},
                          {"survivors", s.survivors}});
    json elims = json::array();
    for (const auto& e : c.eliminations)
        elims.push_back({{"tuple", e.tuple},
                         {"prime_index", e.prime_index},
                         {"ell", e.ell},
                         {"stabilization_n", e.stabilization_n},
                         {"values", e.values},
                         {"unit_image", e.unit_image},
                         {"solvable", e.solvable}});
    return {{"p", c.p},
            {"n_direct", c.n_direct},
            {"n_min", c.n_min},
            {"norm_tests", norms},
            {"stages", stages},
            {"eliminations", elims},
            {"survivors", c.survivors},
            {"stabilization_covered", c.stabilization_covered},
            {"eisenstein_reference", c.eisenstein_reference},
            {"verdict", maximality::to_string(c.verdict)}};
}

// ---------------------------------------------------------------- quadratic family

inline json encode(const quadfamily::DirectCheck& d) {
    return {{"n", d.n}, {"value", encode(d.value)}, {"quotient", encode(d.quotient)}, {"is_square", d.is_square}};
}

inline json encode(const quadfamily::QuadCertificate& c) {
    json direct = json::array();
    for (const auto& d : c.direct_checks) direct.push_back(encode(d));
    return {{"p", c.p},
            {"rule", c.rule},
            {"modulus", c.modulus},
            {"tail", c.tail},
            {"cycle", c.cycle},
            {"direct_checks", direct},
            {"assumptions", c.assumptions},
            {"refinement_excluded", c.refinement_excluded},
            {"verdict", quadfamily::to_string(c.verdict)}};
}

inline json encode(const quadfamily::RuleReport& r) {
    json traces = json::array();
    for (const auto& t : r.traces) traces.push_back(encode(t));
    json j = {{"name", r.name}, {"passed", r.passed}, {"traces", traces}};
    if (r.failure) {
        j["failure"] = {{"residue", r.failure->residue}, {"value", r.failure->value}, {"reason", r.failure->reason}};
        if (r.failure->y) j["failure"]["y"] = *r.failure->y;
    }
    return j;
}

inline json encode(const quadfamily::CaseRule& r) {
    return {{"name", r.name}, {"modulus", r.modulus}, {"residues", r.residues}, {"cycle", r.cycle}, {"threshold", r.threshold}};
}

inline json encode(const quadfamily::SweepReport& r) {
    json rules = json::array();
    for (const auto& x : r.rules) rules.push_back(encode(x));
    json certs = json::array();
    json reference = json::array();
    for (const auto& e : r.entries) {
        certs.push_back(encode(e.cert));
        if (e.reference_modulus)
            reference.push_back({{"p", e.cert.p},
                                 {"stated_modulus", *e.reference_modulus},
                                 {"stated_modulus_works", e.reference_modulus_works},
                                 {"found_modulus", e.cert.modulus}});
    }
    std::vector<std::uint64_t> stated;
    for (const auto& [p, m] : quadfamily::reference_exceptional_moduli())
        if (p < r.p_max) stated.push_back(p);
    const auto found = r.exceptional();
    std::vector<std::uint64_t> extra, missing;
    std::set_difference(found.begin(), found.end(), stated.begin(), stated.end(), std::back_inserter(extra));
    std::set_difference(stated.begin(), stated.end(), found.begin(), found.end(), std::back_inserter(missing));
    return {{"p_max", r.p_max},
            {"counts",
             {{"sieved", r.sieved()}, {"obstructed", r.excluded()}, {"in_scope", r.in_scope()}, {"certified", r.certified()}}},
            {"rules", rules},
            {"exceptional", found},
            {"stated_exceptional", stated},
            {"exceptional_matches_stated", extra.empty() && missing.empty()},
            {"exceptional_extra", extra},
            {"exceptional_missing", missing},
            {"stated_moduli", reference},
            {"certificates", certs}};
}

inline json encode(const quadfamily::ShiftedFamilyCertificate& c) {
    json parity = json::array();
    for (const auto& r : c.parity) parity.push_back({{"n", r.n}, {"odd", r.odd}, {"divisible_by_p", r.divisible_by_p}});
    json j = {{"p", c.p},
              {"orbit_of_zero", encode(c.orbit_of_zero)},
              {"parity", parity},
              {"parity_pattern", c.parity_pattern},
              {"x1_identity", c.x1_identity},
              {"x2_identity", c.x2_identity},
              {"n2", encode(c.n2)},
              {"n3", encode(c.n3)},
              {"mod5_applicable", c.mod5_applicable},
              {"mod5_obstructs", c.mod5_obstructs},
              {"scope", c.scope},
              {"passed", c.passed}};
    if (c.mod5_trace) j["mod5_trace"] = encode(*c.mod5_trace);
    return j;
}

// ---------------------------------------------------------------- curves and Jacobians

inline json encode(const hyperelliptic::HyperCurve& c) { return {{"a", encode(c.a)}, {"f", encode(c.f)}}; }

inline json encode(const hyperelliptic::LPolynomial& L) {
    return {{"q", L.q},
            {"coeffs", L.coeffs},
            {"genus", L.genus()},
            {"functional_equation", L.satisfies_functional_equation()},
            {"jacobian_order", L.at_one()}};
}

// ---------------------------------------------------------------- bounds

inline json encode(const index_bounds::BoundReport& r) {
    json j = {{"p", r.p},
              {"D_p", encode(r.d_p)},
              {"s_bound", encode(r.s_bound)},
              {"rank_bound", encode(r.rank_bound)},
              {"hbar_bound", encode(r.hbar_bound)},
              {"crude_log", encode(r.crude_log)},
              {"s_phi", encode(r.s_phi)},
              {"n_real", encode(r.n_real)},
              {"n_bound", encode(r.n_bound)},
              {"precision", r.precision}};
    if (r.reference_n_bound) {
        j["stated_n_bound"] = encode(*r.reference_n_bound);
        j["discrepancy"] = r.discrepancy;
    }
    return j;
}

inline json encode(const index_bounds::HeightEstimate& e) {
    return {{"n_iter", e.n_iter}, {"preperiodic", e.preperiodic}, {"value", encode(e.value)}, {"enclosure", encode(e.enclosure)}};
}

inline json encode(const index_bounds::StageInequality& s) {
    json j = {{"largest_n_height_bound", encode(s.largest_n_height_bound)}, {"bound_exceeds_admissible", s.bound_exceeds_admissible}};
    if (s.largest_n_estimate) {
        j["largest_n_estimate"] = encode(*s.largest_n_estimate);
        j["n_bound_admissible"] = s.n_bound_admissible;
    }
    return j;
}

// ---------------------------------------------------------------- sieve

inline json encode(const mwsieve::TorsionCheck& t) {
    return {{"q1", t.q1}, {"q2", t.q2}, {"order1", t.order1}, {"order2", t.order2}, {"gcd", t.gcd}};
}

inline json encode(const mwsieve::IndexCheck& c) {
    json kernel = json::array();
    for (const auto& [a, b] : c.kernel) kernel.push_back({a, b});
    return {{"l", c.l}, {"primes", c.primes}, {"injective", c.injective}, {"kernel", kernel}};
}

inline json encode(const mwsieve::TargetReport& t) {
    json steps = json::array();
    for (const auto& s : t.steps)
        steps.push_back({{"q", s.q},
                         {"order_p0", s.m1},
                         {"order_q0", s.m2},
                         {"local_size", s.local_size},
                         {"lattice", {s.lattice_n1, s.lattice_n2}},
                         {"combined_size", s.combined_size}});
    json remaining = json::array();
    for (const auto& [a, b] : t.remaining) remaining.push_back({a, b});
    return {{"target", {t.target.x, t.target.y}}, {"verdict", mwsieve::to_string(t.verdict)}, {"steps", steps}, {"remaining", remaining}};
}

inline json encode(const mwsieve::SieveReport& r) {
    json targets = json::array(), controls = json::array();
    for (const auto& t : r.targets) targets.push_back(encode(t));
    for (const auto& t : r.controls) controls.push_back(encode(t));
    return {{"config", r.config_name},
            {"sieve_primes", r.sieve_primes},
            {"target_prime", r.target_prime},
            {"targets", targets},
            {"controls", controls},
            {"assumptions", r.assumptions},
            {"passed", r.passed()}};
}

inline json encode(const mwsieve::RationalPointsReport& r) {
    json torsion = json::array(), index = json::array(), outcomes = json::array();
    for (const auto& t : r.torsion) torsion.push_back(encode(t));
    for (const auto& c : r.index_checks) index.push_back(encode(c));
    for (const auto& o : r.outcomes)
        outcomes.push_back({{"point", o.point.to_string()}, {"multi_point", o.multi_point}, {"status", mwsieve::to_string(o.status)}});
    return {{"torsion", torsion},
            {"index_checks", index},
            {"classes", outcomes},
            {"sieve", encode(r.sieve)},
            {"known_points", r.known_points},
            {"complete", r.complete}};
}

// ---------------------------------------------------------------- Eisenstein

inline json encode(const eisenstein::ConjugateFamilyCertificate& c) {
    json vals = json::array();
    for (const auto& v : c.orbit_valuations) vals.push_back(encode(v));
    json its = json::array();
    for (const auto& it : c.iterates)
        its.push_back({{"n", it.n},
                       {"coverage", it.direct ? "direct" : "indirect"},
                       {"eisenstein", it.eisenstein},
                       {"constant_term_matches_orbit", it.constant_term_matches_orbit}});
    return {{"p", c.p},
            {"i", c.i},
            {"n_max", c.n_max},
            {"degree_cap", c.degree_cap},
            {"orbit_identity", c.orbit_identity},
            {"unit_twist_identity", c.unit_twist_identity},
            {"translate_eisenstein", c.translate_eisenstein},
            {"orbit_valuations", vals},
            {"iterates", its},
            {"passed", c.passed()}};
}

// ---------------------------------------------------------------- decoding

inline BigInt decode_int(const json& j) {
    if (j.is_string()) return BigInt(j.get<std::string>());
    if (j.is_number_integer()) return BigInt(j.get<long>());
    throw Error("expected an integer or decimal string");
}

inline std::vector<BigInt> decode_ints(const json& j) {
    if (!j.is_array()) throw Error("expected an array of integers");
    std::vector<BigInt> out;
    for (const auto& x : j) out.push_back(decode_int(x));
    return out;
}

inline json read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw Error("invalid JSON in " + path + ": " + e.what());
    }
}

// {"name": ..., "a": 1, "f": [c_0, ..., c_d]}
inline hyperelliptic::HyperCurve decode_curve(const json& j) {
    hyperelliptic::HyperCurve c{decode_int(j.at("a")), decode_ints(j.at("f"))};
    if (c.a == 0 || c.degree() < 3) throw Error("curve needs a != 0 and deg f >= 3");
    return c;
}

inline mwsieve::RationalDivisor decode_divisor(const json& j) { return {decode_ints(j.at("u")), decode_ints(j.at("v"))}; }

inline std::vector<mwsieve::SieveTarget> decode_targets(const json& j) {
    std::vector<mwsieve::SieveTarget> out;
    for (const auto& t : j) out.push_back({t.at(0).get<std::uint64_t>(), t.at(1).get<std::uint64_t>()});
    return out;
}

inline json encode(const mwsieve::RationalDivisor& d) { return {{"u", encode(d.u)}, {"v", encode(d.v)}}; }

inline json encode(const mwsieve::SieveConfig& c) {
    json sets = json::object();
    for (const auto& [l, S] : c.index_sets) sets[std::to_string(l)] = S;
    json targets = json::array(), controls = json::array();
    for (const auto& t : c.targets) targets.push_back({t.x, t.y});
    for (const auto& t : c.controls) controls.push_back({t.x, t.y});
    return {{"name", c.name},
            {"curve", encode(c.curve)},
            {"generators", {{"P0", encode(c.p0)}, {"Q0", encode(c.q0)}}},
            {"index_sets", sets},
            {"sieve_primes", c.sieve_primes},
            {"target_prime", c.target_prime},
            {"targets", targets},
            {"controls", controls},
            {"differential", c.differential}};
}

inline mwsieve::SieveConfig decode_sieve_config(const json& j) {
    mwsieve::SieveConfig c;
    try {
        c.name = j.value("name", "custom");
        c.curve = decode_curve(j.at("curve"));
        c.p0 = decode_divisor(j.at("generators").at("P0"));
        c.q0 = decode_divisor(j.at("generators").at("Q0"));
        for (const auto& [l, S] : j.at("index_sets").items())
            c.index_sets[static_cast<unsigned>(std::stoul(l))] = S.get<std::vector<std::uint64_t>>();
        c.sieve_primes = j.at("sieve_primes").get<std::vector<std::uint64_t>>();
        c.target_prime = j.at("target_prime").get<std::uint64_t>();
        c.targets = decode_targets(j.at("targets"));
        c.controls = decode_targets(j.value("controls", json::array()));
        c.differential = j.value("differential", std::vector<std::uint64_t>{});
    } catch (const json::exception& e) {
        throw Error(std::string("invalid sieve config: ") + e.what());
    }
    return c;
}

inline std::vector<quadfamily::CaseRule> decode_case_rules(const json& j) {
    std::vector<quadfamily::CaseRule> out;
    try {
        for (const auto& r : j)
            out.push_back({r.at("name").get<std::string>(), r.at("modulus").get<std::uint64_t>(),
                           r.at("residues").get<std::vector<std::uint64_t>>(), r.at("cycle").get<std::vector<std::uint64_t>>(),
                           r.at("threshold").get<unsigned>()});
    } catch (const json::exception& e) {
        throw Error(std::string("invalid case rules: ") + e.what());
    }
    return out;
}

// {"p": {"units": [[c_0, ...], ...], "primes": [[a, b], ...]}}; units exclude zeta.
struct UnicriticalInputs {
    maximality::UnitBasis basis;
    std::vector<maximality::PrimeSpec> primes;
};

inline UnicriticalInputs decode_unicritical(const json& j, unsigned p) {
    const auto key = std::to_string(p);
    if (!j.contains(key)) throw Error("no unit basis for p = " + key);
    cyclotomic::Context ctx(p);
    std::vector<cyclotomic::CycInt> units;
    std::vector<maximality::PrimeSpec> primes;
    try {
        for (const auto& u : j.at(key).at("units")) {
            const auto c = decode_ints(u);
            units.emplace_back(ctx, std::span<const BigInt>(c));
        }
        for (const auto& s : j.at(key).at("primes")) primes.push_back({s.at(0).get<long>(), s.at(1).get<long>()});
    } catch (const json::exception& e) {
        throw Error(std::string("invalid unit basis data: ") + e.what());
    }
    return {maximality::UnitBasis(ctx, std::move(units)), std::move(primes)};
}

inline json encode_unicritical(const maximality::UnitBasis& basis, const std::vector<maximality::PrimeSpec>& primes) {
    json units = json::array(), ps = json::array();
    for (const auto& u : basis.free_gens) units.push_back(encode(u));
    for (const auto& s : primes) ps.push_back({s.a, s.b});
    return {{"units", units}, {"primes", ps}};
}

inline std::map<std::uint64_t, std::uint64_t> decode_reference_moduli(const json& j) {
    std::map<std::uint64_t, std::uint64_t> out;
    for (const auto& [p, m] : j.items()) out[std::stoull(p)] = m.get<std::uint64_t>();
    return out;
}

inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace arboreal::serialize
