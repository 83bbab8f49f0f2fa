#pragma once

// Subcommand dispatch and text rendering for the arboreal tool. Every run
// produces one JSON document; the text view is rendered from it.

#include "arboreal/serialize.hpp"

#include <filesystem>
#include <future>
#include <functional>
#include <sstream>

namespace arboreal::cli {

using serialize::json;

class UsageError : public Error {
public:
    using Error::Error;
};

struct RunConfig {
    std::string subcommand;
    unsigned p = 0;
    long i = 0;                    // 0: every i in [2, p]
    std::uint64_t pmax = 5000;
    unsigned precision = 50;       // decimal digits
    unsigned nmax = 4;
    unsigned height_iterations = 0;  // 0: chosen from p
    std::string curve;
    std::uint64_t q = 0;
    std::string preset;
    std::string config_file;
    std::string rules_file;
    std::string units_file;
    unsigned jobs = 0;             // 0: hardware concurrency
};

struct Outcome {
    int exit_code = 0;
    json document;
};

namespace detail {

struct Section {
    json config;
    json result;
    bool positive = false;
};

inline bool file_exists(const std::string& path) { return !path.empty() && std::filesystem::is_regular_file(path); }

// A path to a curve file, or one of the built-in names C1, C2, X1, X2 (".json" optional).
inline std::pair<std::string, hyperelliptic::HyperCurve> resolve_curve(const std::string& arg) {
    if (file_exists(arg)) {
        const auto j = serialize::read_file(arg);
        return {j.value("name", std::filesystem::path(arg).stem().string()), serialize::decode_curve(j)};
    }
    std::string name = arg;
    if (name.size() > 5 && name.ends_with(".json")) name.resize(name.size() - 5);
    if (name == "C1") return {name, hyperelliptic::curve_c1()};
    if (name == "C2") return {name, hyperelliptic::curve_c2()};
    if (name == "X1") return {name, hyperelliptic::curve_x1()};
    if (name == "X2") return {name, hyperelliptic::curve_x2()};
    throw UsageError("unknown curve '" + arg + "' (not a file and not one of C1, C2, X1, X2)");
}

inline unsigned workers(unsigned jobs) { return jobs ? jobs : std::max(1u, std::thread::hardware_concurrency()); }

// Runs tasks with at most `jobs` in flight; results keep task order.
inline std::vector<Section> run_ordered(const std::vector<std::function<Section()>>& tasks, unsigned jobs) {
    std::vector<Section> out(tasks.size());
    const std::size_t width = workers(jobs);
    for (std::size_t start = 0; start < tasks.size(); start += width) {
        std::vector<std::future<Section>> batch;
        for (std::size_t k = start; k < std::min(tasks.size(), start + width); ++k)
            batch.push_back(std::async(width == 1 ? std::launch::deferred : std::launch::async, tasks[k]));
        for (std::size_t k = 0; k < batch.size(); ++k) out[start + k] = batch[k].get();
    }
    return out;
}

inline Section unicritical(unsigned p, const std::string& units_file) {
    maximality::Config mc;
    Section s;
    s.config = {{"p", p}};
    if (!units_file.empty()) {
        auto in = serialize::decode_unicritical(serialize::read_file(units_file), p);
        s.config["inputs"] = serialize::encode_unicritical(in.basis, in.primes);
        mc.basis = std::move(in.basis);
        mc.primes = std::move(in.primes);
    } else {
        if (p != 3 && p != 5 && p != 7) throw UsageError("--p must be 3, 5 or 7 without --units");
        s.config["inputs"] = serialize::encode_unicritical(*maximality::default_unit_basis(p), maximality::default_prime_list(p));
    }
    const auto cert = maximality::verify_unicritical(p, mc);
    s.result = serialize::encode(cert);
    s.positive = cert.verdict == maximality::Verdict::surjective;
    return s;
}

inline Section quadratic(std::uint64_t pmax, unsigned jobs, const std::string& rules_file) {
    if (pmax < 3) throw UsageError("--pmax must be at least 3");
    const auto rules = rules_file.empty() ? quadfamily::case_rules() : serialize::decode_case_rules(serialize::read_file(rules_file));
    Section s;
    json rj = json::array();
    for (const auto& r : rules) rj.push_back(serialize::encode(r));
    s.config = {{"pmax", pmax}, {"rules", rj}};
    const auto rep = quadfamily::sweep(pmax, jobs, rules);
    s.result = serialize::encode(rep);
    s.positive = !rep.failure() && std::all_of(rep.rules.begin(), rep.rules.end(), [](const auto& r) { return r.passed; });
    return s;
}

inline Section shifted_family(const std::vector<std::uint64_t>& primes, long point_bound) {
    Section s;
    s.config = {{"primes", primes}, {"integral_point_bound", point_bound}};
    s.positive = true;
    json certs = json::array();
    for (auto p : primes) {
        const auto c = quadfamily::shifted_family_check(p);
        certs.push_back(serialize::encode(c));
        s.positive = s.positive && c.passed;
    }
    json points = json::object();
    for (const auto& [name, curve] : {std::pair{"X1", hyperelliptic::curve_x1()}, std::pair{"C1", hyperelliptic::curve_c1()}}) {
        json pts = json::array();
        for (const auto& [x, y] : quadfamily::bounded_integral_points(curve, point_bound))
            pts.push_back({serialize::encode(x), serialize::encode(y)});
        points[name] = pts;
    }
    s.result = {{"certificates", certs}, {"integral_points", points}};
    return s;
}

inline Section bound(unsigned p, unsigned precision, unsigned height_iterations) {
    if (p < 3 || !is_prime(static_cast<std::uint64_t>(p))) throw UsageError("--p must be an odd prime");
    if (precision < 30) throw UsageError("--precision must be at least 30 digits");
    const unsigned n_iter = height_iterations ? height_iterations : (p <= 7 ? 5 : 3);
    if (n_iter < 3) throw UsageError("--height-iterations must be at least 3");
    Section s;
    s.config = {{"p", p}, {"precision", precision}, {"height_iterations", n_iter}};
    const auto rep = index_bounds::bound_report(p, precision);
    cyclotomic::Context ctx(p);
    const auto h = index_bounds::canonical_height_estimate(dynamics::unicritical_delta(ctx), cyclotomic::CycInt(ctx), n_iter, precision);
    std::optional<index_bounds::Interval> lower;
    if (h.enclosure.positive()) lower = h.enclosure;
    const auto st = index_bounds::stage_inequality(rep, lower);
    s.result = {{"bound", serialize::encode(rep)}, {"height_at_zero", serialize::encode(h)}, {"stage_inequality", serialize::encode(st)}};
    s.positive = !h.preperiodic && h.enclosure.positive() && st.bound_exceeds_admissible;
    return s;
}

inline Section jacobian(const std::string& curve_arg, std::uint64_t q) {
    const auto [name, curve] = resolve_curve(curve_arg);
    if (!hyperelliptic::has_good_reduction(curve, q)) throw UsageError("curve has bad reduction at q = " + std::to_string(q));
    Section s;
    s.config = {{"curve", name}, {"equation", serialize::encode(curve)}, {"q", q}};
    const auto L = hyperelliptic::l_polynomial(curve, q);
    s.result = serialize::encode(L);
    s.positive = L.satisfies_functional_equation();
    return s;
}

inline Section jacobian_table(const std::vector<std::pair<std::string, std::vector<std::uint64_t>>>& rows,
                              const std::vector<std::tuple<std::string, std::uint64_t, std::uint64_t>>& torsion) {
    Section s;
    s.positive = true;
    json orders = json::array(), checks = json::array(), cfg_rows = json::array();
    for (const auto& [name, qs] : rows) {
        cfg_rows.push_back({{"curve", name}, {"q", qs}});
        for (auto q : qs) {
            auto sec = jacobian(name, q);
            orders.push_back({{"curve", name}, {"q", q}, {"jacobian_order", sec.result["jacobian_order"]}});
            s.positive = s.positive && sec.positive;
        }
    }
    json cfg_torsion = json::array();
    for (const auto& [name, q1, q2] : torsion) {
        cfg_torsion.push_back({{"curve", name}, {"q", {q1, q2}}});
        const auto t = mwsieve::torsion_gcd_check(resolve_curve(name).second, q1, q2);
        checks.push_back(serialize::encode(t));
        s.positive = s.positive && t.gcd == 1;
    }
    s.config = {{"orders", cfg_rows}, {"torsion", cfg_torsion}};
    s.result = {{"orders", orders}, {"torsion", checks}};
    return s;
}

inline Section sieve(const std::string& preset, const std::string& config_file) {
    if (preset.empty() == config_file.empty()) throw UsageError("give exactly one of --preset or --config");
    mwsieve::SieveConfig config;
    std::vector<std::pair<std::uint64_t, std::uint64_t>> torsion;
    if (!preset.empty()) {
        if (preset != "paper-C2") throw UsageError("unknown preset '" + preset + "' (available: paper-C2)");
        config = mwsieve::preset_c2();
        torsion = {{3, 11}};
    } else {
        const auto j = serialize::read_file(config_file);
        config = serialize::decode_sieve_config(j);
        for (const auto& t : j.value("torsion_pairs", json::array())) torsion.push_back({t.at(0).get<std::uint64_t>(), t.at(1).get<std::uint64_t>()});
    }
    Section s;
    json cfg = serialize::encode(config);
    json tp = json::array();
    for (const auto& [a, b] : torsion) tp.push_back({a, b});
    cfg["torsion_pairs"] = tp;
    s.config = cfg;
    const auto rep = mwsieve::rational_points_pipeline(config, torsion);
    s.result = serialize::encode(rep);
    bool torsion_ok = std::all_of(rep.torsion.begin(), rep.torsion.end(), [](const auto& t) { return t.gcd == 1; });
    bool index_ok = std::all_of(rep.index_checks.begin(), rep.index_checks.end(), [](const auto& c) { return c.injective; });
    s.positive = torsion_ok && index_ok && rep.sieve.passed() && rep.complete;
    return s;
}

inline Section eisenstein_family(unsigned p, long i, unsigned nmax) {
    if (p < 3 || !is_prime(static_cast<std::uint64_t>(p))) throw UsageError("--p must be an odd prime");
    if (i != 0 && (i < 2 || i > static_cast<long>(p))) throw UsageError("--i must satisfy 2 <= i <= p");
    if (nmax == 0) throw UsageError("--nmax must be positive");
    Section s;
    s.config = {{"p", p}, {"i", i == 0 ? json("all") : json(i)}, {"nmax", nmax}};
    s.positive = true;
    json certs = json::array();
    for (long k = i == 0 ? 2 : i; k <= (i == 0 ? static_cast<long>(p) : i); ++k) {
        const auto c = eisenstein::conjugate_family_check(p, k, nmax);
        certs.push_back(serialize::encode(c));
        s.positive = s.positive && c.passed();
    }
    s.result = {{"certificates", certs}};
    return s;
}

inline Section reproduce(unsigned jobs) {
    std::vector<std::pair<std::string, std::function<Section()>>> parts{
        {"unicritical_p3", [] { return unicritical(3, ""); }},
        {"unicritical_p5", [] { return unicritical(5, ""); }},
        {"unicritical_p7", [] { return unicritical(7, ""); }},
        {"quadratic", [jobs] { return quadratic(5000, jobs, ""); }},
        {"shifted_family", [] { return shifted_family({3, 5, 7, 17}, 100000); }},
        {"eisenstein_p3", [] { return eisenstein_family(3, 0, 4); }},
        {"eisenstein_p5", [] { return eisenstein_family(5, 0, 3); }},
        {"eisenstein_p7", [] { return eisenstein_family(7, 0, 3); }},
        {"jacobians",
         [] { return jacobian_table({{"C2", {3, 5, 11}}, {"X2", {3, 5}}}, {{"C2", 3, 11}, {"X2", 3, 5}}); }},
        {"mwsieve", [] { return sieve("paper-C2", ""); }},
        {"bound_p3", [] { return bound(3, 50, 0); }},
    };
    std::vector<std::function<Section()>> tasks;
    for (const auto& [name, f] : parts) tasks.push_back(f);
    // The sweep parallelises internally; the outer level runs sections one at a time
    // unless more than one job is requested.
    const auto sections = run_ordered(tasks, jobs == 1 ? 1 : std::min<unsigned>(workers(jobs), 4));
    Section s;
    s.config = json::object();
    s.result = json::object();
    json summary = json::object();
    s.positive = true;
    for (std::size_t k = 0; k < parts.size(); ++k) {
        s.config[parts[k].first] = sections[k].config;
        s.result[parts[k].first] = sections[k].result;
        summary[parts[k].first] = sections[k].positive ? "positive" : "negative";
        s.positive = s.positive && sections[k].positive;
    }
    s.result["summary"] = summary;
    return s;
}

}  // namespace detail

inline const std::vector<std::string>& subcommands() {
    static const std::vector<std::string> names{"verify-unicritical", "verify-quadratic", "bound", "jacobian-order",
                                                "mwsieve",            "eisenstein",       "reproduce-paper"};
    return names;
}

// Throws UsageError for invalid parameters; other errors propagate as Error.
inline Outcome dispatch(const RunConfig& c) {
    detail::Section s;
    const auto& sub = c.subcommand;
    if (sub == "verify-unicritical") s = detail::unicritical(c.p, c.units_file);
    else if (sub == "verify-quadratic") s = detail::quadratic(c.pmax, c.jobs, c.rules_file);
    else if (sub == "bound") s = detail::bound(c.p, c.precision, c.height_iterations);
    else if (sub == "jacobian-order") s = detail::jacobian(c.curve, c.q);
    else if (sub == "mwsieve") s = detail::sieve(c.preset, c.config_file);
    else if (sub == "eisenstein") s = detail::eisenstein_family(c.p, c.i, c.nmax);
    else if (sub == "reproduce-paper") s = detail::reproduce(c.jobs);
    else throw UsageError("unknown subcommand '" + sub + "'");
    Outcome o;
    o.exit_code = s.positive ? 0 : 1;
    o.document = {{"tool", "arboreal"},
                  {"version", kVersion},
                  {"command", sub},
                  {"config", s.config},
                  {"verdict", s.positive ? "positive" : "negative"},
                  {"result", s.result}};
    return o;
}

// ---------------------------------------------------------------- text view

namespace detail {

inline std::string str(const json& j) { return j.is_string() ? j.get<std::string>() : j.dump(); }

inline void render_unicritical(std::ostream& os, const json& r) {
    os << "p = " << r["p"] << ": norm tests n <= " << r["n_direct"] << ", " << r["stages"].size() << " residue primes\n";
    for (const auto& st : r["stages"])
        os << "  prime " << st["prime"]["a"] << " + " << st["prime"]["b"] << " zeta  |F| = " << st["ell"] << "  cycle "
           << st["cycle"].dump() << " from n = " << st["tail"] << "  survivors " << st["survivors"].size() << "\n";
    os << "  verdict " << str(r["verdict"]) << "\n";
}

inline void render_quadratic(std::ostream& os, const json& r) {
    const auto& c = r["counts"];
    os << "primes below " << r["p_max"] << ": sieved " << c["sieved"] << ", obstructed " << c["obstructed"] << ", in scope "
       << c["in_scope"] << ", certified " << c["certified"] << "\n";
    std::size_t passed = 0;
    for (const auto& x : r["rules"]) passed += x["passed"].get<bool>();
    os << "case rules passed: " << passed << "/" << r["rules"].size() << "\n";
    os << "exceptional primes: " << r["exceptional"].dump() << "\n";
    if (!r["exceptional_matches_stated"].get<bool>())
        os << "  differs from the stated list: extra " << r["exceptional_extra"].dump() << ", missing "
           << r["exceptional_missing"].dump() << "\n";
    for (const auto& m : r["stated_moduli"])
        os << "  p = " << m["p"] << ": stated modulus " << m["stated_modulus"] << (m["stated_modulus_works"].get<bool>() ? " works" : " FAILS")
           << ", found " << m["found_modulus"] << "\n";
}

inline void render_bound(std::ostream& os, const json& r) {
    const auto& b = r["bound"];
    os << "p = " << b["p"] << "  D_p = " << str(b["D_p"]) << "  n_bound = " << str(b["n_bound"]) << "\n";
    if (b.contains("stated_n_bound"))
        os << "  stated bound " << str(b["stated_n_bound"]) << (b["discrepancy"].get<bool>() ? " (differs)" : " (agrees)") << "\n";
    const auto& h = r["height_at_zero"];
    os << "  canonical height at 0 in [" << str(h["enclosure"]["lo"]) << ", " << str(h["enclosure"]["hi"]) << "]\n";
    os << "  largest admissible n from the height lower bound: " << str(r["stage_inequality"]["largest_n_height_bound"]) << "\n";
}

inline void render_sieve(std::ostream& os, const json& r) {
    for (const auto& t : r["torsion"])
        os << "torsion: #J(F_" << t["q1"] << ") = " << t["order1"] << ", #J(F_" << t["q2"] << ") = " << t["order2"] << ", gcd "
           << t["gcd"] << "\n";
    for (const auto& c : r["index_checks"])
        os << "index l = " << c["l"] << " primes " << c["primes"].dump() << (c["injective"].get<bool>() ? " injective" : " NOT injective") << "\n";
    const auto& s = r["sieve"];
    for (const char* key : {"targets", "controls"})
        for (const auto& t : s[key]) os << key << " " << t["target"].dump() << ": " << str(t["verdict"]) << "\n";
    for (const auto& c : r["classes"]) os << "class " << str(c["point"]) << ": " << str(c["status"]) << "\n";
    os << "rational points: " << r["known_points"].dump() << (r["complete"].get<bool>() ? " (complete)" : " (incomplete)") << "\n";
}

inline void render_eisenstein(std::ostream& os, const json& r) {
    for (const auto& c : r["certificates"]) {
        std::size_t direct = 0;
        for (const auto& it : c["iterates"]) direct += it["coverage"] == "direct";
        os << "p = " << c["p"] << ", i = " << c["i"] << ": iterates 1.." << c["n_max"] << " Eisenstein (" << direct
           << " expanded), orbit identity " << c["orbit_identity"] << ", translate " << c["translate_eisenstein"] << "\n";
    }
}

}  // namespace detail

inline std::string render_text(const json& doc) {
    std::ostringstream os;
    const std::string cmd = doc["command"];
    const auto& r = doc["result"];
    os << "arboreal " << detail::str(doc["version"]) << " " << cmd << "\n";
    if (cmd == "verify-unicritical") detail::render_unicritical(os, r);
    else if (cmd == "verify-quadratic") detail::render_quadratic(os, r);
    else if (cmd == "bound") detail::render_bound(os, r);
    else if (cmd == "jacobian-order") os << "#J(F_" << r["q"] << ") = " << r["jacobian_order"] << "\n";
    else if (cmd == "mwsieve") detail::render_sieve(os, r);
    else if (cmd == "eisenstein") detail::render_eisenstein(os, r);
    else if (cmd == "reproduce-paper") {
        for (const auto& [name, v] : r["summary"].items()) os << "  " << name << ": " << detail::str(v) << "\n";
        detail::render_quadratic(os, r["quadratic"]);
        for (const auto& o : r["jacobians"]["orders"])
            os << "#J_" << detail::str(o["curve"]) << "(F_" << o["q"] << ") = " << o["jacobian_order"] << "\n";
        detail::render_sieve(os, r["mwsieve"]);
        detail::render_bound(os, r["bound_p3"]);
    }
    os << "verdict: " << detail::str(doc["verdict"]) << "\n";
    return os.str();
}

}  // namespace arboreal::cli
