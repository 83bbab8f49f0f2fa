#include "arboreal/cli.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>

namespace {

using arboreal::cli::json;

std::string utc_now() {
    const std::time_t t = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

// Certificate body plus a detached metadata file; only the metadata carries a timestamp.
void write_certificate(const std::string& path, const json& doc, const std::string& command_line) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw arboreal::Error("cannot write " + path);
    out << arboreal::serialize::dump(doc);
    std::ofstream meta(path + ".meta.json", std::ios::binary);
    if (!meta) throw arboreal::Error("cannot write " + path + ".meta.json");
    json m = {{"certificate", std::filesystem::path(path).filename().string()},
              {"tool", "arboreal"},
              {"version", arboreal::kVersion},
              {"command_line", command_line},
              {"created_utc", utc_now()}};
    meta << arboreal::serialize::dump(m);
}

}  // namespace

int main(int argc, char** argv) {
    arboreal::cli::RunConfig cfg;
    bool as_json = false;
    std::string out;

    CLI::App app{"Certificates for arboreal Galois computations"};
    app.set_version_flag("--version", arboreal::kVersion);
    app.require_subcommand(1);
    app.fallthrough();
    app.add_flag("--json", as_json, "Print the JSON certificate instead of the text summary");
    app.add_option("--out", out, "Write the certificate here (default: $ARBOREAL_OUTPUT_DIR/<command>.json when set)");
    app.add_option("--jobs", cfg.jobs, "Worker threads (0 = all cores)")->check(CLI::NonNegativeNumber);

    auto* uni = app.add_subcommand("verify-unicritical", "Tuple elimination for (x - 1)^p + 2 - zeta_p");
    uni->add_option("--p", cfg.p, "3, 5 or 7 (other odd primes need --units)")->required();
    uni->add_option("--units", cfg.units_file, "Unit basis and residue primes (JSON)")->check(CLI::ExistingFile);

    auto* quad = app.add_subcommand("verify-quadratic", "Congruence sweep for (x - p)^2 + 2p - p^2 over primes below --pmax");
    quad->add_option("--pmax", cfg.pmax, "Exclusive prime bound")->required();
    quad->add_option("--rules", cfg.rules_file, "Case rules (JSON)")->check(CLI::ExistingFile);

    auto* bnd = app.add_subcommand("bound", "Certified n_bound and canonical height at 0 for x^p + 1 - zeta_p");
    bnd->add_option("--p", cfg.p, "Odd prime")->required();
    bnd->add_option("--precision", cfg.precision, "Decimal digits of working precision");
    bnd->add_option("--height-iterations", cfg.height_iterations, "Iterates used for the height estimate");

    auto* jac = app.add_subcommand("jacobian-order", "Jacobian order over F_q from the L-polynomial");
    jac->add_option("--curve", cfg.curve, "Curve JSON file or built-in name (C1, C2, X1, X2)")->required();
    jac->add_option("--q", cfg.q, "Odd prime of good reduction")->required();

    auto* mws = app.add_subcommand("mwsieve", "Torsion, index and Mordell-Weil sieve checks");
    mws->add_option("--preset", cfg.preset, "Built-in configuration (paper-C2)");
    mws->add_option("--config", cfg.config_file, "Sieve configuration (JSON)")->check(CLI::ExistingFile);

    auto* eis = app.add_subcommand("eisenstein", "Eisenstein certificates for (x - zeta^i)^p + 1 + zeta^i - zeta");
    eis->add_option("--p", cfg.p, "Odd prime")->required();
    eis->add_option("--i", cfg.i, "2 <= i <= p (default: all)");
    eis->add_option("--nmax", cfg.nmax, "Number of iterates");

    app.add_subcommand("reproduce-paper", "Run every computation and emit one consolidated report");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }
    cfg.subcommand = app.get_subcommands().front()->get_name();

    std::string command_line;
    for (int k = 0; k < argc; ++k) command_line += (k ? " " : "") + std::string(argv[k]);

    try {
        const auto outcome = arboreal::cli::dispatch(cfg);
        if (out.empty())
            if (const char* dir = std::getenv("ARBOREAL_OUTPUT_DIR"); dir && *dir)
                out = (std::filesystem::path(dir) / (cfg.subcommand + ".json")).string();
        if (!out.empty()) write_certificate(out, outcome.document, command_line);
        std::cout << (as_json ? arboreal::serialize::dump(outcome.document) : arboreal::cli::render_text(outcome.document));
        return outcome.exit_code;
    } catch (const arboreal::cli::UsageError& e) {
        std::cerr << "error: " << e.what() << "\n\n" << app.help();
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
