#include "arboreal/serialize.hpp"

#include <gtest/gtest.h>

using namespace arboreal;
using namespace arboreal::serialize;

namespace {

json data(const std::string& name) { return read_file(std::string(ARBOREAL_DATA_DIR) + "/" + name); }

}  // namespace

TEST(DataFiles, CurvesMatchBuiltins) {
    const std::vector<std::pair<std::string, hyperelliptic::HyperCurve>> curves{
        {"C1", hyperelliptic::curve_c1()}, {"C2", hyperelliptic::curve_c2()}, {"X1", hyperelliptic::curve_x1()}, {"X2", hyperelliptic::curve_x2()}};
    for (const auto& [name, builtin] : curves) {
        auto c = decode_curve(data(name + ".json"));
        EXPECT_EQ(c.a, builtin.a) << name;
        EXPECT_EQ(c.f, builtin.f) << name;
    }
}

TEST(DataFiles, SievePresetMatchesBuiltin) {
    auto c = decode_sieve_config(data("paper-C2.json"));
    EXPECT_EQ(encode(c), encode(mwsieve::preset_c2()));
}

TEST(DataFiles, CaseRulesMatchBuiltin) {
    auto rules = decode_case_rules(data("case_rules.json"));
    json a = json::array(), b = json::array();
    for (const auto& r : rules) a.push_back(encode(r));
    for (const auto& r : quadfamily::case_rules()) b.push_back(encode(r));
    EXPECT_EQ(a, b);
}

TEST(DataFiles, ReferenceModuliMatchBuiltin) {
    EXPECT_EQ(decode_reference_moduli(data("reference_moduli.json")), quadfamily::reference_exceptional_moduli());
}

TEST(DataFiles, UnitBasesMatchBuiltin) {
    const auto j = data("unit_bases.json");
    for (unsigned p : {3u, 5u, 7u}) {
        auto in = decode_unicritical(j, p);
        EXPECT_EQ(encode_unicritical(in.basis, in.primes), encode_unicritical(*maximality::default_unit_basis(p), maximality::default_prime_list(p)));
    }
    EXPECT_THROW(decode_unicritical(j, 11), Error);
}

TEST(Decode, RejectsMalformedInput) {
    EXPECT_THROW(decode_curve(json{{"a", "1"}, {"f", {"1", "1"}}}), Error);
    EXPECT_THROW(decode_curve(json{{"a", "0"}, {"f", {"1", "0", "0", "1"}}}), Error);
    EXPECT_THROW(decode_sieve_config(json{{"name", "x"}}), Error);
    EXPECT_THROW(decode_int(json(1.5)), Error);
    EXPECT_THROW(decode_case_rules(json::array({json{{"name", "r"}}})), Error);
    // A non-unit in the basis is rejected by the basis itself.
    json bad = {{"5", {{"units", {{"2"}}}, {"primes", json::array()}}}};
    EXPECT_THROW(decode_unicritical(bad, 5), Error);
}

TEST(Encode, BigIntegersAreDecimalStrings) {
    BigInt big("123456789012345678901234567890");
    EXPECT_EQ(encode(big), json("123456789012345678901234567890"));
    EXPECT_EQ(decode_int(encode(big)), big);
    EXPECT_EQ(decode_int(json(-7)), BigInt(-7));
}

TEST(Encode, SieveConfigRoundTrip) {
    auto c = mwsieve::preset_c2();
    EXPECT_EQ(encode(decode_sieve_config(encode(c))), encode(c));
}

TEST(Encode, CertificatesAreDeterministic) {
    auto a = dump(encode(quadfamily::sweep(200, 1)));
    auto b = dump(encode(quadfamily::sweep(200, 3)));
    EXPECT_EQ(a, b);
    auto j = encode(quadfamily::sweep(200, 1));
    EXPECT_EQ(j["counts"]["sieved"], 46);
    EXPECT_EQ(j["exceptional"], json::array());
    EXPECT_TRUE(j["exceptional_matches_stated"].get<bool>());
}

TEST(Encode, JacobianOrderField) {
    auto j = encode(hyperelliptic::l_polynomial(hyperelliptic::curve_c2(), 11));
    EXPECT_EQ(j["jacobian_order"], 1351);
    EXPECT_TRUE(j["functional_equation"].get<bool>());
}
