#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "qpgerm/germ_io.hpp"
#include "qpgerm/resonance.hpp"
#include "resonance_oracle.hpp"

using namespace qpgerm;
using qpgerm::testing::OracleRelation;
using qpgerm::testing::oracle;

namespace {

std::vector<OracleRelation> strip(const std::vector<ResonanceRelation>& rs)
{
    std::vector<OracleRelation> out;
    for (const auto& r : rs) out.push_back({r.s, r.beta});
    return out;
}

const long double golden = (3.0L - std::sqrt(5.0L)) / 2.0L;

} // namespace

TEST_CASE("golden pair relations match the brute-force oracle")
{
    const Spectrum spec(golden_pair_angles());
    for (int D = 2; D <= 9; ++D) {
        const auto expected = oracle({golden, 1.0L - golden}, D, 1e-8L);
        CHECK(strip(find_resonances(spec, D)) == expected);
    }
    // frozen: bound 6 gives k alpha + e_s for k = 1, 2
    const auto rels = strip(find_resonances(spec, 6));
    const std::vector<OracleRelation> frozen{{1, {2, 1}}, {2, {1, 2}}, {1, {3, 2}}, {2, {2, 3}}};
    CHECK(rels == frozen);
    CHECK(find_resonances(spec, 2).empty());
    CHECK(find_resonances(spec, 5).size() == 4);
}

TEST_CASE("second spectrum carries a relation at degree four")
{
    // theta_2 = sqrt 5 - 2 = 1 - 2 theta_1, so lambda_1^2 lambda_2 = 1
    const long double t2 = std::sqrt(5.0L) - 2.0L;
    const Spectrum spec({static_cast<double>(golden), static_cast<double>(t2)});
    const auto expected = oracle({golden, t2}, 6, 1e-8L);
    CHECK(strip(find_resonances(spec, 6)) == expected);
    REQUIRE(!expected.empty());
    CHECK(expected.front() == OracleRelation{1, {3, 1}});

    const auto cert = certify_one_resonance(spec, {1, 1}, 6);
    CHECK(cert.verdict == CertificateVerdict::refuted);
}

TEST_CASE("a resonance-free spectrum is inconclusive for alpha = (1,1)")
{
    const std::vector<double> theta{static_cast<double>(golden), std::sqrt(2.0) - 1.0};
    const Spectrum spec(theta);
    CHECK(oracle({golden, std::sqrt(2.0L) - 1.0L}, 6, 1e-8L).empty());
    const auto cert = certify_one_resonance(spec, {1, 1}, 6);
    CHECK(cert.relations.empty());
    CHECK(cert.verdict == CertificateVerdict::inconclusive);
}

TEST_CASE("certificate verdicts on the golden pair")
{
    const Spectrum spec(golden_pair_angles());
    const auto ok = certify_one_resonance(spec, {1, 1}, 6);
    CHECK(ok.verdict == CertificateVerdict::certified);
    CHECK(ok.holds());
    CHECK(ok.alpha_unit_residual < 1e-12);

    const auto bad = certify_one_resonance(spec, {2, 1}, 6);
    CHECK(bad.verdict == CertificateVerdict::refuted);
    REQUIRE(bad.witness);
    CHECK(bad.witness->s == 1);
    CHECK(bad.witness->beta == std::vector<int>{2, 1});

    const auto asserted = assert_one_resonance(spec, {1, 1});
    CHECK(asserted.verdict == CertificateVerdict::asserted);
    CHECK(asserted.relations.empty());
}

TEST_CASE("one_resonant_power")
{
    CHECK(one_resonant_power({1, 1}, {2, 1}, 1) == 1);
    CHECK(one_resonant_power({1, 1}, {3, 3}, 2) == std::nullopt);
    CHECK(one_resonant_power({1, 1}, {3, 4}, 2) == 3);
    CHECK(one_resonant_power({2, 1}, {3, 1}, 1) == 1);
    CHECK(one_resonant_power({1, 1}, {1, 0}, 1) == std::nullopt);
}

TEST_CASE("spectrum validation")
{
    const double g = static_cast<double>(golden);
    const double r2 = std::sqrt(2.0) - 1.0;
    CHECK_THROWS_AS(Spectrum({0.25, g}), Error);         // i is a root of unity
    CHECK_THROWS_AS(Spectrum({0.3, g}), Error);          // order 10
    CHECK_THROWS_AS(Spectrum({g, 1.0 + g}), Error);      // equal after reduction
    CHECK_THROWS_AS(Spectrum({1.0 / 64.0, g}), Error);   // order 64
    CHECK_NOTHROW(Spectrum({1.0 / 67.0, g}));            // order above the bound
    const Spectrum s({1.0 + g, -r2});
    CHECK(s.theta()[0] == doctest::Approx(g));
    CHECK(s.theta()[1] == doctest::Approx(1.0 - r2));
    CHECK(dist_to_integer(2.9999) == doctest::Approx(1e-4));
}

TEST_CASE("candidate count and enumeration cap")
{
    // n = 2: (D+1)(D+2)/2 - 3 multi-indices with 2 <= |beta| <= D, times n targets
    CHECK(resonance_candidate_count(2, 6) == 2 * (28 - 3));
    const Spectrum spec(golden_pair_angles());
    ResonanceOptions opts;
    opts.enumeration_cap = 10;
    CHECK_THROWS_AS(find_resonances(spec, 6, opts), Error);
    CHECK_THROWS_AS(certify_one_resonance(spec, {1, 1}, 6, opts), Error);
}

TEST_CASE("certified verdict is stable as the degree bound grows")
{
    const Spectrum spec(golden_pair_angles());
    for (int D = 2; D <= 14; ++D) CHECK(certify_one_resonance(spec, {1, 1}, D).verdict == CertificateVerdict::certified);
}
