#include <doctest.h>

#include <sstream>

#include "qpgerm/report.hpp"

using namespace qpgerm;

namespace {

AnalysisReport run(ReferenceGerm which, AnalyzeOptions opts = {})
{
    const auto f = make_reference_germ(which);
    return analyze(f, fnv1a_hex(to_json(f)), opts);
}

std::string text(const AnalysisReport& r)
{
    std::ostringstream os;
    write_analysis(os, r, {});
    return os.str();
}

std::map<int, int> labels(const std::string& csv)
{
    std::map<int, int> out;
    std::istringstream in(csv);
    std::string row;
    std::getline(in, row);
    while (std::getline(in, row)) {
        std::stringstream ss(row);
        std::string cell;
        for (int i = 0; i < 5; ++i) std::getline(ss, cell, ',');
        ++out[std::stoi(cell)];
    }
    return out;
}

} // namespace

TEST_CASE("analysis of the reference germs")
{
    for (auto which : {ReferenceGerm::E1, ReferenceGerm::E2, ReferenceGerm::E3}) {
        const auto r = run(which);
        CHECK(r.theorem_applies);
        CHECK(r.certificate.verdict == CertificateVerdict::certified);
        REQUIRE(r.good_form);
        CHECK(std::abs(static_cast<double>(*r.good_profile.k) * r.good_profile.A - 1.0) < 1e-12);
        for (const auto& c : r.checklist) CHECK_MESSAGE(c.holds, c.name);
    }
    const auto t = text(run(ReferenceGerm::E1));
    CHECK(t.find("verdict.theorem_applies = true") != std::string::npos);
    CHECK(t.find("profile.k = 1  [exact]") != std::string::npos);
    CHECK(text(run(ReferenceGerm::E1)) == t);

    AnalyzeOptions asserted;
    asserted.assert_alpha = true;
    CHECK(run(ReferenceGerm::E1, asserted).certificate.verdict == CertificateVerdict::asserted);
    CHECK(run(ReferenceGerm::E1, asserted).theorem_applies);
}

TEST_CASE("a non-attracting germ fails exactly the attracting item")
{
    auto f = make_reference_germ(ReferenceGerm::E1);
    auto comps = f.germ.components();
    const cplx l2 = f.germ.spectrum().lambda(1);
    comps[2].add_term({0, {1, 2}}, l2 * 2.0); // a_2 = -3 lambda_2 / 2
    const GermFile g{GermMap(f.germ.spectrum(), comps), f.alpha};
    const auto r = analyze(g, "0");
    CHECK(!r.theorem_applies);
    for (const auto& c : r.checklist) CHECK(c.holds == (c.name != "attracting"));
    CHECK(text(r).find("checklist.attracting = false") != std::string::npos);
    CHECK_THROWS_AS(verify(r), Error);
}

TEST_CASE("a refuted certificate fails the checklist")
{
    auto f = make_reference_germ(ReferenceGerm::E1);
    const GermFile g{f.germ, {2, 1}};
    const auto r = analyze(g, "0");
    CHECK(r.certificate.verdict == CertificateVerdict::refuted);
    CHECK(!r.checklist.front().holds);
    CHECK(!r.theorem_applies);
}

TEST_CASE("verification flags short orbits")
{
    VerifyOptions o;
    o.max_iter = 1000;
    o.samples = 200;
    const auto v = verify(run(ReferenceGerm::E2), o);
    REQUIRE(v.petals.size() == 1);
    CHECK(v.petals[0].too_short);
    CHECK(!v.passed);
    std::ostringstream os;
    write_verification(os, v, o);
    CHECK(os.str().find("rates = too-short") != std::string::npos);
}

TEST_CASE("slices")
{
    const auto e1 = run(ReferenceGerm::E1);
    const auto params = calibrated_params(e1, 200, 1);
    SliceSpec spec;
    spec.width = spec.height = 48;
    spec.base = canonical_witness(params.front(), e1.good_profile);
    std::ostringstream os;
    write_slice_csv(os, *e1.good_form, e1.good_profile, params, spec);
    auto l = labels(os.str());
    CHECK(l[1] > 0);
    CHECK(l[0] + l[1] == 48 * 48);

    // |u| > epsilon across the whole window
    spec.x_min = 1.0;
    spec.x_max = 2.0;
    spec.y_min = 1.0;
    spec.y_max = 2.0;
    os.str("");
    write_slice_csv(os, *e1.good_form, e1.good_profile, params, spec);
    l = labels(os.str());
    CHECK(l[0] == 48 * 48);

    spec.x_max = 1.0;
    CHECK_THROWS_AS(write_slice_csv(os, *e1.good_form, e1.good_profile, params, spec), InputError);
    spec.x_max = 2.0;
    spec.y_axis = spec.x_axis;
    CHECK_THROWS_AS(write_slice_csv(os, *e1.good_form, e1.good_profile, params, spec), InputError);

    const auto e3 = run(ReferenceGerm::E3);
    const auto p3 = calibrated_params(e3, 200, 1);
    SliceSpec s3;
    s3.width = s3.height = 64;
    s3.x_min = s3.y_min = -0.6;
    s3.x_max = s3.y_max = 0.6;
    s3.base = canonical_witness(p3.front(), e3.good_profile);
    os.str("");
    write_slice_csv(os, *e3.good_form, e3.good_profile, p3, s3);
    l = labels(os.str());
    CHECK(l[1] > 0);
    CHECK(l[2] > 0);
}

TEST_CASE("complex formatting is stable")
{
    CHECK(format_complex({1.0, 0.0}) == "1+0i");
    CHECK(format_complex({-0.5, -0.25}) == "-0.5-0.25i");
    CHECK(format_complex({0.0, -0.0}) == "0+0i");
}
