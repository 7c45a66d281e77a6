#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "qpgerm/basin.hpp"
#include "qpgerm/germ_io.hpp"
#include "test_support.hpp"

using namespace qpgerm;

namespace {

InvariantProfile good_profile(ReferenceGerm which)
{
    const auto f = make_reference_germ(which);
    auto p = compute_profile(f.germ, f.alpha);
    if (*p.k > 1) p = compute_profile(rescale_to_unit_A(f.germ, p).germ, f.alpha);
    return p;
}

constexpr double pi = std::numbers::pi;

} // namespace

TEST_CASE("sector containment and the V/U inversion duality")
{
    const auto v = Sector::V(0.5, 0.3);
    CHECK(v.contains({0.4, 0.0}));
    CHECK(!v.contains({0.6, 0.0}));
    CHECK(!v.contains({0.0, 0.0}));
    CHECK(!v.contains(std::polar(0.2, 0.31)));
    CHECK(Sector::V(0.5, 0.3, pi).contains({-0.2, 0.01}));
    CHECK(std::abs(relative_arg({-1.0, -1e-9}, pi)) < 1e-8);

    std::mt19937_64 rng(4);
    for (int i = 0; i < 2000; ++i) {
        const cplx t = testing::random_coeff(rng);
        const double a = 0.1 + 0.8 * std::abs(testing::random_coeff(rng).real());
        const double d = 0.05 + std::abs(testing::random_coeff(rng).real());
        const double c = 3.0 * testing::random_coeff(rng).real();
        // t in V(a, d) around c  <=>  1/t in U(1/a, d) around -c
        CHECK(Sector::V(a, d, c).contains(t) == Sector::U(1.0 / a, d, -c).contains(1.0 / t));
    }
}

TEST_CASE("parameter selection on the reference germs")
{
    auto p1 = choose_params(good_profile(ReferenceGerm::E1));
    CHECK(p1.basin_case == BasinCase::power);
    CHECK(p1.gamma == doctest::Approx(0.75));
    CHECK(p1.beta == doctest::Approx(0.25));
    CHECK(p1.delta == doctest::Approx(pi / 8));
    CHECK(p1.delta_prime == doctest::Approx(pi / 32));
    CHECK_NOTHROW(validate_params(p1, good_profile(ReferenceGerm::E1)));

    auto p3 = choose_params(good_profile(ReferenceGerm::E3));
    CHECK(p3.gamma == doctest::Approx(1.5));
    CHECK(p3.delta == doctest::Approx(pi / 16));

    auto p2 = choose_params(good_profile(ReferenceGerm::E2));
    CHECK(p2.basin_case == BasinCase::log);
    CHECK(p2.gamma == doctest::Approx(0.5 / std::sqrt(1.0 + std::tan(1.0))));
    CHECK(p2.gamma == doctest::Approx(0.3127).epsilon(1e-3));

    // the raw E3 profile has A = 1, not 1/k
    const auto f = make_reference_germ(ReferenceGerm::E3);
    CHECK_THROWS_AS(choose_params(compute_profile(f.germ, f.alpha)), Error);

    ParamOverrides o;
    o.gamma = 2.0;
    CHECK_THROWS_AS(choose_params(good_profile(ReferenceGerm::E1), {}, o), Error);
}

TEST_CASE("membership examples")
{
    const auto prof = good_profile(ReferenceGerm::E1);
    const auto params = choose_params(prof);
    const double r = 0.01;
    CHECK(membership({std::pow(r, 4 * params.gamma), r, r}, params, prof));
    CHECK(membership(witness_point(r, params, prof), params, prof));
    CHECK(first_violation({std::pow(r, 4 * params.gamma), r, -r}, params, prof) == BasinCondition::u_sector);
    CHECK(!membership({0.0, 0.0, 0.0}, params, prof));
    CHECK(first_violation({0.2, r, r}, params, prof) == BasinCondition::z_sector);
    CHECK(first_violation({0.05, r, r}, params, prof) == BasinCondition::z_bound);
    CHECK(first_violation({1e-6, 0.0005, 0.2}, params, prof) == BasinCondition::w_bound);
    const double nan = std::nan("");
    CHECK(!membership({nan, r, r}, params, prof));
}

TEST_CASE("log-case witness points are members")
{
    const auto prof = good_profile(ReferenceGerm::E2);
    const auto params = choose_params(prof);
    for (double r : {0.2, 0.1, 0.05}) CHECK(membership(witness_point(r, params, prof), params, prof));
    CHECK(membership(interior_point(params, prof), params, prof));
}

TEST_CASE("petal counts")
{
    CHECK(petal_list(good_profile(ReferenceGerm::E1)).size() == 1);
    CHECK(petal_list(good_profile(ReferenceGerm::E2)).size() == 1);
    const auto e3 = petal_list(good_profile(ReferenceGerm::E3));
    REQUIRE(e3.size() == 2);
    CHECK(e3[0] == Petal{1, 1});
    CHECK(e3[1] == Petal{2, 1});

    InvariantProfile hyp;
    hyp.alpha = {1, 1};
    hyp.nu = 3;
    hyp.l = 2;
    hyp.k = 2;
    CHECK(petal_list(hyp).size() == 4);
    hyp.l = 1; // 0 < l < nu - 1: one petal per u-sector
    CHECK(petal_list(hyp).size() == 2);
    CHECK(!petal_list(hyp)[0].s);
}

TEST_CASE("sampling")
{
    const auto prof = good_profile(ReferenceGerm::E1);
    const auto params = choose_params(prof);
    const auto pts = sample_basin(params, prof, 1000, 42);
    REQUIRE(pts.size() == 1000);
    for (const auto& p : pts) CHECK(membership(p, params, prof));
    CHECK(pts.front() == canonical_witness(params, prof));
    CHECK(sample_basin(params, prof, 1000, 42) == pts);
    CHECK(sample_basin(params, prof, 1000, 43) != pts);

    SampleOptions still;
    still.spread = 0.0;
    const auto one = sample_basin(params, prof, 1, 5, still);
    CHECK(one.front() == canonical_witness(params, prof));

    const auto p3 = good_profile(ReferenceGerm::E3);
    for (int t : {1, 2}) {
        const auto bp = choose_params(p3, {t, 1});
        for (const auto& p : sample_basin(bp, p3, 200, 7)) {
            const double arg = std::arg(resonant_monomial(p, p3.alpha));
            if (t == 1) CHECK(std::abs(arg) < bp.delta);
            else CHECK(std::abs(std::abs(arg) - pi) < bp.delta);
        }
    }
}
