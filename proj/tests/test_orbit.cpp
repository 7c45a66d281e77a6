#include <doctest.h>

#include <cmath>
#include <sstream>

#include "qpgerm/germ_io.hpp"
#include "qpgerm/orbit.hpp"

using namespace qpgerm;

namespace {

struct Ref {
    GermMap germ;
    InvariantProfile profile;
};

Ref good(ReferenceGerm which)
{
    const auto f = make_reference_germ(which);
    auto p = compute_profile(f.germ, f.alpha);
    auto r = rescale_to_unit_A(f.germ, p);
    return {r.germ, compute_profile(r.germ, f.alpha)};
}

} // namespace

TEST_CASE("E1 along the z axis is the classical parabolic orbit")
{
    const auto e1 = good(ReferenceGerm::E1);
    IterateOptions o;
    o.max_iter = 100000;
    o.thin_stride = 1000;
    const auto tr = iterate(e1.germ, {0.1, 0.0, 0.0}, o);
    CHECK(tr.status == OrbitStatus::converging);
    double prev = 1.0;
    for (const auto& pt : tr.points) {
        CHECK(pt.p[1] == cplx{});
        CHECK(pt.p[0].imag() == 0.0);
        CHECK(pt.p[0].real() < prev);
        prev = pt.p[0].real();
    }
    const auto& last = tr.points.back();
    CHECK(last.m == 100000);
    CHECK(last.m * std::abs(last.p[0]) == doctest::Approx(1.0).epsilon(2e-3));
}

TEST_CASE("fixed point, escape and thinning")
{
    const auto e1 = good(ReferenceGerm::E1);
    IterateOptions o;
    o.max_iter = 1000;
    auto tr = iterate(e1.germ, {0.0, 0.0, 0.0}, o);
    CHECK(tr.points.size() == 1);
    CHECK(tr.status == OrbitStatus::converging);

    tr = iterate(e1.germ, {-0.1, 0.0, 0.0}, o);
    CHECK(tr.status == OrbitStatus::escaped);
    CHECK(std::abs(tr.points.back().p[0]) > o.escape_radius);

    o.max_iter = 10000;
    o.thin_stride = 100;
    tr = iterate(e1.germ, {0.1, 0.01, 0.01}, o);
    CHECK(tr.points.size() == 100 + 100);
    CHECK(tr.points.back().m == 10000);
    CHECK(tr.steps == 10000);

    const double nan = std::nan("");
    tr = iterate(e1.germ, {nan, 0.0, 0.0}, o);
    CHECK(tr.non_finite);
    CHECK(tr.status == OrbitStatus::escaped);
}

TEST_CASE("z power sum counts every step")
{
    const auto e2 = good(ReferenceGerm::E2);
    IterateOptions o;
    o.max_iter = 500;
    o.thin_stride = 50;
    o.sum_power = 1;
    const auto dense = iterate(e2.germ, {0.05, 0.1, 0.1}, IterateOptions{500, 2.0, 1, 2, 1});
    const auto thin = iterate(e2.germ, {0.05, 0.1, 0.1}, o);
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < dense.points.size(); ++i) sum += std::abs(dense.points[i].p[0]);
    CHECK(dense.points.back().z_power_sum == doctest::Approx(sum).epsilon(1e-12));
    CHECK(thin.points.back().z_power_sum == dense.points.back().z_power_sum);
}

TEST_CASE("invariance with calibrated and miscalibrated parameters")
{
    const auto e1 = good(ReferenceGerm::E1);
    const auto params = choose_params(e1.profile);
    const auto cal = calibrate_epsilons(e1.germ, params, e1.profile, 500, 3);
    CHECK(cal.params.epsilon <= 0.1);
    CHECK(cal.params.epsilon >= 1e-6);
    CHECK(cal.last.pass_rate() == 1.0);
    CHECK(verify_invariance(e1.germ, cal.params, e1.profile, 500, 3).fail == 0);

    auto wide = params;
    wide.epsilon = 0.9;
    wide.epsilon_prime = 0.9;
    const auto rep = verify_invariance(e1.germ, wide, e1.profile, 1000, 3);
    if (rep.fail > 0) {
        CHECK(!rep.witnesses.empty());
        CHECK(rep.witnesses.front().violated != BasinCondition::none);
    }
    CHECK(rep.witnesses.size() <= 10);
}

TEST_CASE("recurrence residuals")
{
    // exact model z1 = z / (1 + z): d_z vanishes identically
    const auto f = make_reference_germ(ReferenceGerm::E1, 10);
    auto comps = f.germ.components();
    comps[0] = Series(2, 10);
    for (int i = 1; i <= 10; ++i) comps[0].add_term({i, {0, 0}}, i % 2 ? 1.0 : -1.0);
    const GermMap model(f.germ.spectrum(), comps);
    auto prof = compute_profile(model, f.alpha);
    IterateOptions o;
    o.max_iter = 200;
    const auto tr = iterate(model, {0.01, 0.05, 0.05}, o);
    for (const auto& r : recurrence_residuals(model, tr, prof)) CHECK(std::abs(r.d_z) < 1e-9);

    const auto e1 = good(ReferenceGerm::E1);
    const auto t1 = iterate(e1.germ, {0.05, 0.1, 0.1}, IterateOptions{2000, 2.0, 1, 2, 0});
    for (const auto& r : recurrence_residuals(e1.germ, t1, e1.profile)) {
        const auto& p = t1.points[static_cast<std::size_t>(r.m)].p;
        if (r.m >= 100) CHECK(std::abs(r.d_z) <= 10.0 * std::abs(p[0]));
    }
    CHECK_THROWS_AS(recurrence_residuals(e1.germ, iterate(e1.germ, {0.0, 0.0, 0.0}, o), e1.profile), Error);
}

TEST_CASE("least squares and fit preconditions")
{
    CHECK(ls_slope({1, 2, 3, 4}, {3, 5, 7, 9}) == doctest::Approx(2.0));
    CHECK_THROWS_AS(ls_slope({1, 1}, {0, 1}), Error);
    const auto e1 = good(ReferenceGerm::E1);
    const auto tr = iterate(e1.germ, {0.05, 0.1, 0.1}, IterateOptions{1000, 2.0, 1, 2, 0});
    CHECK_THROWS_AS(fit_rates(tr, e1.profile), Error);

    const auto e2 = good(ReferenceGerm::E2);
    const auto t2 = iterate(e2.germ, {0.001, 0.1, 0.1}, IterateOptions{20000, 2.0, 10, 2, 0});
    CHECK_THROWS_AS(fit_rates(t2, e2.profile), Error); // accumulated with l = 0
}

TEST_CASE("orbit CSV")
{
    const auto e1 = good(ReferenceGerm::E1);
    const auto tr = iterate(e1.germ, {0.0, 0.0, 0.0}, IterateOptions{});
    std::ostringstream os;
    write_orbit_csv(os, tr, e1.profile.alpha, 1, 1);
    CHECK(os.str() == "m,re_z,im_z,abs_z,abs_u,abs_v,arg_u_rel,abs_w_1,abs_w_2,theta\n"
                      "0,0,0,0,0,0,0,0,0,nan\n"
                      "# status=converging\n");
    CHECK(format_number(0.1) == "0.1");
    CHECK(format_number(1e-300) == "1e-300");
}
