// test_profiles.cpp -- closed-form profiles, time scales, elliptic residual
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ckn/profiles.hpp"

using namespace ckn;

TEST_CASE("Barenblatt value at r = alpha") {
    // (1 + 1)^{1/(m-1)} = 2^{-3} at m = 2/3
    const ParamSet ps = derive_params_from_m(3, 0.0, 0.0, 2.0 / 3.0);
    CHECK(barenblatt_alpha(ps, ps.alpha) == doctest::Approx(0.125).epsilon(1e-14));
}

TEST_CASE("profile masses match the adaptive quadrature oracle") {
    const ParamSet ps = derive_params_from_m(3, 0.0, 0.0, 2.0 / 3.0);
    const double pi = std::acos(-1.0);
    const Profile star = make_profile(ProfileKind::BarenblattStar, ps);
    CHECK(star.mass == doctest::Approx(pi * pi / 4.0).epsilon(1e-10));
}

TEST_CASE("dilation preserves mass for density-like profiles") {
    const ParamSet ps = derive_params(3, -1.0, -2.0, 2.0);
    const double m1 = make_profile(ProfileKind::BarenblattAlpha, ps, 1.0).mass;
    const double m2 = make_profile(ProfileKind::BarenblattAlpha, ps, 1.7).mass;
    CHECK(m1 == doctest::Approx(m2).epsilon(1e-9));
    // and pointwise: f_s(r) = s^n f(s r)
    const Profile pr = make_profile(ProfileKind::BarenblattAlpha, ps, 1.7);
    CHECK(eval_profile(pr, 2.0) ==
          doctest::Approx(std::pow(1.7, ps.n) * barenblatt_alpha(ps, 1.7 * 2.0)));
}

TEST_CASE("Aubin-Talenti profile dilates without amplitude factor") {
    const ParamSet ps = derive_params(3, -1.0, -2.0, 2.0);
    const Profile pr = make_profile(ProfileKind::AubinTalenti, ps, 1.3);
    CHECK(eval_profile(pr, 1.0) == doctest::Approx(aubin_talenti(ps, 1.3)));
}

TEST_CASE("time scale h(t) and its inverse") {
    const ParamSet ps = derive_params_from_m(3, -1.0, -2.0, 0.8);
    CHECK(h_of_t(ps, 0.0) == doctest::Approx(1.0));
    CHECK(tau_of_t(ps, 0.0) == doctest::Approx(0.0));
    for (double t : {0.1, 1.0, 7.5}) {
        const double tau = tau_of_t(ps, t);
        CHECK(t_of_tau(ps, tau) == doctest::Approx(t).epsilon(1e-12));
        CHECK(h_of_t(ps, t) == doctest::Approx(std::exp(2.0 * tau)).epsilon(1e-12));
        CHECK(h_of_t(ps, t) ==
              doctest::Approx(std::pow(1.0 + 2.0 * ps.m / (1.0 - ps.m) * ps.mu * t,
                                       1.0 / ps.mu))
                  .epsilon(1e-12));
    }
}

TEST_CASE("self-similar solution at t=0 is the Barenblatt profile") {
    const ParamSet ps = derive_params_from_m(3, -1.0, -2.0, 0.8);
    for (double r : {0.0, 0.5, 2.0, 10.0})
        CHECK(self_similar_solution(ps, 0.0, r) ==
              doctest::Approx(barenblatt_alpha(ps, r)).epsilon(1e-13));
}

TEST_CASE("pressure variable") {
    const ParamSet ps = derive_params_from_m(3, 0.0, 0.0, 0.75);
    const GridPtr g = build_grid(ps, 10.0, 64);
    const RadialField v = sample(g, [](double r) { return std::exp(-r); });
    const RadialField P = pressure(v, ps);
    const double expect = ps.m / (1.0 - ps.m) * std::pow(v[10], ps.m - 1.0);
    CHECK(P[10] == doctest::Approx(expect).epsilon(1e-14));
}

TEST_CASE("elliptic residual of the Aubin-Talenti optimizer converges to zero") {
    const ParamSet ps = derive_params(3, -1.0, -2.0, 2.0);
    const auto res = [&](int cells) {
        const GridPtr g = build_grid_raw(3.0 - ps.gamma, 1.0, 40.0, cells,
                                         Spacing::Geometric);
        const RadialField w = sample(g, [&](double r) { return aubin_talenti(ps, r); });
        return elliptic_residual(w, ps);
    };
    const double coarse = res(256), fine = res(1024);
    CHECK(fine < coarse);
    CHECK(fine < 1e-3);
    // and a non-solution has O(1) residual
    const GridPtr g = build_grid_raw(3.0 - ps.gamma, 1.0, 40.0, 512, Spacing::Geometric);
    const RadialField bad = sample(g, [](double r) { return std::exp(-r * r); });
    CHECK(elliptic_residual(bad, ps) > 1e-2);
}
