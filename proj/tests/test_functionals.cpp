// test_functionals.cpp -- entropy suites, remainders, identities, GN deficit
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ckn/functionals.hpp"
#include "ckn/profiles.hpp"

using namespace ckn;

namespace {
const ParamSet kU = derive_params_from_m(3, 0.0, 0.0, 0.75);

RadialField barenblatt_field(const GridPtr& g, const ParamSet& ps) {
    return sample(g, [&](double r) { return barenblatt_alpha(ps, r); });
}
}  // namespace

TEST_CASE("entropy suite against the adaptive quadrature oracle") {
    const GridPtr g = build_grid(kU, 60.0, 4096, Spacing::Geometric);
    const EntropySuite es = entropy_suite(barenblatt_field(g, kU), kU);
    const BarenblattIntegrals bi = barenblatt_integrals(kU);
    CHECK(es.E == doctest::Approx(bi.entropy).epsilon(1e-5));
    CHECK(es.I == doctest::Approx(bi.fisher).epsilon(1e-4));
    CHECK(es.G == doctest::Approx(bi.g_functional).epsilon(1e-4));
    CHECK(es.F == doctest::Approx(std::pow(es.E, kU.sigma)).epsilon(1e-12));
    CHECK(es.tail_fraction < 1e-6);
}

TEST_CASE("relative suite vanishes at the reference profile") {
    const GridPtr g = build_grid(kU, 20.0, 512, Spacing::Geometric);
    const RelativeSuite rs = relative_suite(barenblatt_field(g, kU), kU);
    CHECK(std::abs(rs.E_rel) < 1e-12 * rs.reference_mass);
    // q = u^{m-1} - (1 + r^2/alpha^2) vanishes up to pow() rounding
    CHECK(std::abs(rs.I_rel) < 1e-15);
    CHECK(rs.mass == doctest::Approx(rs.reference_mass));
}

TEST_CASE("mass gate") {
    const GridPtr g = build_grid(kU, 20.0, 256, Spacing::Geometric);
    RadialField u = barenblatt_field(g, kU);
    for (int i = 0; i < u.size(); ++i) u[i] *= 1.01;
    CHECK_THROWS_AS(relative_suite(u, kU), MassMismatch);
    CHECK_NOTHROW(relative_suite(u, kU, false));
    const RadialField fixed = renormalize_mass(u, discrete_barenblatt_mass(g, kU));
    CHECK_NOTHROW(relative_suite(fixed, kU));
}

TEST_CASE("Renyi remainder: zero at the profile, positive off it") {
    const GridPtr g = build_grid(kU, 20.0, 512, Spacing::Geometric);
    const FunctionalReport at_profile = renyi_remainder(barenblatt_field(g, kU), kU);
    // pressure of the profile is quadratic: both terms vanish up to the
    // discrete-derivative cancellation floor
    CHECK(std::abs(at_profile.value) < 1e-5);

    RadialField u = sample(g, [&](double r) {
        return barenblatt_alpha(kU, r) * (1.2 - 0.35 * std::exp(-r * r));
    });
    const FunctionalReport off = renyi_remainder(u, kU);
    CHECK(off.value > 0.0);
    CHECK(off.terms.at("variance_term") >= 0.0);
    CHECK(off.terms.at("traceless_term") >= 0.0);
}

TEST_CASE("the two remainder forms agree up to a second-order defect") {
    const auto gap = [&](int cells) {
        const GridPtr g = build_grid(kU, 20.0, cells, Spacing::Geometric);
        const RadialField u = sample(g, [&](double r) {
            return barenblatt_alpha(kU, r) * (1.2 - 0.35 * std::exp(-r * r));
        });
        const FunctionalReport rep = rstar_remainder(u, kU);
        CHECK(rep.terms.at("form_b") > 0.0);
        return rep.terms.at("gap");  // already relative to the form magnitude
    };
    const double coarse = gap(256), fine = gap(1024);
    CHECK(fine < coarse);
    CHECK(fine < 2e-2);
}

TEST_CASE("Fisher-derivative identity: independent quadratures agree") {
    // domain truncation contributes ~r_max^-3, so the identity needs a wide
    // domain before grid refinement shows
    const auto rel_gap = [&](int cells) {
        const GridPtr g = build_grid(kU, 60.0, cells, Spacing::Geometric);
        const RadialField v = sample(g, [&](double r) {
            return barenblatt_alpha(kU, r) *
                   (1.0 + 0.5 * std::exp(-2.0 * (r - 1.0) * (r - 1.0)));
        });
        const IdentityCheck ic = blw_identity_check(v, kU);
        return ic.gap / std::max(std::abs(ic.lhs), std::abs(ic.rhs));
    };
    const double coarse = rel_gap(2048), fine = rel_gap(4096);
    CHECK(fine < 1e-4);
    CHECK(fine < 0.7 * coarse);
}

TEST_CASE("tail guard on the identity check") {
    // a slowly decaying field pushes weight onto the last cell
    const GridPtr g = build_grid(kU, 20.0, 256, Spacing::Uniform);
    const RadialField fat = sample(g, [](double r) { return 1.0 / (1.0 + 0.01 * r * r); });
    CHECK_THROWS_AS(blw_identity_check(fat, kU), TailTruncation);
}

TEST_CASE("weighted remainder: radial part vanishes at the profile") {
    const ParamSet ps = derive_params_from_m(3, -1.0, -2.0, 0.8);
    const GridPtr g = build_grid(ps, 20.0, 512, Spacing::Geometric);
    const FunctionalReport rep = weighted_remainder(barenblatt_field(g, ps), ps);
    CHECK(std::abs(rep.value) < 1e-6);
}

TEST_CASE("weighted remainder angular terms carry the threshold sign") {
    const ParamSet ps = derive_params_from_m(3, -1.0, -2.0, 0.8);
    const GridPtr g = build_grid(ps, 20.0, 256, Spacing::Geometric);
    const RadialField gf = barenblatt_field(g, ps);
    const FunctionalReport rep = weighted_remainder(gf, ps, AngularMode{1, 1e-3});
    // alpha = 1.5 > alpha_FS for these parameters: the FS term must be negative
    CHECK(ps.alpha > ps.alpha_FS);
    CHECK(rep.terms.at("fs_term") < 0.0);
    CHECK(rep.terms.at("quartic_raw") >= 0.0);
}

TEST_CASE("GN deficit: zero at the optimizer, positive elsewhere, theta exact") {
    CHECK(gn_theta(kU) == doctest::Approx(0.5).epsilon(1e-14));
    const GridPtr g = build_grid(kU, 60.0, 2048, Spacing::Geometric);
    const RadialField wopt =
        sample(g, [&](double r) { return std::pow(barenblatt_star(kU, r), kU.m - 0.5); });
    const FunctionalReport at = gn_deficit(wopt, kU);
    const double scale = at.terms.at("cgn_pow_grid") *
                         std::pow(at.terms.at("norm_2q"), 2.0 / at.terms.at("theta"));
    CHECK(std::abs(at.value) < 1e-12 * scale);

    const RadialField gauss = sample(g, [](double r) { return std::exp(-r * r); });
    CHECK(gn_deficit(gauss, kU).value > 0.0);
    // the grid constant approaches the continuum constant
    CHECK(at.terms.at("cgn_grid") ==
          doctest::Approx(optimal_gn_constant(kU)).epsilon(1e-4));
}

TEST_CASE("discrete reference mass approaches the continuum mass") {
    const GridPtr g = build_grid(kU, 60.0, 4096, Spacing::Geometric);
    CHECK(discrete_barenblatt_mass(g, kU) ==
          doctest::Approx(barenblatt_integrals(kU).mass).epsilon(1e-6));
}
