// test_params.cpp -- parameter algebra against hand-derived and quadrature oracles
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ckn/params.hpp"

using namespace ckn;

TEST_CASE("unweighted reference point d=3, p=2") {
    const ParamSet ps = derive_params(3, 0.0, 0.0, 2.0);
    CHECK(ps.alpha == doctest::Approx(1.0));
    CHECK(ps.n == doctest::Approx(3.0));
    CHECK(ps.delta == doctest::Approx(0.0));
    CHECK(ps.m == doctest::Approx(0.75));
    CHECK(ps.m_c == doctest::Approx(1.0 / 3.0));
    CHECK(ps.m1 == doctest::Approx(2.0 / 3.0));
    CHECK(ps.sigma == doctest::Approx((0.75 - 1.0 / 3.0) / 0.25));
    CHECK(ps.mu == doctest::Approx(1.25));
    CHECK(ps.mu_star == doctest::Approx(3.0 * (0.75 - 1.0 / 3.0)));
    CHECK(ps.kappa == doctest::Approx(std::pow(6.0, 0.8)));
    CHECK(ps.p_star == doctest::Approx(3.0));
    // theta = (d-gamma)(p-1) / (p (d+beta+2-2gamma - p(d-beta-2)))
    CHECK(ps.vartheta == doctest::Approx(3.0 / (2.0 * (5.0 - 2.0))));
    CHECK(ps.alpha_FS == doctest::Approx(1.0));
    CHECK(ps.unweighted());
}

TEST_CASE("weighted reference point d=3, beta=-1, gamma=-2, p=2") {
    const ParamSet ps = derive_params(3, -1.0, -2.0, 2.0);
    CHECK(ps.alpha == doctest::Approx(1.5));
    CHECK(ps.n == doctest::Approx(10.0 / 3.0));
    CHECK(ps.m == doctest::Approx(0.75));
    CHECK(ps.m_c == doctest::Approx(0.4));
    CHECK(ps.alpha_FS == doctest::Approx(std::sqrt(2.0 / (10.0 / 3.0 - 1.0))));
    CHECK(ps.beta_FS == doctest::Approx(1.0 - std::sqrt(17.0)));
    CHECK(classify_region(ps) == RegionClass::SymmetryBreaking);
}

TEST_CASE("kappa closed form at m = 4/5") {
    // 2m/(1-m) = 8 and mu = 7/5, so kappa = 8^{5/7}
    const ParamSet ps = derive_params_from_m(3, 0.0, 0.0, 0.8);
    CHECK(ps.kappa == doctest::Approx(std::pow(8.0, 5.0 / 7.0)).epsilon(1e-12));
}

TEST_CASE("admissibility guards") {
    CHECK_THROWS_AS(derive_params(3, 0.0, 4.0, 2.0), Inadmissible);       // gamma >= d
    // beta <= gamma-2 coincides with the degenerate exponent denominator
    CHECK_THROWS_AS(derive_params(3, -3.5, -1.0, 2.0), DegenerateDenominator);
    CHECK_THROWS_AS(derive_params(3, -0.3, -1.0, 2.0), Inadmissible);     // beta >= (d-2)g/d
    CHECK_THROWS_AS(derive_params(3, 0.0, 0.0, 1.0), Inadmissible);       // p <= 1
    CHECK_THROWS_AS(derive_params(3, 0.0, 0.0, 3.5), Inadmissible);       // p > p_star
    CHECK_THROWS_AS(derive_params(3, -1.0, -2.0, 2.0, Mode::UnweightedGN), Inadmissible);
    CHECK_THROWS_AS(derive_params_from_m(3, 0.0, 0.0, 0.4), Inadmissible);
    CHECK_THROWS_AS(derive_params_from_m(3, 0.0, 0.0, 1.0), Inadmissible);
    CHECK_THROWS_AS(derive_params(3, 0.0, 2.5, 2.0), DegenerateDenominator);  // b+2-g <= 0
}

TEST_CASE("low-dimensional GN mode") {
    const ParamSet p1 = derive_params(1, 0.0, 0.0, 5.0, Mode::UnweightedGN);
    CHECK(std::isinf(p1.p_star));
    const ParamSet p2 = derive_params(2, 0.0, 0.0, 10.0, Mode::UnweightedGN);
    CHECK(p2.n == doctest::Approx(2.0));
    CHECK_THROWS_AS(derive_params(1, 0.0, 0.0, 2.0, Mode::Weighted), Inadmissible);
}

TEST_CASE("m <-> p round trip") {
    const ParamSet ps = derive_params_from_m(3, 0.0, 0.0, 0.75);
    CHECK(ps.p == doctest::Approx(2.0));
    CHECK(ps.m == doctest::Approx(0.75));
}

TEST_CASE("Felli-Schneider curve") {
    CHECK(beta_fs_of_gamma(3, -1.0) == doctest::Approx(1.0 - 2.0 * std::sqrt(2.0)));
    CHECK(beta_fs_of_gamma(3, -2.0) == doctest::Approx(1.0 - std::sqrt(17.0)));
    CHECK_THROWS_AS(beta_fs_of_gamma(3, 0.5), Inadmissible);  // discriminant < 0
}

TEST_CASE("region classification") {
    // gamma >= 0 is always symmetric
    const ParamSet pos = derive_params(3, -0.2, 0.5, 2.0);
    CHECK(classify_region(pos) == RegionClass::Symmetry);
    // below the curve (beta < beta_FS(-2) = 1 - sqrt(17)): symmetric
    const ParamSet sym = derive_params(3, -3.5, -2.0, 1.05);
    CHECK(classify_region(sym) == RegionClass::Symmetry);
    // above the curve: symmetry breaking
    const ParamSet brk = derive_params(3, -2.5, -2.0, 1.2);
    CHECK(classify_region(brk) == RegionClass::SymmetryBreaking);
    // exactly on the curve
    const double bfs = beta_fs_of_gamma(3, -2.0);
    const ParamSet on = derive_params(3, bfs, -2.0, 1.1);
    CHECK(classify_region(on) == RegionClass::FSBoundary);
}

TEST_CASE("Barenblatt integrals against closed forms") {
    // d=3, m=2/3: mass of (1+r^2)^{-3} over R^3 is pi^2/4; Fisher info is 12 pi^2
    const ParamSet ps = derive_params_from_m(3, 0.0, 0.0, 2.0 / 3.0);
    const BarenblattIntegrals bi = barenblatt_integrals(ps);
    const double pi = std::acos(-1.0);
    CHECK(bi.mass == doctest::Approx(pi * pi / 4.0).epsilon(1e-10));
    CHECK(bi.fisher == doctest::Approx(12.0 * pi * pi).epsilon(1e-10));
}

TEST_CASE("optimal GN constant at d=3, m=3/4 (frozen quadrature values)") {
    const ParamSet ps = derive_params_from_m(3, 0.0, 0.0, 0.75);
    // independent high-precision quadrature of the optimizer quotient gives
    // C = 0.6082914467207952... for d = 3, q = 2
    CHECK(optimal_gn_constant(ps) == doctest::Approx(0.6082914467207953).epsilon(1e-10));
    CHECK(barenblatt_integrals(ps).g_functional ==
          doctest::Approx(81.09711946617573).epsilon(1e-9));
}

TEST_CASE("record export carries the derived fields") {
    const auto rec = derive_params(3, -1.0, -2.0, 2.0).to_record();
    CHECK(rec.at("alpha") == doctest::Approx(1.5));
    CHECK(rec.count("mu") == 1);
    CHECK(rec.count("kappa") == 1);
}
