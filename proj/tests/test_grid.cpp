// test_grid.cpp -- quadrature, stencils, and discrete integration-by-parts
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ckn/grid.hpp"

using namespace ckn;

namespace {
const ParamSet kPs = derive_params(3, -1.0, -2.0, 2.0);  // n = 10/3, alpha = 1.5
}

TEST_CASE("grid guards") {
    CHECK_THROWS_AS(build_grid(kPs, -1.0, 128), BadGridSpec);
    CHECK_THROWS_AS(build_grid(kPs, 10.0, 8), BadGridSpec);
}

TEST_CASE("weights integrate the measure exactly") {
    for (auto sp : {Spacing::Uniform, Spacing::Geometric}) {
        const GridPtr g = build_grid(kPs, 10.0, 200, sp);
        double total = 0.0;
        for (double w : g->weights) total += w;
        const double exact = g->measure_constant * std::pow(10.0, g->n) / g->n;
        CHECK(total == doctest::Approx(exact).epsilon(1e-13));
        CHECK(g->edges.front() == 0.0);
        CHECK(g->edges.back() == doctest::Approx(10.0));
        for (size_t j = 1; j < g->edges.size(); ++j) CHECK(g->edges[j] > g->edges[j - 1]);
    }
}

TEST_CASE("integrate matches quadrature of a smooth function under refinement") {
    // oracle: int_0^10 c r^{n-1} e^{-r} dr by fine Richardson on the same formula
    const auto run = [&](int cells) {
        const GridPtr g = build_grid(kPs, 10.0, cells, Spacing::Uniform);
        return integrate(sample(g, [](double r) { return std::exp(-r); }));
    };
    const double coarse = run(256), fine = run(1024), finest = run(4096);
    CHECK(std::abs(fine - finest) < std::abs(coarse - finest));
    CHECK(std::abs(fine - finest) / finest < 1e-4);
}

TEST_CASE("centered derivative is second order") {
    const auto err = [&](int cells) {
        const GridPtr g = build_grid(kPs, 10.0, cells, Spacing::Uniform);
        const RadialField f = sample(g, [](double r) { return std::sin(r); });
        const RadialField df = apply_Dalpha(f, kPs.alpha);
        double worst = 0.0;
        for (int i = 2; i < g->cells - 2; ++i) {
            const double r = g->centers[static_cast<size_t>(i)];
            worst = std::max(worst, std::abs(df[i] - kPs.alpha * std::cos(r)));
        }
        return worst;
    };
    const double e1 = err(200), e2 = err(400);
    CHECK(e2 < e1);
    CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.25));
}

TEST_CASE("derivatives of polynomials are exact where the stencil allows") {
    const GridPtr g = build_grid(kPs, 10.0, 128, Spacing::Geometric);
    const RadialField q = sample(g, [](double r) { return 3.0 * r * r - r + 2.0; });
    const RadialField d2 = second_derivative(q);
    // exact up to cancellation, which is amplified on the tightest geometric cells
    for (int i = 2; i < g->cells - 2; ++i) CHECK(d2[i] == doctest::Approx(6.0).epsilon(1e-6));
    const std::vector<double> ed = edge_derivative(sample(g, [](double r) { return 2.0 * r; }));
    REQUIRE(static_cast<int>(ed.size()) == g->cells + 1);
    CHECK(ed.front() == 0.0);  // zero-flux closures at both boundaries
    CHECK(ed.back() == 0.0);
    for (int j = 1; j < g->cells; ++j)
        CHECK(ed[static_cast<size_t>(j)] == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("flux-form operator conserves mass and is self-adjoint") {
    const GridPtr g = build_grid(kPs, 10.0, 128, Spacing::Geometric);
    const RadialField f = sample(g, [](double r) { return std::exp(-r * r / 4.0); });
    const RadialField h = sample(g, [](double r) { return 1.0 / (1.0 + r * r); });
    const RadialField Lf = apply_Lalpha(f, kPs.alpha);
    const RadialField Lh = apply_Lalpha(h, kPs.alpha);

    double total = 0.0, fh = 0.0, hf = 0.0, scale = 0.0;
    for (int i = 0; i < g->cells; ++i) {
        total += g->weights[static_cast<size_t>(i)] * Lf[i];
        fh += g->weights[static_cast<size_t>(i)] * f[i] * Lh[i];
        hf += g->weights[static_cast<size_t>(i)] * h[i] * Lf[i];
        scale += std::abs(g->weights[static_cast<size_t>(i)] * f[i] * Lh[i]);
    }
    CHECK(std::abs(total) < 1e-12 * scale);
    CHECK(std::abs(fh - hf) < 1e-12 * scale);
}

TEST_CASE("edge means average neighboring cells") {
    const GridPtr g = build_grid(kPs, 10.0, 64);
    const RadialField f = sample(g, [](double r) { return r; });
    const std::vector<double> em = edge_mean(f);
    REQUIRE(static_cast<int>(em.size()) == g->cells + 1);
    for (int j = 1; j < g->cells; ++j)
        CHECK(em[static_cast<size_t>(j)] == doctest::Approx(0.5 * (f[j - 1] + f[j])));
}

TEST_CASE("raw grid carries an explicit artificial dimension") {
    const GridPtr g = build_grid_raw(4.0, 1.0, 5.0, 64);
    CHECK(g->n == doctest::Approx(4.0));
    double total = 0.0;
    for (double w : g->weights) total += w;
    CHECK(total == doctest::Approx(std::pow(5.0, 4.0) / 4.0).epsilon(1e-13));
}
