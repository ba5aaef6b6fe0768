// grid.cpp -- grid construction and discrete radial operators
#include "ckn/grid.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace ckn {

namespace {

std::shared_ptr<RadialGrid> make_grid(double n, double measure_constant, double r_max,
                                      int cells, Spacing spacing) {
    if (!(r_max > 0.0)) throw BadGridSpec("r_max must be positive");
    if (cells < 16) throw BadGridSpec("need at least 16 cells");
    if (!(n > 0.0)) throw BadGridSpec("artificial dimension n must be positive");

    auto g = std::make_shared<RadialGrid>();
    g->n = n;
    g->r_max = r_max;
    g->cells = cells;
    g->spacing = spacing;
    g->measure_constant = measure_constant;
    g->edges.resize(static_cast<size_t>(cells) + 1);
    g->centers.resize(static_cast<size_t>(cells));
    g->weights.resize(static_cast<size_t>(cells));

    if (spacing == Spacing::Uniform) {
        for (int j = 0; j <= cells; ++j)
            g->edges[static_cast<size_t>(j)] = r_max * static_cast<double>(j) / cells;
    } else {
        // geometric edges: fixed first-edge fraction, constant ratio afterwards
        const double first_frac = 1e-4;
        const double e1 = first_frac * r_max;
        if (e1 < 1e-8 * r_max) throw BadGridSpec("degenerate first geometric cell");
        const double q = std::pow(r_max / e1, 1.0 / (cells - 1));
        g->edges[0] = 0.0;
        for (int j = 1; j <= cells; ++j)
            g->edges[static_cast<size_t>(j)] = e1 * std::pow(q, j - 1);
        g->edges[static_cast<size_t>(cells)] = r_max;  // kill round-off at the outer edge
    }

    for (int i = 0; i < cells; ++i) {
        const double a = g->edges[static_cast<size_t>(i)];
        const double b = g->edges[static_cast<size_t>(i) + 1];
        g->centers[static_cast<size_t>(i)] = 0.5 * (a + b);
        g->weights[static_cast<size_t>(i)] =
            measure_constant * (std::pow(b, n) - std::pow(a, n)) / n;
        if (!(g->weights[static_cast<size_t>(i)] > 0.0))
            throw BadGridSpec("non-positive quadrature weight");
    }
    return g;
}

}  // namespace

GridPtr build_grid(const ParamSet& ps, double r_max, int cells, Spacing spacing) {
    return make_grid(ps.n, sphere_area(ps.d) / ps.alpha, r_max, cells, spacing);
}

GridPtr build_grid_raw(double n, double measure_constant, double r_max, int cells,
                       Spacing spacing) {
    return make_grid(n, measure_constant, r_max, cells, spacing);
}

double integrate(const RadialField& f) {
    double s = 0.0;
    for (int i = 0; i < f.size(); ++i) s += f.grid->weights[static_cast<size_t>(i)] * f[i];
    return s;
}

std::vector<double> edge_derivative(const RadialField& f) {
    const auto& r = f.grid->centers;
    std::vector<double> df(static_cast<size_t>(f.size()) + 1, 0.0);
    for (int j = 1; j < f.size(); ++j)
        df[static_cast<size_t>(j)] =
            (f[j] - f[j - 1]) / (r[static_cast<size_t>(j)] - r[static_cast<size_t>(j) - 1]);
    return df;  // df[0] and df[cells] stay 0 (zero-flux closures)
}

std::vector<double> edge_mean(const RadialField& f) {
    std::vector<double> em(static_cast<size_t>(f.size()) + 1, 0.0);
    for (int j = 1; j < f.size(); ++j) em[static_cast<size_t>(j)] = 0.5 * (f[j] + f[j - 1]);
    return em;
}

RadialField apply_Dalpha(const RadialField& f, double alpha) {
    const auto& r = f.grid->centers;
    const int nc = f.size();
    RadialField out(f.grid);
    for (int i = 0; i < nc; ++i) {
        double d;
        if (i == 0) {
            d = (f[1] - f[0]) / (r[1] - r[0]);
        } else if (i == nc - 1) {
            d = (f[nc - 1] - f[nc - 2]) /
                (r[static_cast<size_t>(nc) - 1] - r[static_cast<size_t>(nc) - 2]);
        } else {
            // second-order three-point derivative on a nonuniform grid
            const double hm = r[static_cast<size_t>(i)] - r[static_cast<size_t>(i) - 1];
            const double hp = r[static_cast<size_t>(i) + 1] - r[static_cast<size_t>(i)];
            d = (hm * hm * f[i + 1] - hp * hp * f[i - 1] + (hp * hp - hm * hm) * f[i]) /
                (hm * hp * (hm + hp));
        }
        out[i] = alpha * d;
    }
    return out;
}

RadialField apply_Lalpha(const RadialField& f, double alpha,
                         const std::vector<double>& edge_coeff) {
    const auto& e = f.grid->edges;
    const double n = f.grid->n;
    const double c = f.grid->measure_constant;
    const auto df = edge_derivative(f);
    const int nc = f.size();
    std::vector<double> flux(static_cast<size_t>(nc) + 1, 0.0);
    for (int j = 1; j < nc; ++j) {
        const double coeff = edge_coeff.empty() ? 1.0 : edge_coeff[static_cast<size_t>(j)];
        flux[static_cast<size_t>(j)] = c * std::pow(e[static_cast<size_t>(j)], n - 1.0) *
                                       coeff * alpha * alpha * df[static_cast<size_t>(j)];
    }
    RadialField out(f.grid);
    for (int i = 0; i < nc; ++i)
        out[i] = (flux[static_cast<size_t>(i) + 1] - flux[static_cast<size_t>(i)]) /
                 f.grid->weights[static_cast<size_t>(i)];
    return out;
}

RadialField second_derivative(const RadialField& f) {
    const auto& r = f.grid->centers;
    const int nc = f.size();
    RadialField out(f.grid);
    for (int i = 1; i < nc - 1; ++i) {
        const double hm = r[static_cast<size_t>(i)] - r[static_cast<size_t>(i) - 1];
        const double hp = r[static_cast<size_t>(i) + 1] - r[static_cast<size_t>(i)];
        out[i] = 2.0 * (hm * f[i + 1] + hp * f[i - 1] - (hm + hp) * f[i]) /
                 (hm * hp * (hm + hp));
    }
    out[0] = out[1];
    out[nc - 1] = out[nc - 2];
    return out;
}

}  // namespace ckn
