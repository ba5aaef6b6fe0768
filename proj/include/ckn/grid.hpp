// grid.hpp -- radial grids with the r^{n-1} measure and SBP flux operators
#pragma once

#include <memory>
#include <vector>

#include "ckn/common.hpp"
#include "ckn/params.hpp"

namespace ckn {

enum class Spacing { Uniform, Geometric };

// Cell-centered radial grid on [0, r_max] carrying the measure c * r^{n-1} dr,
// where c folds the angular sphere area (and the 1/alpha Jacobian of the
// radial change of variables) into one global constant.
//
// edges[0] = 0 and edges[cells] = r_max; centers are edge midpoints; the
// quadrature weight of cell i is c * (edges[i+1]^n - edges[i]^n)/n, which makes
// quadrature of piecewise-constant data exact against the measure.
struct RadialGrid {
    double n = 0.0;
    double r_max = 0.0;
    int cells = 0;
    Spacing spacing = Spacing::Uniform;
    double measure_constant = 1.0;  // |S^{d-1}| / alpha

    std::vector<double> edges;    // size cells+1
    std::vector<double> centers;  // size cells
    std::vector<double> weights;  // size cells, strictly positive

    double mass_weight(int i) const { return weights[static_cast<size_t>(i)]; }
};

using GridPtr = std::shared_ptr<const RadialGrid>;

GridPtr build_grid(const ParamSet& ps, double r_max, int cells,
                   Spacing spacing = Spacing::Uniform);

// Grid with an explicit artificial dimension (used by tests and by the
// original-coordinate elliptic residual where the measure is r^{d-1-gamma}).
GridPtr build_grid_raw(double n, double measure_constant, double r_max, int cells,
                       Spacing spacing = Spacing::Uniform);

// Density (or any scalar field) sampled at cell centers.
struct RadialField {
    GridPtr grid;
    std::vector<double> values;

    RadialField() = default;
    RadialField(GridPtr g, std::vector<double> v) : grid(std::move(g)), values(std::move(v)) {}
    explicit RadialField(GridPtr g) : grid(std::move(g)) {
        values.assign(static_cast<size_t>(grid->cells), 0.0);
    }

    int size() const { return grid ? grid->cells : 0; }
    double& operator[](int i) { return values[static_cast<size_t>(i)]; }
    double operator[](int i) const { return values[static_cast<size_t>(i)]; }
};

// Quadrature of a field against the grid measure.
double integrate(const RadialField& f);

// Total mass helper (same thing, kept for readability at call sites).
inline double mass(const RadialField& f) { return integrate(f); }

// Sample a callable f(r) at the cell centers.
template <typename F>
RadialField sample(GridPtr g, F&& f) {
    RadialField out(g);
    for (int i = 0; i < g->cells; ++i) out[i] = f(g->centers[static_cast<size_t>(i)]);
    return out;
}

// Radial channel of D_alpha: alpha * df/dr at cell centers (second-order
// centered stencil on the nonuniform grid, one-sided at the two ends).
RadialField apply_Dalpha(const RadialField& f, double alpha);

// Derivatives at interior edges: (f_i - f_{i-1})/(r_i - r_{i-1}), j = 1..cells-1.
// This is the building block of every SBP identity in the library.
std::vector<double> edge_derivative(const RadialField& f);

// Flux-form L_alpha with an optional edge coefficient:
// (L f)_i = (1/w_i) * [F_{i+1} - F_i],  F_j = c * e_j^{n-1} * coeff_j * alpha^2 * (df)_j,
// with zero flux through both boundaries. `edge_coeff` may be empty (treated as 1).
RadialField apply_Lalpha(const RadialField& f, double alpha,
                         const std::vector<double>& edge_coeff = {});

// Arithmetic means of cell values at interior edges (j = 1..cells-1).
std::vector<double> edge_mean(const RadialField& f);

// Discrete second derivative and first derivative at cell centers
// (three-point stencils on the nonuniform grid), used for pointwise
// remainder integrands.
RadialField second_derivative(const RadialField& f);

}  // namespace ckn
