// spectral.hpp -- linearized operator: mode spectra, spectral gap, symmetry
// threshold, and the flow-side decay-rate oracle
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ckn/grid.hpp"
#include "ckn/params.hpp"

namespace ckn {

// Sign/factor convention carried through every spectral statement.
// The pencil below discretizes the Dirichlet form <<f,f>> against the mass
// form <f,f>; direct substitution of the operator definition gives
// -<f, L f> = (1 - m) <<f, f>>, so a pencil eigenvalue lambda translates to
// a relative-entropy decay rate 2 (1 - m) lambda along the rescaled flow.
struct SpectralConvention {
    double one_minus_m = 0.0;
    double pencil_to_rate(double lambda) const { return 2.0 * one_minus_m * lambda; }
};

// One angular harmonic of the linearization around B_alpha.
// A(phi,psi) = sum_j c e_j^{n-1} alpha^2 B(e_j) dphi dpsi / dr_j
//            + Lambda * sum_i w_i B_i phi_i psi_i / r_i^2        (Dirichlet form)
// M(phi,psi) = sum_i w_i B_i^{2-m} phi_i psi_i                    (mass form)
// A is tridiagonal-plus-diagonal and stored densely; M is diagonal.
struct ModeProblem {
    ParamSet ps;
    int ell = 0;
    double Lambda = 0.0;  // ell (ell + d - 2)
    GridPtr grid;
    SpectralConvention convention;

    std::vector<double> A_diag;      // size cells
    std::vector<double> A_off;       // size cells-1 (sub/super diagonal)
    std::vector<double> M_diag;      // size cells, strictly positive
};

struct ModeSpectrum {
    std::vector<double> eigenvalues;               // ascending
    std::vector<std::vector<double>> eigenvectors; // radial profiles, M-normalized
    std::vector<double> residuals;                 // ||A v - lambda M v|| / ||v||
    bool deflated = false;                         // constants projected out (ell = 0)
};

ModeProblem assemble_mode(const ParamSet& ps, int ell, GridPtr grid);

// Lowest `count` generalized eigenpairs of (A, M). For ell = 0 the constant
// kernel direction is deflated when `deflate_constants` is set (the discrete
// analogue of the mass-orthogonality constraint).
ModeSpectrum solve_spectrum(const ModeProblem& mp, int count,
                            bool deflate_constants = true);

struct GapResult {
    double lambda1 = 0.0;
    int ell = 0;                     // harmonic achieving the minimum
    std::vector<double> eigenvector; // for the achieving mode
    GridPtr grid;
};

// lambda_1 = min over ell in [0, ell_max] (constants deflated at ell = 0) of
// the smallest pencil eigenvalue.
GapResult hardy_poincare_constant(const ParamSet& ps, GridPtr grid, int ell_max);

struct ThresholdOptions {
    double bracket_lo = 0.0;   // 0 -> 0.5 * closed-form hint
    double bracket_hi = 0.0;   // 0 -> 1.5 * closed-form hint
    double tolerance = 1e-5;   // bisection tolerance in alpha
    int ell_max = 6;
    int cells = 256;
    double r_max = 50.0;
    int scan_points = 33;      // alpha samples recorded across the bracket
    bool serial = false;       // force the serial reference scan kernel
};

struct ThresholdScanRow {
    double alpha = 0.0;
    double min_eigenvalue = 0.0;  // over ell in [1, ell_max]
    int ell = 0;                  // achieving harmonic
    double radial_eigenvalue = 0.0;  // ell = 0 diagnostic, not in the criterion
};

struct ThresholdResult {
    double alpha_critical = 0.0;
    double alpha_hint = 0.0;      // closed-form prediction, bracket center
    std::vector<ThresholdScanRow> scan;
    double radial_at_threshold = 0.0;  // ell = 0 min eigenvalue at alpha_critical
};

// Critical alpha at which the second-variation quadratic form of the
// symmetry functional loses nonnegativity over the non-radial harmonics
// (ell >= 1), located by bisection on the minimal pencil eigenvalue.
// The family is (d, gamma, p) fixed with alpha (equivalently beta) varying;
// admissibility of p against the varying beta is deliberately not enforced.
// The form is assembled in a gauged variable g = phi * y with
// phi = r^{a_ell} (1 + r^2/alpha^2)^{-p/(p-1)}, which removes the
// non-normalizable zero mode and yields a well-conditioned pencil.
ThresholdResult symmetry_threshold_via_Q(double d, double gamma, double p,
                                         const ThresholdOptions& opt = {});

// Minimal eigenvalue of the gauged quadratic form for one (alpha, ell);
// exposed for tests and for the scan CSV.
double q_form_min_eigenvalue(double d, double gamma, double p, double alpha,
                             int ell, int cells, double r_max);

struct RateFit {
    double rate_E = 0.0;       // fitted exponential decay rate of E_rel
    double rate_I = 0.0;       // same for I_rel
    double fit_residual = 0.0; // max |log E_rel - fit| over the window
    int points = 0;
    double lambda = 0.0;       // pencil eigenvalue of the perturbation mode
    double predicted_rate = 0.0;  // convention.pencil_to_rate(lambda)
    bool contaminated = false; // fit residual beyond the linear-regime gate
};

// Evolves u = B_alpha (1 + eps f B_alpha^{1-m}) with the nonlinear solver and
// fits log-linear decay of E_rel/I_rel over the window E_rel in [1e-10, 1e-4].
// `f` defaults to the first deflated radial (ell = 0) eigenfunction; a caller
// supplied profile must not be a constant (mass-changing direction).
RateFit rate_oracle(const ParamSet& ps, GridPtr grid, double eps,
                    const std::optional<std::vector<double>>& f = {});

}  // namespace ckn
