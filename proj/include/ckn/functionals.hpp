// functionals.hpp -- entropy / information functionals, remainders, identity checks
#pragma once

#include <map>
#include <optional>
#include <string>

#include "ckn/grid.hpp"
#include "ckn/params.hpp"

namespace ckn {

// A named scalar with its defining sub-integrals, for CSV reporting.
struct FunctionalReport {
    std::string name;
    double value = 0.0;
    std::map<std::string, double> terms;
};

struct EntropySuite {
    double E = 0.0;  // entropy, integral of u^m
    double F = 0.0;  // Renyi entropy power E^sigma
    double I = 0.0;  // Fisher information, integral of u |grad P|^2
    double G = 0.0;  // E^{sigma-1} I
    double tail_fraction = 0.0;  // last-cell share of E (truncation indicator)
};
EntropySuite entropy_suite(const RadialField& u, const ParamSet& ps);

struct RelativeSuite {
    double E_rel = 0.0;  // relative entropy anchored at the Barenblatt profile
    double I_rel = 0.0;  // relative Fisher information (edge quadrature)
    double mass = 0.0;
    double reference_mass = 0.0;  // discrete mass of the sampled Barenblatt
};
// Mass gate: |mass - reference_mass| <= 1e-6 * reference_mass unless
// enforce_mass_gate is false (trajectory sampling keeps the initial mass).
RelativeSuite relative_suite(const RadialField& u, const ParamSet& ps,
                             bool enforce_mass_gate = true);

// Discrete mass of the Barenblatt profile sampled on this grid.
double discrete_barenblatt_mass(const GridPtr& g, const ParamSet& ps);

// Scale a field so its discrete mass equals target_mass.
RadialField renormalize_mass(const RadialField& u, double target_mass);

// Remainder of the Renyi entropy power method (unweighted), as a sum of the
// variance term (sigma-1)(1-m) E^{sigma-1} int v^m |Delta P - I/E|^2 and the
// traceless-Hessian term 2 E^{sigma-1} int v^m (d-1)/d (P'' - P'/r)^2.
FunctionalReport renyi_remainder(const RadialField& v, const ParamSet& ps);

// The tau-compensation remainder of the rescaled flow, by BOTH printed
// formulas: the four-term expansion (form_a) and the completed-square form
// (form_b); their relative gap measures the discrete integration-by-parts
// defect. terms: form_a, form_b, gap, plus the named sub-integrals.
FunctionalReport rstar_remainder(const RadialField& u, const ParamSet& ps);

// Single spherical-harmonic perturbation spec for the weighted remainder:
// the pressure is perturbed multiplicatively, P -> P (1 + amplitude * Y_ell).
struct AngularMode {
    int ell = 1;
    double amplitude = 0.0;
};

// Weighted remainder (radial squares always; angular sub-terms for a single
// harmonic perturbation, with the quartic term reported raw at b^2 = 1 via
// sphere quadrature, d in {2,3} only).
FunctionalReport weighted_remainder(const RadialField& g, const ParamSet& ps,
                                    const std::optional<AngularMode>& mode = {});

struct IdentityCheck {
    double lhs = 0.0;
    double rhs = 0.0;
    double gap = 0.0;  // |lhs - rhs|
};
// Both sides of the Fisher-information derivative identity (unweighted,
// radial reduction), each by its own quadrature.
IdentityCheck blw_identity_check(const RadialField& v, const ParamSet& ps);

// Gagliardo-Nirenberg deficit of w:
//   ||grad w||_2^2 ||w||_{q+1}^{2(1-theta)/theta} - C^{2/theta} ||w||_{2q}^{2/theta}.
// The reference constant is evaluated with the SAME grid quadrature applied to
// the optimizer (terms report both that value and the continuum C_GN), so the
// deficit vanishes at the optimizer up to round-off rather than up to the
// grid's quadrature error.
FunctionalReport gn_deficit(const RadialField& w, const ParamSet& ps);

// theta exponent of the GN inequality for these parameters.
double gn_theta(const ParamSet& ps);

}  // namespace ckn
