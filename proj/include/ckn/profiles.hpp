// profiles.hpp -- closed-form reference profiles and the self-similar solution
#pragma once

#include "ckn/grid.hpp"
#include "ckn/params.hpp"

namespace ckn {

enum class ProfileKind { BarenblattStar, BarenblattAlpha, AubinTalenti };

// A closed-form profile with a dilation parameter. Evaluation is lazy (no grid).
//
// Dilation convention: density-like kinds (both Barenblatt profiles) dilate
// mass-preservingly in their own radial measure, f_s(r) = s^n f(s r) with the
// relevant dimension (d resp. n); the Aubin-Talenti function dilates without
// an amplitude factor, w_s(r) = w(s r), matching the separate dilation /
// multiplication-by-constant invariances of the inequality.
struct Profile {
    ProfileKind kind = ProfileKind::BarenblattStar;
    ParamSet ps;
    double scale = 1.0;
    // Filled by make_profile: quadrature of the profile in its measure
    // (of w^{2p} for AubinTalenti, whose plain integral diverges).
    double mass = 0.0;
};

Profile make_profile(ProfileKind kind, const ParamSet& ps, double scale = 1.0);

// Pointwise evaluation at radius r (original radial coordinate for
// BarenblattStar / AubinTalenti; transformed coordinate s = rho^alpha for
// BarenblattAlpha). Log-domain arithmetic throughout.
double eval_profile(const Profile& pr, double r);

// B_alpha(r) = (1 + r^2/alpha^2)^{1/(m-1)} in the transformed radial coordinate.
double barenblatt_alpha(const ParamSet& ps, double r);

// B_star(x) = (1 + |x|^{2+beta-gamma})^{-1/(1-m)} in the original coordinate.
double barenblatt_star(const ParamSet& ps, double rho);

// w_star(x) = (1 + |x|^{2+beta-gamma})^{-1/(p-1)} in the original coordinate.
double aubin_talenti(const ParamSet& ps, double rho);

// Time scale h(t) = (1 + (2m/(1-m)) mu t)^{1/mu} and its inverse through tau:
// tau = (1/2) log h, t(tau) = (e^{2 mu tau} - 1)(1-m)/(2 m mu).
double h_of_t(const ParamSet& ps, double t);
double tau_of_t(const ParamSet& ps, double t);
double t_of_tau(const ParamSet& ps, double tau);

// Self-similar solution of the weighted flow, evaluated in the transformed
// radial coordinate r = rho^alpha: g_star(t, r) = h(t)^{-n} B_alpha(r / h(t)).
// Its image under the self-similar change of variables is exactly B_alpha.
double self_similar_solution(const ParamSet& ps, double t, double r);

// Pressure variable P = m/(1-m) * v^{m-1}, pointwise on a field.
RadialField pressure(const RadialField& field, const ParamSet& ps);

// Measure-weighted mean relative residual of the Euler-Lagrange equation
// satisfied by the unit-scale w_star, with b = 1/(p-1):
//   -div(|x|^{-beta} grad w)
//       = |x|^{-gamma} (4 a^2 b(b+1) w^{2p-1} + 2 a b (d-gamma-2a(b+1)) w^p),
// a = alpha. Interior nodes only; each cell residual is normalized by the
// local flux and reaction scales so tight geometric cells do not amplify
// rounding. w is given in the ORIGINAL radial coordinate on a grid interpreted
// with measure rho^{d-1-gamma} and flux weight rho^{d-1-beta}.
double elliptic_residual(const RadialField& w, const ParamSet& ps);

}  // namespace ckn
