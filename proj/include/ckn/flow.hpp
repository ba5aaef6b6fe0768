// flow.hpp -- implicit time integration of the diffusion flows and the
// self-similar change of variables
#pragma once

#include <string>
#include <vector>

#include "ckn/functionals.hpp"
#include "ckn/grid.hpp"
#include "ckn/params.hpp"

namespace ckn {

// All fields live on the transformed radial coordinate (measure r^{n-1} dr);
// Original means original TIME variable t (equation u_t = L_alpha u^m),
// SelfSimilar means the rescaled time tau with the confining drift.
enum class Variables { Original, SelfSimilar };

struct FlowState {
    RadialField field;
    double time = 0.0;  // t or tau depending on `variables`
    Variables variables = Variables::SelfSimilar;
    ParamSet ps;
};

// One backward-Euler step of the rescaled flow
//   du/dtau = -div_n( u * alpha d/dr (u^{m-1} - (1 + r^2/alpha^2)) )
// in conservative flux form with zero boundary fluxes. Newton iteration runs
// in the pressure-like variable u^{m-1}. On positivity loss the step is
// subdivided (halved) internally, a bounded number of times.
FlowState step_self_similar(const FlowState& s, double dtau);

// One backward-Euler step of u_t = L_alpha u^m (same flux form, no drift).
FlowState step_original(const FlowState& s, double dt);

// Self-similar change of variables between the two time parameterizations:
// g(t, r) = h(t)^{-n} u(tau(t), r / h(t)), h(t) = kappa R(t). Cubic local
// interpolation; evaluation beyond the grid returns 0 when the field has
// numerically decayed there and throws InterpolationOutOfRange otherwise.
FlowState change_of_variables(const FlowState& s, Variables target);

struct TraceRow {
    double tau = 0.0;
    double mass = 0.0;
    double E = 0.0, F = 0.0, G = 0.0;
    double E_rel = 0.0, I_rel = 0.0;
    double R_star = 0.0;     // NaN for weighted runs
    double R_weighted = 0.0; // radial part
};

struct FlowTrace {
    std::vector<TraceRow> rows;
    std::string error;  // non-empty if the run aborted; rows hold the partial trace
    bool ok() const { return error.empty(); }
};

struct FlowOptions {
    double dt0 = 1e-4;
    double dt_max = 0.1;
    double growth = 1.2;
    double sample_interval = 0.05;
    bool adaptive = true;  // false: fixed step dt0, samples every step
    bool with_remainders = true;  // R_star / R_weighted columns (costlier)
};

// Adaptive backward-Euler driver. Samples the functional columns at
// (approximately) uniform time intervals; on solver failure the partial
// trace is returned with `error` set. If `final_state` is non-null it
// receives the last accepted state.
FlowTrace run_flow(const FlowState& s0, double horizon, const FlowOptions& opt = {},
                   FlowState* final_state = nullptr);

// Canonical initial data for tests and the CLI.
RadialField initial_datum(const GridPtr& g, const ParamSet& ps, const std::string& name);

}  // namespace ckn
