// flow.cpp
#include "ckn/flow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ckn/profiles.hpp"

namespace ckn {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Tridiagonal solve (Thomas); overwrites its inputs.
void thomas(std::vector<double>& lo, std::vector<double>& di, std::vector<double>& up,
            std::vector<double>& rhs) {
    const size_t N = di.size();
    for (size_t i = 1; i < N; ++i) {
        const double w = lo[i] / di[i - 1];
        di[i] -= w * up[i - 1];
        rhs[i] -= w * rhs[i - 1];
    }
    rhs[N - 1] /= di[N - 1];
    for (size_t i = N - 1; i-- > 0;) rhs[i] = (rhs[i] - up[i] * rhs[i + 1]) / di[i];
}

// Backward-Euler solve for one step of either flow; unknown is the
// pressure-like variable pi = u^{m-1}.
RadialField newton_solve(const RadialField& u_old, const ParamSet& ps, double dt, bool drift) {
    const RadialGrid& g = *u_old.grid;
    const int N = u_old.size();
    const double m = ps.m;
    const double a2 = ps.alpha * ps.alpha;
    const double sgn = drift ? 1.0 : -1.0;  // residual carries +dF for the drift flow

    // edge conductances c e^{n-1} alpha^2 / dr
    std::vector<double> K(static_cast<size_t>(N) + 1, 0.0);
    for (int j = 1; j < N; ++j) {
        const double dr = g.centers[static_cast<size_t>(j)] - g.centers[static_cast<size_t>(j) - 1];
        K[static_cast<size_t>(j)] =
            g.measure_constant * std::pow(g.edges[static_cast<size_t>(j)], g.n - 1.0) * a2 / dr;
    }
    std::vector<double> V(static_cast<size_t>(N), 0.0);  // confining potential
    if (drift)
        for (int i = 0; i < N; ++i) {
            const double r = g.centers[static_cast<size_t>(i)];
            V[static_cast<size_t>(i)] = 1.0 + r * r / a2;
        }

    auto phi = [m](double pi) { return std::pow(pi, 1.0 / (m - 1.0)); };        // density
    auto dphi = [m, phi](double pi) { return phi(pi) / ((m - 1.0) * pi); };     // d u / d pi
    auto psi = [m](double pi) { return std::pow(pi, m / (m - 1.0)); };          // u^m
    auto dpsi = [m](double pi) { return m / (m - 1.0) * std::pow(pi, 1.0 / (m - 1.0)); };

    std::vector<double> pi(static_cast<size_t>(N));
    for (int i = 0; i < N; ++i) {
        if (!(u_old[i] > 0.0)) throw NonPositiveDensity("flow step needs a positive field");
        pi[static_cast<size_t>(i)] = std::pow(u_old[i], m - 1.0);
    }

    double mass0 = 0.0;
    for (int i = 0; i < N; ++i) mass0 += g.weights[static_cast<size_t>(i)] * u_old[i];
    const double tol = 1e-12 * mass0;

    std::vector<double> R(static_cast<size_t>(N)), u(static_cast<size_t>(N));
    std::vector<double> lo(static_cast<size_t>(N)), di(static_cast<size_t>(N)),
        up(static_cast<size_t>(N)), rhs(static_cast<size_t>(N));

    auto residual = [&](const std::vector<double>& piv, std::vector<double>& Rv) {
        double rnorm = 0.0;
        for (int i = 0; i < N; ++i) u[static_cast<size_t>(i)] = phi(piv[static_cast<size_t>(i)]);
        // fluxes at interior edges
        // drift flow:  F_j = K_j * umean_j * (q_i - q_{i-1}),  q = pi - V
        // plain flow:  F_j = K_j * (psi_i - psi_{i-1})
        double Fprev = 0.0;
        for (int i = 0; i < N; ++i) {
            double Fnext = 0.0;
            if (i + 1 < N) {
                const size_t j = static_cast<size_t>(i) + 1;
                if (drift) {
                    const double um = 0.5 * (u[j] + u[j - 1]);
                    Fnext = K[j] * um * ((piv[j] - V[j]) - (piv[j - 1] - V[j - 1]));
                } else {
                    Fnext = K[j] * (psi(piv[j]) - psi(piv[j - 1]));
                }
            }
            const double w = g.weights[static_cast<size_t>(i)];
            Rv[static_cast<size_t>(i)] =
                u[static_cast<size_t>(i)] - u_old[i] + sgn * dt / w * (Fnext - Fprev);
            rnorm += w * std::fabs(Rv[static_cast<size_t>(i)]);
            Fprev = Fnext;
        }
        return rnorm;
    };

    for (int it = 0; it < 50; ++it) {
        const double rnorm = residual(pi, R);
        if (rnorm <= tol) {
            RadialField out(u_old.grid);
            for (int i = 0; i < N; ++i) {
                out[i] = u[static_cast<size_t>(i)];
                if (!(out[i] > 0.0)) throw PositivityLoss("converged state not positive");
            }
            return out;
        }

        // tridiagonal Jacobian dR/dpi
        for (int i = 0; i < N; ++i) {
            const size_t si = static_cast<size_t>(i);
            const double w = g.weights[si];
            double dgl = 0.0, dgd = dphi(pi[si]), dgu = 0.0;  // dR_i/dpi_{i-1,i,i+1}
            if (drift) {
                const double qd = pi[si] - V[si];
                if (i + 1 < N) {
                    const double um = 0.5 * (u[si + 1] + u[si]);
                    const double dq = (pi[si + 1] - V[si + 1]) - qd;
                    // dF_{i+1}/dpi_i and /dpi_{i+1}
                    dgd += sgn * dt / w * K[si + 1] * (0.5 * dphi(pi[si]) * dq - um);
                    dgu = sgn * dt / w * K[si + 1] * (0.5 * dphi(pi[si + 1]) * dq + um);
                }
                if (i > 0) {
                    const double um = 0.5 * (u[si] + u[si - 1]);
                    const double dq = qd - (pi[si - 1] - V[si - 1]);
                    dgd -= sgn * dt / w * K[si] * (0.5 * dphi(pi[si]) * dq + um);
                    dgl = -sgn * dt / w * K[si] * (0.5 * dphi(pi[si - 1]) * dq - um);
                }
            } else {
                if (i + 1 < N) {
                    dgd += sgn * dt / w * K[si + 1] * (-dpsi(pi[si]));
                    dgu = sgn * dt / w * K[si + 1] * dpsi(pi[si + 1]);
                }
                if (i > 0) {
                    dgd -= sgn * dt / w * K[si] * dpsi(pi[si]);
                    dgl = sgn * dt / w * K[si] * dpsi(pi[si - 1]);
                }
            }
            lo[si] = dgl;
            di[si] = dgd;
            up[si] = dgu;
            rhs[si] = -R[si];
        }
        thomas(lo, di, up, rhs);

        // damped update keeping pi positive
        double lam = 1.0;
        bool accepted = false;
        std::vector<double> cand(static_cast<size_t>(N));
        for (int bt = 0; bt < 30 && !accepted; ++bt, lam *= 0.5) {
            accepted = true;
            for (int i = 0; i < N; ++i) {
                cand[static_cast<size_t>(i)] =
                    pi[static_cast<size_t>(i)] + lam * rhs[static_cast<size_t>(i)];
                if (!(cand[static_cast<size_t>(i)] > 0.0)) {
                    accepted = false;
                    break;
                }
            }
        }
        if (!accepted) throw PositivityLoss("Newton update leaves the positive cone");
        pi.swap(cand);
    }
    throw NewtonDivergence("no convergence in 50 Newton iterations");
}

RadialField advance(const RadialField& u, const ParamSet& ps, double dt, bool drift,
                    int depth = 0) {
    if (dt == 0.0) return u;
    try {
        return newton_solve(u, ps, dt, drift);
    } catch (const PositivityLoss&) {
        if (depth >= 20) throw;
    } catch (const NewtonDivergence&) {
        if (depth >= 20) throw;
    }
    // halve and take two sub-steps
    const RadialField half = advance(u, ps, 0.5 * dt, drift, depth + 1);
    return advance(half, ps, 0.5 * dt, drift, depth + 1);
}

}  // namespace

FlowState step_self_similar(const FlowState& s, double dtau) {
    if (s.variables != Variables::SelfSimilar)
        throw Error("step_self_similar needs a self-similar state");
    if (dtau < 0.0) throw Error("negative step");
    FlowState out = s;
    out.field = advance(s.field, s.ps, dtau, /*drift=*/true);
    out.time = s.time + dtau;
    return out;
}

FlowState step_original(const FlowState& s, double dt) {
    if (s.variables != Variables::Original)
        throw Error("step_original needs an original-variables state");
    if (dt < 0.0) throw Error("negative step");
    FlowState out = s;
    out.field = advance(s.field, s.ps, dt, /*drift=*/false);
    out.time = s.time + dt;
    return out;
}

namespace {

// Local cubic Lagrange interpolation at x; zero-extension beyond the grid for
// numerically decayed fields, InterpolationOutOfRange otherwise.
double interp(const RadialField& f, double x) {
    const auto& r = f.grid->centers;
    const int N = f.size();
    if (x > f.grid->r_max) {
        double mx = 0.0;
        for (int i = 0; i < N; ++i) mx = std::max(mx, std::fabs(f[i]));
        if (std::fabs(f[N - 1]) <= 1e-9 * mx) return 0.0;
        throw InterpolationOutOfRange("rescaled support exceeds the grid");
    }
    auto it = std::upper_bound(r.begin(), r.end(), x);
    int i = static_cast<int>(it - r.begin());
    int lo = std::clamp(i - 2, 0, N - 4);
    double val = 0.0;
    for (int a = lo; a < lo + 4; ++a) {
        double L = f[a];
        for (int b = lo; b < lo + 4; ++b)
            if (b != a)
                L *= (x - r[static_cast<size_t>(b)]) /
                     (r[static_cast<size_t>(a)] - r[static_cast<size_t>(b)]);
        val += L;
    }
    return val;
}

}  // namespace

FlowState change_of_variables(const FlowState& s, Variables target) {
    if (s.variables == target) return s;
    const ParamSet& ps = s.ps;
    FlowState out;
    out.ps = ps;
    out.variables = target;
    out.field = RadialField(s.field.grid);
    const auto& r = s.field.grid->centers;
    if (target == Variables::SelfSimilar) {
        // u(tau, r) = h^n g(t, h r)
        const double h = h_of_t(ps, s.time);
        out.time = tau_of_t(ps, s.time);
        const double hn = std::pow(h, ps.n);
        for (int i = 0; i < out.field.size(); ++i)
            out.field[i] = hn * interp(s.field, h * r[static_cast<size_t>(i)]);
    } else {
        // g(t, r) = h^{-n} u(tau, r / h)
        out.time = t_of_tau(ps, s.time);
        const double h = h_of_t(ps, out.time);
        const double hn = std::pow(h, ps.n);
        for (int i = 0; i < out.field.size(); ++i)
            out.field[i] = interp(s.field, r[static_cast<size_t>(i)] / h) / hn;
    }
    return out;
}

namespace {

TraceRow sample_row(const FlowState& s, bool with_remainders) {
    TraceRow row;
    row.tau = s.time;
    row.mass = integrate(s.field);
    const EntropySuite es = entropy_suite(s.field, s.ps);
    row.E = es.E;
    row.F = es.F;
    row.G = es.G;
    if (s.variables == Variables::SelfSimilar) {
        const RelativeSuite rs = relative_suite(s.field, s.ps, /*enforce_mass_gate=*/false);
        row.E_rel = rs.E_rel;
        row.I_rel = rs.I_rel;
    } else {
        row.E_rel = kNaN;
        row.I_rel = kNaN;
    }
    row.R_star = kNaN;
    row.R_weighted = kNaN;
    if (with_remainders) {
        if (s.ps.unweighted() && s.variables == Variables::SelfSimilar)
            row.R_star = rstar_remainder(s.field, s.ps).value;
        row.R_weighted = weighted_remainder(s.field, s.ps).value;
    }
    return row;
}

}  // namespace

FlowTrace run_flow(const FlowState& s0, double horizon, const FlowOptions& opt,
                   FlowState* final_state) {
    if (!(horizon > 0.0)) throw ConfigError("horizon must be positive");
    const bool drift = (s0.variables == Variables::SelfSimilar);
    FlowTrace trace;
    FlowState s = s0;
    trace.rows.push_back(sample_row(s, opt.with_remainders));
    double dt = opt.dt0;
    double next_sample = opt.adaptive ? std::min(opt.sample_interval, horizon) : horizon;
    const double t_end = s0.time + horizon;
    try {
        while (s.time < t_end - 1e-14 * horizon) {
            double step = opt.adaptive ? dt : opt.dt0;
            const double target = opt.adaptive ? std::min(s0.time + next_sample, t_end) : t_end;
            bool hit = false;
            if (s.time + step >= target - 1e-14 * horizon) {
                step = target - s.time;
                hit = true;
            }
            s.field = advance(s.field, s.ps, step, drift);
            s.time += step;
            if (!opt.adaptive || hit || s.time >= t_end - 1e-14 * horizon) {
                trace.rows.push_back(sample_row(s, opt.with_remainders));
                if (opt.adaptive) next_sample += opt.sample_interval;
            }
            if (opt.adaptive) dt = std::min(dt * opt.growth, opt.dt_max);
        }
    } catch (const Error& e) {
        trace.error = e.what();
    }
    if (final_state) *final_state = s;
    return trace;
}

RadialField initial_datum(const GridPtr& g, const ParamSet& ps, const std::string& name) {
    auto B = [&](double r) { return barenblatt_alpha(ps, r); };
    RadialField u;
    if (name == "barenblatt") {
        u = sample(g, B);
        return u;  // exact discrete Barenblatt, no renormalization
    }
    if (name == "dilated") {
        const double s = 1.1;
        u = sample(g, [&](double r) { return std::pow(s, ps.n) * B(s * r); });
    } else if (name == "squeezed") {
        // squeezed between 0.85 B and 1.2 B, so positivity is inherited
        u = sample(g, [&](double r) { return B(r) * (1.2 - 0.35 * std::exp(-r * r)); });
    } else if (name == "bump") {
        u = sample(g, [&](double r) {
            return B(r) * (1.0 + 0.5 * std::exp(-2.0 * (r - 1.0) * (r - 1.0)));
        });
    } else {
        throw ConfigError("unknown initial datum '" + name + "'");
    }
    return renormalize_mass(u, discrete_barenblatt_mass(g, ps));
}

}  // namespace ckn
