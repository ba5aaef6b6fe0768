// functionals.cpp
#include "ckn/functionals.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/special_functions/legendre.hpp>
#include <cmath>
#include <vector>

#include "ckn/profiles.hpp"

namespace ckn {

namespace {

void require_positive(const RadialField& u, const char* who) {
    for (int i = 0; i < u.size(); ++i)
        if (!(u[i] > 0.0)) throw NonPositiveDensity(who);
}

// Edge-based quadrature of  integral u * s^2 r^{n-1} c dr  where s is the edge
// derivative scaled by `deriv_factor` (e.g. alpha) and u is edge-averaged.
// This pairing is exactly the one produced by summation by parts against the
// flux-form divergence, so entropy-production identities hold discretely.
double edge_energy(const RadialField& u, const std::vector<double>& edge_slope,
                   double deriv_factor) {
    const RadialGrid& g = *u.grid;
    const auto um = edge_mean(u);
    double s = 0.0;
    for (int j = 1; j < g.cells; ++j) {
        const double dr = g.centers[static_cast<size_t>(j)] - g.centers[static_cast<size_t>(j) - 1];
        const double z = deriv_factor * edge_slope[static_cast<size_t>(j)];
        s += g.measure_constant * std::pow(g.edges[static_cast<size_t>(j)], g.n - 1.0) *
             um[static_cast<size_t>(j)] * z * z * dr;
    }
    return s;
}

RadialField pointwise_pow(const RadialField& u, double e) {
    RadialField out(u.grid);
    for (int i = 0; i < u.size(); ++i) out[i] = std::pow(u[i], e);
    return out;
}

double weighted_sum(const RadialField& w8, const std::vector<double>& f) {
    double s = 0.0;
    for (int i = 0; i < w8.size(); ++i)
        s += w8.grid->weights[static_cast<size_t>(i)] * w8[i] * f[static_cast<size_t>(i)];
    return s;
}

}  // namespace

EntropySuite entropy_suite(const RadialField& u, const ParamSet& ps) {
    require_positive(u, "entropy_suite");
    EntropySuite out;
    const RadialField um = pointwise_pow(u, ps.m);
    out.E = integrate(um);
    const int last = u.size() - 1;
    out.tail_fraction = u.grid->weights[static_cast<size_t>(last)] * um[last] / out.E;
    out.F = std::pow(out.E, ps.sigma);

    const RadialField P = pressure(u, ps);
    out.I = edge_energy(u, edge_derivative(P), ps.alpha);
    out.G = std::pow(out.E, ps.sigma - 1.0) * out.I;
    return out;
}

double discrete_barenblatt_mass(const GridPtr& g, const ParamSet& ps) {
    return integrate(sample(g, [&](double r) { return barenblatt_alpha(ps, r); }));
}

RadialField renormalize_mass(const RadialField& u, double target_mass) {
    const double m0 = integrate(u);
    if (!(m0 > 0.0)) throw NonPositiveDensity("renormalize_mass: zero mass");
    RadialField out(u.grid);
    for (int i = 0; i < u.size(); ++i) out[i] = u[i] * target_mass / m0;
    return out;
}

RelativeSuite relative_suite(const RadialField& u, const ParamSet& ps, bool enforce_mass_gate) {
    require_positive(u, "relative_suite");
    const RadialGrid& g = *u.grid;
    RelativeSuite out;
    const RadialField B = sample(u.grid, [&](double r) { return barenblatt_alpha(ps, r); });
    out.mass = integrate(u);
    out.reference_mass = integrate(B);
    if (enforce_mass_gate &&
        std::fabs(out.mass - out.reference_mass) > 1e-6 * out.reference_mass)
        throw MassMismatch("relative functionals need mass equal to the Barenblatt mass");

    const double m = ps.m;
    double erel = 0.0;
    for (int i = 0; i < u.size(); ++i) {
        const double bm1 = std::pow(B[i], m - 1.0);
        erel -= g.weights[static_cast<size_t>(i)] / m *
                (std::pow(u[i], m) - bm1 * B[i] - m * bm1 * (u[i] - B[i]));
    }
    out.E_rel = erel;

    // z = alpha d/dr (u^{m-1} - (1 + r^2/alpha^2)) at interior edges
    RadialField q(u.grid);
    for (int i = 0; i < u.size(); ++i) {
        const double r = g.centers[static_cast<size_t>(i)];
        q[i] = std::pow(u[i], m - 1.0) - (1.0 + r * r / (ps.alpha * ps.alpha));
    }
    out.I_rel = edge_energy(u, edge_derivative(q), ps.alpha);
    return out;
}

FunctionalReport renyi_remainder(const RadialField& v, const ParamSet& ps) {
    if (!ps.unweighted()) throw Inadmissible("renyi_remainder is an unweighted functional");
    require_positive(v, "renyi_remainder");
    const RadialGrid& g = *v.grid;
    const int d = ps.d;

    const RadialField vm = pointwise_pow(v, ps.m);
    const double E = integrate(vm);
    const RadialField P = pressure(v, ps);
    const RadialField P1 = apply_Dalpha(P, 1.0);
    const RadialField P2 = second_derivative(P);

    std::vector<double> lap(static_cast<size_t>(v.size()));
    std::vector<double> trless(static_cast<size_t>(v.size()));
    for (int i = 0; i < v.size(); ++i) {
        const double r = g.centers[static_cast<size_t>(i)];
        lap[static_cast<size_t>(i)] = P2[i] + (d - 1.0) * P1[i] / r;
        trless[static_cast<size_t>(i)] = P2[i] - P1[i] / r;
    }
    // the flow identity int v |grad P|^2 = int v^m Delta P makes I/E the
    // v^m-weighted mean of Delta P; use that mean so the variance term is a
    // genuine variance (exactly zero for quadratic pressure)
    const double mean = weighted_sum(vm, lap) / E;
    std::vector<double> var(static_cast<size_t>(v.size()));
    std::vector<double> tr2(static_cast<size_t>(v.size()));
    for (size_t i = 0; i < var.size(); ++i) {
        var[i] = (lap[i] - mean) * (lap[i] - mean);
        tr2[i] = trless[i] * trless[i];
    }
    const double es1 = std::pow(E, ps.sigma - 1.0);
    FunctionalReport rep;
    rep.name = "renyi_remainder";
    rep.terms["variance_term"] =
        (ps.sigma - 1.0) * (1.0 - ps.m) * es1 * weighted_sum(vm, var);
    rep.terms["traceless_term"] = 2.0 * es1 * (d - 1.0) / d * weighted_sum(vm, tr2);
    rep.terms["mean_laplacian"] = mean;
    rep.value = rep.terms["variance_term"] + rep.terms["traceless_term"];
    return rep;
}

FunctionalReport rstar_remainder(const RadialField& u, const ParamSet& ps) {
    if (!ps.unweighted()) throw Inadmissible("rstar_remainder is an unweighted functional");
    require_positive(u, "rstar_remainder");
    const RadialGrid& g = *u.grid;
    const int d = ps.d;
    const double m = ps.m;
    const double m1 = ps.m1;

    const RadialField um = pointwise_pow(u, m);
    const double E = integrate(um);
    const RadialField pp = pointwise_pow(u, m - 1.0);  // pressure-like variable u^{m-1}
    const RadialField p1 = apply_Dalpha(pp, 1.0);
    const RadialField p2 = second_derivative(pp);

    std::vector<double> lap(static_cast<size_t>(u.size()));
    std::vector<double> tr2(static_cast<size_t>(u.size()));
    std::vector<double> lap2(static_cast<size_t>(u.size()));
    std::vector<double> lap_shift2(static_cast<size_t>(u.size()));
    for (int i = 0; i < u.size(); ++i) {
        const double r = g.centers[static_cast<size_t>(i)];
        const double L = p2[i] + (d - 1.0) * p1[i] / r;
        const double T = p2[i] - p1[i] / r;
        lap[static_cast<size_t>(i)] = L;
        tr2[static_cast<size_t>(i)] = (d - 1.0) / d * T * T;
        lap2[static_cast<size_t>(i)] = L * L;
        lap_shift2[static_cast<size_t>(i)] = (L - 2.0 * d) * (L - 2.0 * d);
    }
    const double fisher_p = edge_energy(u, edge_derivative(pp), 1.0);  // int u |grad u^{m-1}|^2

    FunctionalReport rep;
    rep.name = "rstar_remainder";
    const double t_traceless = 2.0 * (1.0 - m) / m * weighted_sum(um, tr2);
    const double t_lap = 2.0 * (m - m1) * (1.0 - m) / m * weighted_sum(um, lap2);
    const double t_fisher = -8.0 * d * (m - m1) * fisher_p;
    const double t_const = 8.0 * d * d / m * (m - m1) * (1.0 - m) * E;
    const double t_square = 2.0 * (m - m1) * (1.0 - m) / m * weighted_sum(um, lap_shift2);

    rep.terms["traceless_term"] = t_traceless;
    rep.terms["laplacian_sq_term"] = t_lap;
    rep.terms["fisher_term"] = t_fisher;
    rep.terms["entropy_term"] = t_const;
    rep.terms["form_a"] = t_traceless + t_lap + t_fisher + t_const;
    rep.terms["form_b"] = t_traceless + t_square;
    const double scale = std::max(std::fabs(rep.terms["form_a"]), std::fabs(rep.terms["form_b"]));
    rep.terms["gap"] =
        scale > 0.0 ? std::fabs(rep.terms["form_a"] - rep.terms["form_b"]) / scale : 0.0;
    rep.value = rep.terms["form_b"];
    return rep;
}

namespace {

// Sphere-average of F(Y, |grad_omega Y|^2) for the unit-mean-square harmonic
// of index ell, by quadrature over the polar angle (d=3) or the circle (d=2).
template <typename F>
double sphere_average(int d, int ell, F&& f) {
    if (d == 2) {
        const int M = 512;
        double s = 0.0;
        for (int k = 0; k < M; ++k) {
            const double th = 2.0 * M_PI * (k + 0.5) / M;
            const double y = std::sqrt(2.0) * std::cos(ell * th);
            const double gy2 = 2.0 * ell * ell * std::sin(ell * th) * std::sin(ell * th);
            s += f(y, gy2);
        }
        return s / M;
    }
    if (d == 3) {
        // Y = sqrt(2l+1) P_l(cos theta); average over cos theta in [-1,1]
        const double nrm = std::sqrt(2.0 * ell + 1.0);
        auto integrand = [&](double x) {
            const double y = nrm * boost::math::legendre_p(ell, x);
            const double dy = nrm * boost::math::legendre_p_prime(ell, x);
            const double gy2 = (1.0 - x * x) * dy * dy;
            return f(y, gy2);
        };
        return 0.5 * boost::math::quadrature::gauss<double, 128>::integrate(integrand, -1.0, 1.0);
    }
    throw UnsupportedDimension("sphere quadrature implemented for d in {2,3} only");
}

}  // namespace

FunctionalReport weighted_remainder(const RadialField& gf, const ParamSet& ps,
                                    const std::optional<AngularMode>& mode) {
    require_positive(gf, "weighted_remainder");
    const RadialGrid& g = *gf.grid;
    const double a2 = ps.alpha * ps.alpha;
    const double n = ps.n;

    const RadialField gm = pointwise_pow(gf, ps.m);
    const RadialField P = pressure(gf, ps);
    const RadialField P1 = apply_Dalpha(P, 1.0);
    const RadialField P2 = second_derivative(P);

    FunctionalReport rep;
    rep.name = "weighted_remainder";
    const int N = gf.size();

    // radial square of the base profile
    std::vector<double> base(static_cast<size_t>(N));
    for (int i = 0; i < N; ++i) {
        const double r = g.centers[static_cast<size_t>(i)];
        const double T = P2[i] - P1[i] / r;
        base[static_cast<size_t>(i)] = T * T;
    }
    rep.terms["radial_square"] = a2 * a2 * (1.0 - 1.0 / n) * weighted_sum(gm, base);
    rep.terms["mixed_square"] = 0.0;
    rep.terms["fs_coefficient"] = (n - 2.0) * (ps.alpha_FS * ps.alpha_FS - a2);
    rep.terms["fs_term"] = 0.0;
    rep.terms["quartic_raw"] = 0.0;

    if (mode && mode->amplitude != 0.0) {
        const int ell = mode->ell;
        const double eps = mode->amplitude;
        const double Lam = ell * (ell + ps.d - 2.0);
        // angular amplitude of the perturbed pressure: c(r) = eps * P(r)
        RadialField c(gf.grid);
        for (int i = 0; i < N; ++i) c[i] = eps * P[i];
        const RadialField c1 = apply_Dalpha(c, 1.0);
        const RadialField c2 = second_derivative(c);

        std::vector<double> rad(static_cast<size_t>(N));
        std::vector<double> mix(static_cast<size_t>(N));
        std::vector<double> fs(static_cast<size_t>(N));
        std::vector<double> quart(static_cast<size_t>(N));
        for (int i = 0; i < N; ++i) {
            const double r = g.centers[static_cast<size_t>(i)];
            const double A = c2[i] - c1[i] / r + Lam * c[i] / (a2 * (n - 1.0) * r * r);
            rad[static_cast<size_t>(i)] = A * A;
            const double Bq = c1[i] - c[i] / r;
            mix[static_cast<size_t>(i)] = Bq * Bq / (r * r);
            fs[static_cast<size_t>(i)] = c[i] * c[i] / (r * r * r * r);
            const double P0 = P[i], ci = c[i];
            quart[static_cast<size_t>(i)] =
                sphere_average(ps.d, ell,
                               [&](double y, double gy2) {
                                   const double pf = P0 + ci * y;
                                   return gy2 * gy2 * ci * ci * ci * ci / (pf * pf);
                               }) /
                (r * r * r * r);
        }
        rep.terms["radial_square"] += a2 * a2 * (1.0 - 1.0 / n) * weighted_sum(gm, rad);
        rep.terms["mixed_square"] = 2.0 * a2 * Lam * weighted_sum(gm, mix);
        rep.terms["fs_term"] = rep.terms["fs_coefficient"] * Lam * weighted_sum(gm, fs);
        rep.terms["quartic_raw"] = weighted_sum(gm, quart);
    }
    rep.value = rep.terms["radial_square"] + rep.terms["mixed_square"] + rep.terms["fs_term"] +
                rep.terms["quartic_raw"];
    return rep;
}

IdentityCheck blw_identity_check(const RadialField& v, const ParamSet& ps) {
    if (!ps.unweighted()) throw Inadmissible("blw_identity_check is an unweighted identity");
    require_positive(v, "blw_identity_check");
    const RadialGrid& g = *v.grid;
    const int d = ps.d;
    const double m = ps.m;
    const int N = v.size();

    const RadialField vm = pointwise_pow(v, m);
    const RadialField P = pressure(v, ps);
    const RadialField P1 = apply_Dalpha(P, 1.0);
    const RadialField P2 = second_derivative(P);
    const RadialField vm1 = apply_Dalpha(vm, 1.0);
    const RadialField vm2 = second_derivative(vm);

    // tail guard: heavy tails make both improper integrals untrustworthy
    {
        const int i = N - 1;
        const double r = g.centers[static_cast<size_t>(i)];
        const double lapP = P2[i] + (d - 1.0) * P1[i] / r;
        const double tail = std::fabs(g.weights[static_cast<size_t>(i)] * vm[i] * lapP * lapP);
        double total = 0.0;
        for (int k = 0; k < N; ++k) {
            const double rk = g.centers[static_cast<size_t>(k)];
            const double lp = P2[k] + (d - 1.0) * P1[k] / rk;
            total += std::fabs(g.weights[static_cast<size_t>(k)] * vm[k] * lp * lp);
        }
        // the integrand only decays like r^-4 even for profile-like data
        // (the pressure grows quadratically), so the guard is deliberately loose
        if (tail > 1e-4 * total)
            throw TailTruncation("field decays too slowly for the identity check");
    }

    // rhs = -2 int v^m (||D2 P||^2 - (1-m)(Delta P)^2)
    double rhs = 0.0;
    for (int i = 0; i < N; ++i) {
        const double r = g.centers[static_cast<size_t>(i)];
        const double h2 = P2[i] * P2[i] + (d - 1.0) * (P1[i] / r) * (P1[i] / r);
        const double lap = P2[i] + (d - 1.0) * P1[i] / r;
        rhs += -2.0 * g.weights[static_cast<size_t>(i)] * vm[i] * (h2 - (1.0 - m) * lap * lap);
    }

    // lhs = int Delta(v^m) |grad P|^2 + 2 int v P' d/dr[P_t] with the pressure
    // equation P_t = (1-m) P Delta P - |grad P|^2 (P = m/(1-m) v^{m-1} > 0)
    RadialField inner(v.grid);
    for (int i = 0; i < N; ++i) {
        const double r = g.centers[static_cast<size_t>(i)];
        const double lap = P2[i] + (d - 1.0) * P1[i] / r;
        inner[i] = (1.0 - m) * P[i] * lap - P1[i] * P1[i];
    }
    const RadialField inner1 = apply_Dalpha(inner, 1.0);
    double lhs = 0.0;
    for (int i = 0; i < N; ++i) {
        const double r = g.centers[static_cast<size_t>(i)];
        const double lap_vm = vm2[i] + (d - 1.0) * vm1[i] / r;
        lhs += g.weights[static_cast<size_t>(i)] *
               (lap_vm * P1[i] * P1[i] + 2.0 * v[i] * P1[i] * inner1[i]);
    }

    IdentityCheck out;
    out.lhs = lhs;
    out.rhs = rhs;
    out.gap = std::fabs(lhs - rhs);
    return out;
}

double gn_theta(const ParamSet& ps) {
    const double q = 1.0 / (2.0 * ps.m - 1.0);
    return ps.d * (q - 1.0) / (q * (ps.d + 2.0 - (ps.d - 2.0) * q));
}

namespace {

struct GnNorms {
    double grad2;  // ||grad w||_2^2
    double nq1;    // ||w||_{q+1}
    double n2q;    // ||w||_{2q}
};

GnNorms gn_norms(const RadialField& w, double q) {
    GnNorms out;
    out.grad2 = edge_energy(
        // |grad w|^2 needs no density factor; feed u = 1 to the edge mean
        RadialField(w.grid, std::vector<double>(static_cast<size_t>(w.size()), 1.0)),
        edge_derivative(w), 1.0);
    double sq1 = 0.0, s2q = 0.0;
    for (int i = 0; i < w.size(); ++i) {
        const double a = std::fabs(w[i]);
        sq1 += w.grid->weights[static_cast<size_t>(i)] * std::pow(a, q + 1.0);
        s2q += w.grid->weights[static_cast<size_t>(i)] * std::pow(a, 2.0 * q);
    }
    out.nq1 = std::pow(sq1, 1.0 / (q + 1.0));
    out.n2q = std::pow(s2q, 1.0 / (2.0 * q));
    if (!std::isfinite(out.grad2) || !std::isfinite(out.nq1) || !std::isfinite(out.n2q))
        throw NormOverflow("gn_deficit norms are not finite");
    return out;
}

double gn_lhs(const GnNorms& nm, double theta) {
    return nm.grad2 * std::pow(nm.nq1, 2.0 * (1.0 - theta) / theta);
}

}  // namespace

FunctionalReport gn_deficit(const RadialField& w, const ParamSet& ps) {
    if (!ps.unweighted()) throw Inadmissible("gn_deficit is an unweighted functional");
    const double q = 1.0 / (2.0 * ps.m - 1.0);
    const double theta = gn_theta(ps);

    const GnNorms nm = gn_norms(w, q);

    // reference: the optimizer w = B*^{m-1/2}, same grid, same quadrature
    const RadialField wopt =
        sample(w.grid, [&](double r) { return std::pow(barenblatt_star(ps, r), ps.m - 0.5); });
    const GnNorms ref = gn_norms(wopt, q);
    const double c_pow = gn_lhs(ref, theta) / std::pow(ref.n2q, 2.0 / theta);  // C^{2/theta}

    FunctionalReport rep;
    rep.name = "gn_deficit";
    rep.terms["grad2"] = nm.grad2;
    rep.terms["norm_q1"] = nm.nq1;
    rep.terms["norm_2q"] = nm.n2q;
    // c_pow = C^{-2/theta}, so the constant itself is c_pow^{-theta/2}
    rep.terms["cgn_pow_grid"] = c_pow;
    rep.terms["cgn_grid"] = std::pow(c_pow, -0.5 * theta);
    rep.terms["theta"] = theta;
    rep.value = gn_lhs(nm, theta) - c_pow * std::pow(nm.n2q, 2.0 / theta);
    return rep;
}

}  // namespace ckn
