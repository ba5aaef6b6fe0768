// params.cpp -- parameter algebra, admissibility, region classification, C_GN
#include "ckn/params.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <limits>
#include <sstream>

namespace ckn {

namespace {

void check_finite(double x, const char* name) {
    if (!std::isfinite(x)) throw Inadmissible(std::string(name) + " is not finite");
}

}  // namespace

double beta_fs_of_gamma(int d, double gamma) {
    const double disc = (gamma - d) * (gamma - d) - 4.0 * (d - 1);
    if (disc < 0.0) {
        std::ostringstream os;
        os << "beta_FS undefined: (gamma-d)^2 - 4(d-1) = " << disc << " < 0 at gamma=" << gamma;
        throw Inadmissible(os.str());
    }
    return d - 2.0 - std::sqrt(disc);
}

ParamSet derive_params(int d, double beta, double gamma, double p, Mode mode) {
    check_finite(beta, "beta");
    check_finite(gamma, "gamma");
    check_finite(p, "p");

    ParamSet ps;
    ps.d = d;
    ps.beta = beta;
    ps.gamma = gamma;
    ps.p = p;
    ps.mode = mode;

    const bool unweighted = (beta == 0.0 && gamma == 0.0);
    if (mode == Mode::UnweightedGN) {
        if (!unweighted) throw Inadmissible("unweighted GN mode requires beta = gamma = 0");
        if (d < 1) throw Inadmissible("d must be >= 1");
    } else {
        if (d < 2) throw Inadmissible("d must be >= 2 (use unweighted GN mode for d=1)");
    }

    if (gamma >= d) throw Inadmissible("gamma must be < d");
    if (beta + 2.0 - gamma <= 0.0)
        throw DegenerateDenominator("beta + 2 - gamma must be > 0");
    if (d - beta - 2.0 <= 0.0 && !(mode == Mode::UnweightedGN && d <= 2))
        throw DegenerateDenominator("d - beta - 2 must be > 0");

    if (!unweighted) {
        if (!(gamma - 2.0 < beta)) throw Inadmissible("beta must be > gamma - 2");
        if (!(beta < (d - 2.0) * gamma / d)) throw Inadmissible("beta must be < (d-2) gamma / d");
    }

    ps.alpha = 1.0 + 0.5 * (beta - gamma);
    ps.n = 2.0 * (d - gamma) / (beta + 2.0 - gamma);
    ps.delta = d - ps.n;
    ps.m = (p + 1.0) / (2.0 * p);
    ps.m_c = (d - 2.0 - beta) / (d - gamma);
    ps.m1 = (2.0 * d - 2.0 - beta - gamma) / (2.0 * (d - gamma));
    if (mode == Mode::UnweightedGN && d <= 2) {
        // p_star is +infinity in the low-dimensional GN range q in (1, infinity)
        ps.p_star = std::numeric_limits<double>::infinity();
    } else {
        ps.p_star = (d - gamma) / (d - beta - 2.0);
    }
    if (!(p > 1.0)) throw Inadmissible("p must be > 1");
    // tiny relative slack: p derived from m can overshoot p_star by rounding
    if (!(p <= ps.p_star * (1.0 + 1e-12))) {
        std::ostringstream os;
        os << "p = " << p << " exceeds p_star = " << ps.p_star;
        throw Inadmissible(os.str());
    }
    ps.sigma = (ps.m - ps.m_c) / (1.0 - ps.m);
    ps.mu = 2.0 + ps.n * (ps.m - 1.0);
    ps.mu_star = (d - gamma) * (ps.m - ps.m_c);
    ps.kappa = std::pow(2.0 * ps.m / (1.0 - ps.m), 1.0 / ps.mu);
    const double vt_den = p * (d + beta + 2.0 - 2.0 * gamma - p * (d - beta - 2.0));
    ps.vartheta = (vt_den == 0.0) ? std::numeric_limits<double>::quiet_NaN()
                                  : (d - gamma) * (p - 1.0) / vt_den;
    const double disc = (gamma - d) * (gamma - d) - 4.0 * (d - 1);
    ps.beta_FS = (disc >= 0.0) ? d - 2.0 - std::sqrt(disc)
                               : std::numeric_limits<double>::quiet_NaN();
    ps.alpha_FS = std::sqrt((d - 1.0) / (ps.n - 1.0));

    return ps;
}

ParamSet derive_params_from_m(int d, double beta, double gamma, double m_in, Mode mode) {
    if (!(m_in > 0.5 && m_in < 1.0))
        throw Inadmissible("m must lie in (1/2, 1) so that p = 1/(2m-1) is in (1, inf)");
    const double p = 1.0 / (2.0 * m_in - 1.0);
    return derive_params(d, beta, gamma, p, mode);
}

RegionClass classify_region(const ParamSet& ps, double fs_tol) {
    if (ps.gamma >= 0.0) return RegionClass::Symmetry;
    // gamma < 0 branch: the FS curve must be real here
    const double bfs = beta_fs_of_gamma(ps.d, ps.gamma);
    if (std::fabs(ps.beta - bfs) < fs_tol) return RegionClass::FSBoundary;
    if (ps.beta > bfs) return RegionClass::SymmetryBreaking;
    return RegionClass::Symmetry;
}

BarenblattIntegrals barenblatt_integrals(const ParamSet& ps) {
    if (!ps.unweighted()) throw Inadmissible("Barenblatt integrals require beta = gamma = 0");
    const double m = ps.m;
    const double em = 1.0 / (m - 1.0);  // negative exponent of (1 + r^2)
    const double ang = sphere_area(ps.d);
    boost::math::quadrature::tanh_sinh<double> integ;

    // substitute r = s/(1-s) to map (0,inf) to (0,1)
    auto on_unit = [&](auto f) {
        return [f](double s) {
            const double r = s / (1.0 - s);
            const double jac = 1.0 / ((1.0 - s) * (1.0 - s));
            return f(r) * jac;
        };
    };

    const int d = ps.d;
    auto mass_f = on_unit([=](double r) {
        return std::pow(r, d - 1) * std::exp(em * std::log1p(r * r));
    });
    auto ent_f = on_unit([=](double r) {
        return std::pow(r, d - 1) * std::exp(m * em * std::log1p(r * r));
    });
    // pressure of B*: P = m/(1-m) (1+r^2), so |grad P|^2 = (2 m r/(1-m))^2
    auto fis_f = on_unit([=](double r) {
        const double gp = 2.0 * m * r / (1.0 - m);
        return std::pow(r, d - 1) * std::exp(em * std::log1p(r * r)) * gp * gp;
    });

    double err1 = 0, err2 = 0, err3 = 0;
    BarenblattIntegrals out;
    out.mass = ang * integ.integrate(mass_f, 0.0, 1.0, 1e-12, &err1);
    out.entropy = ang * integ.integrate(ent_f, 0.0, 1.0, 1e-12, &err2);
    out.fisher = ang * integ.integrate(fis_f, 0.0, 1.0, 1e-12, &err3);
    if (err1 > 1e-8 || err2 > 1e-8 || err3 > 1e-8)
        throw QuadratureFailure("Barenblatt integrals did not converge");
    out.g_functional = std::pow(out.entropy, ps.sigma - 1.0) * out.fisher;
    return out;
}

double optimal_gn_constant(const ParamSet& ps) {
    if (!ps.unweighted()) throw Inadmissible("C_GN is defined for beta = gamma = 0 only");
    if (!(ps.p > 1.0)) throw Inadmissible("p must exceed 1 (q = 1/(2m-1) must exceed 1)");
    const double q = 1.0 / (2.0 * ps.m - 1.0);
    const int d = ps.d;
    // theta of ||w||_{2q} <= C ||grad w||_2^theta ||w||_{q+1}^{1-theta}
    const double theta = d * (q - 1.0) / (q * (d + 2.0 - (d - 2.0) * q));
    if (!(theta > 0.0 && theta <= 1.0))
        throw Inadmissible("q outside the admissible GN range for this dimension");

    // evaluate the quotient at the optimizer w = (1+r^2)^{-1/(q-1)} by
    // adaptive quadrature (independent of any grid)
    const double e = -1.0 / (q - 1.0);
    const double ang = sphere_area(d);
    boost::math::quadrature::tanh_sinh<double> integ;
    auto on_unit = [](auto f) {
        return [f](double s) {
            const double r = s / (1.0 - s);
            return f(r) / ((1.0 - s) * (1.0 - s));
        };
    };
    auto wpow = [e](double r, double k) { return std::exp(k * e * std::log1p(r * r)); };
    auto grad_f = on_unit([=](double r) {
        const double dw = 2.0 * e * r * wpow(r, 1.0) / (1.0 + r * r);
        return std::pow(r, d - 1) * dw * dw;
    });
    auto q1_f = on_unit([=](double r) { return std::pow(r, d - 1) * wpow(r, q + 1.0); });
    auto q2_f = on_unit([=](double r) { return std::pow(r, d - 1) * wpow(r, 2.0 * q); });
    double e1 = 0, e2 = 0, e3 = 0;
    const double grad2 = ang * integ.integrate(grad_f, 0.0, 1.0, 1e-12, &e1);
    const double nq1 = std::pow(ang * integ.integrate(q1_f, 0.0, 1.0, 1e-12, &e2),
                                1.0 / (q + 1.0));
    const double n2q = std::pow(ang * integ.integrate(q2_f, 0.0, 1.0, 1e-12, &e3),
                                0.5 / q);
    if (e1 > 1e-8 || e2 > 1e-8 || e3 > 1e-8)
        throw QuadratureFailure("GN constant quadrature did not converge");
    return n2q / (std::pow(grad2, 0.5 * theta) * std::pow(nq1, 1.0 - theta));
}

std::map<std::string, double> ParamSet::to_record() const {
    return {
        {"d", static_cast<double>(d)},
        {"beta", beta},
        {"gamma", gamma},
        {"p", p},
        {"alpha", alpha},
        {"n", n},
        {"delta", delta},
        {"m", m},
        {"m_c", m_c},
        {"m1", m1},
        {"sigma", sigma},
        {"mu", mu},
        {"mu_star", mu_star},
        {"kappa", kappa},
        {"p_star", p_star},
        {"vartheta", vartheta},
        {"beta_FS", beta_FS},
        {"alpha_FS", alpha_FS},
    };
}

}  // namespace ckn
