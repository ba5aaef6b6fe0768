// spectral.cpp -- mode pencils, spectral gap, the gauged symmetry-threshold
// form, and the nonlinear decay-rate oracle

#include "ckn/spectral.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>

#include "ckn/flow.hpp"
#include "ckn/functionals.hpp"
#include "ckn/profiles.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace ckn {

namespace {

// Lowest eigenpairs of the symmetric tridiagonal pencil (A, N) with N
// diagonal positive, through the diagonally scaled standard form
// S = N^{-1/2} A N^{-1/2}, which stays tridiagonal.
struct PencilSolve {
    Eigen::VectorXd eigenvalues;
    Eigen::MatrixXd vectors;  // columns, already mapped back (phi = N^{-1/2} v)
};

PencilSolve solve_pencil(const std::vector<double>& a_diag,
                         const std::vector<double>& a_off, const Eigen::VectorXd& N) {
    const int n = static_cast<int>(a_diag.size());
    Eigen::VectorXd sdiag(n), soff(n - 1);
    for (int i = 0; i < n; ++i) sdiag(i) = a_diag[static_cast<size_t>(i)] / N(i);
    for (int i = 0; i + 1 < n; ++i)
        soff(i) = a_off[static_cast<size_t>(i)] / std::sqrt(N(i) * N(i + 1));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(sdiag, soff, Eigen::ComputeEigenvectors);
    if (es.info() != Eigen::Success)
        throw EigensolverFailure("tridiagonal symmetric solve did not converge");
    PencilSolve out;
    out.eigenvalues = es.eigenvalues();
    out.vectors = N.array().sqrt().inverse().matrix().asDiagonal() * es.eigenvectors();
    return out;
}

// Tridiagonal matrix-vector product, for residuals and Rayleigh quotients.
Eigen::VectorXd tridiag_apply(const std::vector<double>& diag,
                              const std::vector<double>& off, const Eigen::VectorXd& x) {
    const int n = static_cast<int>(diag.size());
    Eigen::VectorXd y(n);
    for (int i = 0; i < n; ++i) {
        double v = diag[static_cast<size_t>(i)] * x(i);
        if (i > 0) v += off[static_cast<size_t>(i - 1)] * x(i - 1);
        if (i + 1 < n) v += off[static_cast<size_t>(i)] * x(i + 1);
        y(i) = v;
    }
    return y;
}

void fix_sign(std::vector<double>& v) {
    int imax = 0;
    double best = 0.0;
    for (int i = 0; i < static_cast<int>(v.size()); ++i)
        if (std::abs(v[static_cast<size_t>(i)]) > best) {
            best = std::abs(v[static_cast<size_t>(i)]);
            imax = i;
        }
    if (v[static_cast<size_t>(imax)] < 0.0)
        for (double& x : v) x = -x;
}

}  // namespace

ModeProblem assemble_mode(const ParamSet& ps, int ell, GridPtr grid) {
    if (ell < 0) throw ConfigError("harmonic index must be nonnegative");
    if (!grid) throw BadGridSpec("null grid");
    ModeProblem mp;
    mp.ps = ps;
    mp.ell = ell;
    mp.Lambda = static_cast<double>(ell) * (ell + ps.d - 2.0);
    mp.grid = grid;
    mp.convention.one_minus_m = 1.0 - ps.m;

    const int N = grid->cells;
    const double a2 = ps.alpha * ps.alpha;
    const double c = grid->measure_constant;
    mp.A_diag.assign(static_cast<size_t>(N), 0.0);
    mp.A_off.assign(static_cast<size_t>(N - 1), 0.0);
    mp.M_diag.assign(static_cast<size_t>(N), 0.0);

    for (int j = 1; j < N; ++j) {
        const double e = grid->edges[static_cast<size_t>(j)];
        const double dr = grid->centers[static_cast<size_t>(j)] -
                          grid->centers[static_cast<size_t>(j - 1)];
        const double k = c * std::pow(e, grid->n - 1.0) * a2 *
                         barenblatt_alpha(ps, e) / dr;
        mp.A_diag[static_cast<size_t>(j - 1)] += k;
        mp.A_diag[static_cast<size_t>(j)] += k;
        mp.A_off[static_cast<size_t>(j - 1)] -= k;
    }
    for (int i = 0; i < N; ++i) {
        const double r = grid->centers[static_cast<size_t>(i)];
        const double w = grid->weights[static_cast<size_t>(i)];
        const double B = barenblatt_alpha(ps, r);
        if (mp.Lambda > 0.0)
            mp.A_diag[static_cast<size_t>(i)] += mp.Lambda * w * B / (r * r);
        mp.M_diag[static_cast<size_t>(i)] = w * std::pow(B, 2.0 - ps.m);
    }
    return mp;
}

ModeSpectrum solve_spectrum(const ModeProblem& mp, int count, bool deflate_constants) {
    if (count < 1) throw ConfigError("eigenpair count must be >= 1");
    const int N = mp.grid->cells;
    Eigen::VectorXd M = Eigen::Map<const Eigen::VectorXd>(mp.M_diag.data(), N);
    const PencilSolve ps = solve_pencil(mp.A_diag, mp.A_off, M);

    // Unit constant direction in the M inner product, for kernel detection.
    Eigen::VectorXd x0 = M.array().sqrt();
    x0.normalize();

    const bool deflate = deflate_constants && mp.ell == 0;
    ModeSpectrum out;
    out.deflated = deflate;
    for (int k = 0; k < N && static_cast<int>(out.eigenvalues.size()) < count; ++k) {
        Eigen::VectorXd phi = ps.vectors.col(k);
        if (deflate) {
            const Eigen::VectorXd v = (M.array().sqrt() * phi.array()).matrix();
            if (std::abs(x0.dot(v)) / v.norm() > 0.5) continue;  // constant mode
        }
        // Rayleigh quotient of the computed vector: second-order accurate in
        // the solver's backward error (the raw eigenvalue carries an absolute
        // error ~eps*||S|| that would swamp the near-kernel modes).
        const Eigen::VectorXd Aphi = tridiag_apply(mp.A_diag, mp.A_off, phi);
        const double lambda = phi.dot(Aphi) / (M.array() * phi.array().square()).sum();
        const Eigen::VectorXd res = Aphi - lambda * (M.array() * phi.array()).matrix();
        const double mnorm = std::sqrt((M.array() * phi.array().square()).sum());
        phi /= mnorm;  // M-normalize
        std::vector<double> vec(phi.data(), phi.data() + N);
        fix_sign(vec);
        out.eigenvalues.push_back(lambda);
        out.eigenvectors.push_back(std::move(vec));
        out.residuals.push_back(res.norm() / (phi.norm() * mnorm));
    }
    if (static_cast<int>(out.eigenvalues.size()) < count)
        throw EigensolverFailure("fewer eigenpairs than requested after deflation");
    return out;
}

GapResult hardy_poincare_constant(const ParamSet& ps, GridPtr grid, int ell_max) {
    if (ell_max < 2) throw ConfigError("ell_max must be >= 2");
    GapResult best;
    best.lambda1 = std::numeric_limits<double>::infinity();
    best.grid = grid;
    for (int ell = 0; ell <= ell_max; ++ell) {
        const ModeProblem mp = assemble_mode(ps, ell, grid);
        const ModeSpectrum sp = solve_spectrum(mp, 1, true);
        if (sp.eigenvalues[0] < best.lambda1) {
            best.lambda1 = sp.eigenvalues[0];
            best.ell = ell;
            best.eigenvector = sp.eigenvectors[0];
        }
    }
    return best;
}

double q_form_min_eigenvalue(double d, double gamma, double p, double alpha,
                             int ell, int cells, double r_max) {
    if (alpha <= 0.0) throw Inadmissible("alpha must be positive");
    if (p <= 1.0) throw Inadmissible("p must exceed 1");
    const double n = (d - gamma) / alpha;
    const double beta = gamma + 2.0 * (alpha - 1.0);
    const double b = p / (p - 1.0);
    const double pm1 = p - 1.0;
    const double c1 = 2.0 * p * (d - gamma - p * (d - 2.0 - beta)) / (pm1 * pm1 * alpha);
    const double c2 = 4.0 * p * (2.0 * p - 1.0) / (pm1 * pm1);
    const double Lambda = static_cast<double>(ell) * (ell + d - 2.0);
    const double half = 0.5 * (n - 2.0);
    const double a = -half + std::sqrt(half * half + Lambda / (alpha * alpha));
    const double a2 = alpha * alpha;

    const GridPtr g = build_grid_raw(n, 1.0, r_max, cells, Spacing::Geometric);
    const int N = g->cells;
    const auto logphi = [&](double r) {
        return a * std::log(r) - b * std::log1p(r * r / a2);
    };

    std::vector<double> diag(static_cast<size_t>(N), 0.0);
    std::vector<double> off(static_cast<size_t>(N - 1), 0.0);
    Eigen::VectorXd weight(N);

    for (int j = 1; j < N; ++j) {
        const double e = g->edges[static_cast<size_t>(j)];
        const double dr = g->centers[static_cast<size_t>(j)] -
                          g->centers[static_cast<size_t>(j - 1)];
        const double k = a2 * std::pow(e, n - 1.0) * std::exp(2.0 * logphi(e)) / dr;
        diag[static_cast<size_t>(j - 1)] += k;
        diag[static_cast<size_t>(j)] += k;
        off[static_cast<size_t>(j - 1)] -= k;
    }
    for (int i = 0; i < N; ++i) {
        const double r = g->centers[static_cast<size_t>(i)];
        const double w = g->weights[static_cast<size_t>(i)];
        const double s = 1.0 + r * r / a2;
        const double phi2 = std::exp(2.0 * logphi(r));
        // Potential of the gauged form: with L = log phi,
        //   U = -alpha^2 (L'' + L'^2 + (n-1) L'/r) + Lambda/r^2 + c1/s - c2/s^2.
        const double Lp = a / r - 2.0 * b * r / (a2 * s);
        const double Lpp = -a / (r * r) - 2.0 * b / (a2 * s) +
                           4.0 * b * r * r / (a2 * a2 * s * s);
        const double U = -a2 * (Lpp + Lp * Lp + (n - 1.0) * Lp / r) +
                         Lambda / (r * r) + c1 / s - c2 / (s * s);
        diag[static_cast<size_t>(i)] += w * phi2 * U;
        weight(i) = w * phi2 / s;
    }

    const PencilSolve sol = solve_pencil(diag, off, weight);
    return sol.eigenvalues(0);
}

namespace {

struct ScanPoint {
    double min_eigenvalue = 0.0;
    int ell = 0;
};

ScanPoint min_over_harmonics(double d, double gamma, double p, double alpha,
                             int ell_max, int cells, double r_max) {
    ScanPoint out;
    out.min_eigenvalue = std::numeric_limits<double>::infinity();
    for (int ell = 1; ell <= ell_max; ++ell) {
        const double lam = q_form_min_eigenvalue(d, gamma, p, alpha, ell, cells, r_max);
        if (lam < out.min_eigenvalue) {
            out.min_eigenvalue = lam;
            out.ell = ell;
        }
    }
    return out;
}

}  // namespace

ThresholdResult symmetry_threshold_via_Q(double d, double gamma, double p,
                                         const ThresholdOptions& opt) {
    ThresholdResult res;
    const double dg = d - gamma;
    const double disc = dg * dg - 4.0 * (d - 1.0);
    res.alpha_hint = disc >= 0.0 ? 0.5 * (dg - std::sqrt(disc)) : 0.0;

    double lo = opt.bracket_lo > 0.0 ? opt.bracket_lo : 0.5 * res.alpha_hint;
    double hi = opt.bracket_hi > 0.0 ? opt.bracket_hi : 1.5 * res.alpha_hint;
    if (!(lo > 0.0) || !(hi > lo))
        throw ConfigError("threshold bracket is empty; supply bracket_lo/bracket_hi");

    const auto probe = [&](double alpha) {
        return min_over_harmonics(d, gamma, p, alpha, opt.ell_max, opt.cells, opt.r_max);
    };

    // Recorded scan across the bracket (this is the parallel sweep kernel;
    // bisection below stays serial).
    const int S = std::max(opt.scan_points, 2);
    res.scan.assign(static_cast<size_t>(S), ThresholdScanRow{});
    std::exception_ptr scan_error;  // exceptions cannot cross the parallel region
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) if (!opt.serial)
#endif
    for (int i = 0; i < S; ++i) {
        try {
            const double alpha = lo + (hi - lo) * i / (S - 1.0);
            const ScanPoint sp = probe(alpha);
            ThresholdScanRow row;
            row.alpha = alpha;
            row.min_eigenvalue = sp.min_eigenvalue;
            row.ell = sp.ell;
            row.radial_eigenvalue =
                q_form_min_eigenvalue(d, gamma, p, alpha, 0, opt.cells, opt.r_max);
            res.scan[static_cast<size_t>(i)] = row;
        } catch (...) {
#ifdef _OPENMP
#pragma omp critical
#endif
            if (!scan_error) scan_error = std::current_exception();
        }
    }
    if (scan_error) std::rethrow_exception(scan_error);

    double flo = probe(lo).min_eigenvalue;
    double fhi = probe(hi).min_eigenvalue;
    if (!(flo > 0.0 && fhi < 0.0))
        throw NoSignChange("quadratic-form minimum does not change sign over the bracket");
    while (hi - lo > opt.tolerance) {
        const double mid = 0.5 * (lo + hi);
        const double fm = probe(mid).min_eigenvalue;
        if (fm > 0.0)
            lo = mid;
        else
            hi = mid;
    }
    res.alpha_critical = 0.5 * (lo + hi);
    res.radial_at_threshold = q_form_min_eigenvalue(d, gamma, p, res.alpha_critical, 0,
                                                    opt.cells, opt.r_max);
    return res;
}

RateFit rate_oracle(const ParamSet& ps, GridPtr grid, double eps,
                    const std::optional<std::vector<double>>& f) {
    if (!grid) throw BadGridSpec("null grid");
    if (eps <= 0.0) throw ConfigError("perturbation amplitude must be positive");

    const int N = grid->cells;
    const ModeProblem mp = assemble_mode(ps, 0, grid);
    std::vector<double> mode;
    RateFit out;
    if (f) {
        if (static_cast<int>(f->size()) != N)
            throw ConfigError("perturbation profile size does not match the grid");
        const auto [mn, mx] = std::minmax_element(f->begin(), f->end());
        const double span = *mx - *mn;
        const double scale = std::max(std::abs(*mn), std::abs(*mx));
        if (span <= 1e-12 * std::max(scale, 1.0))
            throw ConfigError("constant perturbation is a mass-changing direction");
        mode = *f;
        // Rayleigh quotient under the same pencil convention.
        double num = 0.0, den = 0.0;
        for (int i = 0; i < N; ++i) {
            num += mp.A_diag[static_cast<size_t>(i)] * mode[static_cast<size_t>(i)] *
                   mode[static_cast<size_t>(i)];
            if (i + 1 < N)
                num += 2.0 * mp.A_off[static_cast<size_t>(i)] *
                       mode[static_cast<size_t>(i)] * mode[static_cast<size_t>(i + 1)];
            den += mp.M_diag[static_cast<size_t>(i)] * mode[static_cast<size_t>(i)] *
                   mode[static_cast<size_t>(i)];
        }
        out.lambda = num / den;
    } else {
        const ModeSpectrum sp = solve_spectrum(mp, 1, true);
        mode = sp.eigenvectors[0];
        out.lambda = sp.eigenvalues[0];
    }
    out.predicted_rate = mp.convention.pencil_to_rate(out.lambda);

    // normalize the actual relative perturbation mode * B^{1-m} to sup = eps;
    // normalizing the raw mode instead would be dominated by its tail growth
    // and leave the datum orders of magnitude closer to the profile than eps
    std::vector<double> prod(static_cast<size_t>(N));
    double pmax = 0.0;
    for (int i = 0; i < N; ++i) {
        const double r = grid->centers[static_cast<size_t>(i)];
        const double B = barenblatt_alpha(ps, r);
        prod[static_cast<size_t>(i)] = mode[static_cast<size_t>(i)] * std::pow(B, 1.0 - ps.m);
        pmax = std::max(pmax, std::abs(prod[static_cast<size_t>(i)]));
    }
    RadialField u0(grid);
    for (int i = 0; i < N; ++i) {
        const double r = grid->centers[static_cast<size_t>(i)];
        const double B = barenblatt_alpha(ps, r);
        u0[i] = B * (1.0 + eps * prod[static_cast<size_t>(i)] / pmax);
    }
    u0 = renormalize_mass(u0, discrete_barenblatt_mass(grid, ps));

    FlowState s0{u0, 0.0, Variables::SelfSimilar, ps};
    FlowOptions fo;
    fo.with_remainders = false;
    fo.sample_interval = 0.02;
    fo.dt_max = std::min(0.04 / std::max(out.predicted_rate, 1.0), 0.01);
    const double E0 = std::max(relative_suite(u0, ps, false).E_rel, 1e-12);
    const double horizon =
        std::min(std::log(E0 / 1e-11) / std::max(out.predicted_rate, 0.5) + 1.0, 60.0);
    const FlowTrace tr = run_flow(s0, horizon, fo);
    if (!tr.ok()) throw FitFailure("flow aborted: " + tr.error);

    // fit window: below the early nonlinear transient, above the rounding floor
    const double win_hi = std::min(1e-4, 0.9 * E0);
    const double win_lo = std::max(1e-10, 1e-5 * E0);
    std::vector<double> taus, logE, logI;
    for (const TraceRow& row : tr.rows) {
        if (!(row.E_rel >= win_lo && row.E_rel <= win_hi)) continue;
        if (!(row.I_rel > 0.0)) continue;
        taus.push_back(row.tau);
        logE.push_back(std::log(row.E_rel));
        logI.push_back(std::log(row.I_rel));
    }
    out.points = static_cast<int>(taus.size());
    if (out.points < 5) throw FitFailure("fewer than 5 samples in the fit window");

    const auto fit = [&](const std::vector<double>& y, double& rate) {
        const int K = static_cast<int>(taus.size());
        double st = 0.0, sy = 0.0, stt = 0.0, sty = 0.0;
        for (int i = 0; i < K; ++i) {
            st += taus[static_cast<size_t>(i)];
            sy += y[static_cast<size_t>(i)];
            stt += taus[static_cast<size_t>(i)] * taus[static_cast<size_t>(i)];
            sty += taus[static_cast<size_t>(i)] * y[static_cast<size_t>(i)];
        }
        const double denom = K * stt - st * st;
        if (std::abs(denom) < 1e-30) throw FitFailure("degenerate fit abscissae");
        const double slope = (K * sty - st * sy) / denom;
        const double intercept = (sy - slope * st) / K;
        double resid = 0.0;
        for (int i = 0; i < K; ++i)
            resid = std::max(resid, std::abs(y[static_cast<size_t>(i)] - intercept -
                                             slope * taus[static_cast<size_t>(i)]));
        rate = -slope;
        return resid;
    };
    double rE = 0.0, rI = 0.0;
    const double residE = fit(logE, rE);
    const double residI = fit(logI, rI);
    out.rate_E = rE;
    out.rate_I = rI;
    out.fit_residual = std::max(residE, residI);
    if (out.fit_residual > 0.5) throw FitFailure("log-linear fit residual too large");
    out.contaminated = eps > 1e-3 || out.fit_residual > 5e-3;
    return out;
}

}  // namespace ckn
