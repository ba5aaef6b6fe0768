// sweep.cpp -- region map over the (gamma, beta) parameter plane

#include "ckn/sweep.hpp"

#include <cmath>
#include <limits>

#include "ckn/spectral.hpp"

namespace ckn {

namespace {

RegionCell make_cell(const RunConfig& cfg, double gamma, double beta) {
    RegionCell cell;
    cell.gamma = gamma;
    cell.beta = beta;
    cell.p = cfg.p != 0.0 ? cfg.p : 2.0;
    cell.alpha = 1.0 + 0.5 * (beta - gamma);
    cell.alpha_FS = std::numeric_limits<double>::quiet_NaN();
    cell.q_min_eigenvalue = std::numeric_limits<double>::quiet_NaN();
    try {
        const ParamSet ps = derive_params(cfg.d, beta, gamma, cell.p);
        cell.cls = classify_region(ps);
        cell.alpha_FS = ps.alpha_FS;
        if (cfg.confirm_spectral && cell.cls != RegionClass::Inadmissible) {
            double lam = std::numeric_limits<double>::infinity();
            for (int ell = 1; ell <= 2; ++ell)
                lam = std::min(lam, q_form_min_eigenvalue(cfg.d, gamma, cell.p,
                                                          cell.alpha, ell, 128, 50.0));
            cell.q_min_eigenvalue = lam;
        }
    } catch (const Inadmissible&) {
        cell.cls = RegionClass::Inadmissible;
    } catch (const DegenerateDenominator&) {
        cell.cls = RegionClass::Inadmissible;
    }
    return cell;
}

}  // namespace

std::vector<RegionCell> region_map(const RunConfig& cfg) {
    if (cfg.gamma_steps < 1 || cfg.beta_steps < 1)
        throw ConfigError("sweep.gamma_steps and sweep.beta_steps must be >= 1");
    if (!(cfg.gamma_max >= cfg.gamma_min) || !(cfg.beta_max >= cfg.beta_min))
        throw ConfigError("empty sweep range");

    const int G = cfg.gamma_steps, B = cfg.beta_steps;
    const auto gamma_at = [&](int i) {
        return G == 1 ? cfg.gamma_min
                      : cfg.gamma_min + (cfg.gamma_max - cfg.gamma_min) * i / (G - 1.0);
    };
    const auto beta_at = [&](int j) {
        return B == 1 ? cfg.beta_min
                      : cfg.beta_min + (cfg.beta_max - cfg.beta_min) * j / (B - 1.0);
    };

    std::vector<RegionCell> cells(static_cast<size_t>(G) * B);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) if (!cfg.serial)
#endif
    for (int k = 0; k < G * B; ++k)
        cells[static_cast<size_t>(k)] = make_cell(cfg, gamma_at(k / B), beta_at(k % B));
    return cells;
}

const char* region_class_name(RegionClass c) {
    switch (c) {
        case RegionClass::Symmetry: return "Symmetry";
        case RegionClass::SymmetryBreaking: return "SymmetryBreaking";
        case RegionClass::FSBoundary: return "FSBoundary";
        case RegionClass::Inadmissible: return "Inadmissible";
    }
    return "Unknown";
}

}  // namespace ckn
