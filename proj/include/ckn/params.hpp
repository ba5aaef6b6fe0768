// params.hpp -- parameter algebra and admissibility for the weighted/unweighted settings
#pragma once

#include <map>
#include <string>

#include "ckn/common.hpp"

namespace ckn {

enum class Mode { Weighted, UnweightedGN };

enum class RegionClass { Symmetry, SymmetryBreaking, FSBoundary, Inadmissible };

// Validated parameter tuple with every derived scalar precomputed.
// Immutable after construction; construction throws on any violated constraint.
struct ParamSet {
    int d = 0;
    double beta = 0.0;
    double gamma = 0.0;
    double p = 0.0;
    Mode mode = Mode::Weighted;

    // derived
    double alpha = 0.0;      // 1 + (beta - gamma)/2
    double n = 0.0;          // 2 (d - gamma) / (beta + 2 - gamma)
    double delta = 0.0;      // d - n
    double m = 0.0;          // (p+1)/(2p)
    double m_c = 0.0;        // (d - 2 - beta)/(d - gamma)
    double m1 = 0.0;         // (2d - 2 - beta - gamma)/(2 (d - gamma))
    double sigma = 0.0;      // (m - m_c)/(1 - m)
    double mu = 0.0;         // 2 + n (m - 1)
    double mu_star = 0.0;    // (d - gamma)(m - m_c)
    double kappa = 0.0;      // (2m/(1-m))^{1/mu}
    double p_star = 0.0;     // (d - gamma)/(d - beta - 2)
    double vartheta = 0.0;   // CKN interpolation exponent
    double beta_FS = 0.0;    // d - 2 - sqrt((gamma-d)^2 - 4(d-1)), NaN if discriminant < 0
    double alpha_FS = 0.0;   // sqrt((d-1)/(n-1))

    bool unweighted() const { return beta == 0.0 && gamma == 0.0; }

    std::map<std::string, double> to_record() const;
};

// Build and validate a ParamSet. `mode` selects the unweighted GN constructor
// (d in {1,2} allowed, beta=gamma=0 forced) or the general weighted one.
ParamSet derive_params(int d, double beta, double gamma, double p, Mode mode = Mode::Weighted);

// Alternative entry point: supply the diffusion exponent m instead of p.
ParamSet derive_params_from_m(int d, double beta, double gamma, double m_in,
                              Mode mode = Mode::Weighted);

// beta_FS(gamma) for dimension d; throws Inadmissible when the discriminant is negative.
double beta_fs_of_gamma(int d, double gamma);

// Symmetry / symmetry-breaking classification with an FS-boundary tolerance in beta.
RegionClass classify_region(const ParamSet& ps, double fs_tol = 1e-9);

// Optimal Gagliardo-Nirenberg constant C_GN for unweighted parameters, from
// high-accuracy quadrature of the entropy and Fisher information of the
// Barenblatt profile.
double optimal_gn_constant(const ParamSet& ps);

// Raw ingredients of C_GN, exposed for tests: mass, entropy, Fisher information
// and G = E^{sigma-1} I of the Barenblatt profile, all by adaptive quadrature
// in d dimensions (angular factor included).
struct BarenblattIntegrals {
    double mass;
    double entropy;
    double fisher;
    double g_functional;
};
BarenblattIntegrals barenblatt_integrals(const ParamSet& ps);

}  // namespace ckn
