// common.hpp -- shared error types and small numeric helpers
#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace ckn {

// Base class for everything thrown on purpose by this library.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct Inadmissible : Error {
    explicit Inadmissible(const std::string& why) : Error("inadmissible parameters: " + why) {}
};

struct DegenerateDenominator : Error {
    explicit DegenerateDenominator(const std::string& why)
        : Error("degenerate denominator: " + why) {}
};

struct BadGridSpec : Error {
    explicit BadGridSpec(const std::string& why) : Error("bad grid spec: " + why) {}
};

struct NonPositiveDensity : Error {
    explicit NonPositiveDensity(const std::string& why)
        : Error("non-positive density: " + why) {}
};

struct MassMismatch : Error {
    explicit MassMismatch(const std::string& why) : Error("mass mismatch: " + why) {}
};

struct NewtonDivergence : Error {
    explicit NewtonDivergence(const std::string& why) : Error("newton divergence: " + why) {}
};

struct PositivityLoss : Error {
    explicit PositivityLoss(const std::string& why) : Error("positivity loss: " + why) {}
};

struct InterpolationOutOfRange : Error {
    explicit InterpolationOutOfRange(const std::string& why)
        : Error("interpolation out of range: " + why) {}
};

struct QuadratureFailure : Error {
    explicit QuadratureFailure(const std::string& why) : Error("quadrature failure: " + why) {}
};

struct EigensolverFailure : Error {
    explicit EigensolverFailure(const std::string& why) : Error("eigensolver failure: " + why) {}
};

struct NoSignChange : Error {
    explicit NoSignChange(const std::string& why) : Error("no sign change: " + why) {}
};

struct FitFailure : Error {
    explicit FitFailure(const std::string& why) : Error("fit failure: " + why) {}
};

struct UnsupportedDimension : Error {
    explicit UnsupportedDimension(const std::string& why)
        : Error("unsupported dimension: " + why) {}
};

struct ConfigError : Error {
    explicit ConfigError(const std::string& why) : Error("config error: " + why) {}
};

struct TailTruncation : Error {
    explicit TailTruncation(const std::string& why) : Error("tail truncation: " + why) {}
};
struct NormOverflow : Error {
    explicit NormOverflow(const std::string& why) : Error("norm overflow: " + why) {}
};

inline double sphere_area(int d) {
    // |S^{d-1}| = 2 pi^{d/2} / Gamma(d/2)
    return 2.0 * std::pow(M_PI, 0.5 * d) / std::tgamma(0.5 * d);
}

}  // namespace ckn
