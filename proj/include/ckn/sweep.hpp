// sweep.hpp -- parameter-plane sweeps (region maps) with a parallel kernel
// and a serial reference implementation
#pragma once

#include <vector>

#include "ckn/config.hpp"
#include "ckn/params.hpp"

namespace ckn {

struct RegionCell {
    double beta = 0.0;
    double gamma = 0.0;
    double p = 0.0;
    RegionClass cls = RegionClass::Inadmissible;
    double alpha = 0.0;     // 1 + (beta - gamma)/2, defined for every cell
    double alpha_FS = 0.0;  // NaN when inadmissible / discriminant < 0
    double q_min_eigenvalue = 0.0;  // NaN unless spectral confirmation requested
};

// One cell per (gamma, beta) grid point, in row-major (gamma outer, beta
// inner) sorted order; inadmissible cells are emitted, never dropped. The
// loop runs under OpenMP unless cfg.serial is set; cells are written by
// index, so parallel and serial results are identical.
std::vector<RegionCell> region_map(const RunConfig& cfg);

const char* region_class_name(RegionClass c);

}  // namespace ckn
