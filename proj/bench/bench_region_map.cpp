// bench_region_map.cpp -- parallel sweep kernel vs the serial reference

#include <chrono>
#include <cmath>
#include <cstdio>

#include "ckn/sweep.hpp"

namespace {

double run_once(ckn::RunConfig cfg, bool serial, std::vector<ckn::RegionCell>& out) {
    cfg.serial = serial;
    const auto t0 = std::chrono::steady_clock::now();
    out = ckn::region_map(cfg);
    const auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double>(t1 - t0).count();
}

}  // namespace

int main() {
    ckn::RunConfig cfg;
    cfg.d = 3;
    cfg.p = 1.5;
    cfg.gamma_min = -3.0; cfg.gamma_max = -0.1;
    cfg.beta_min = -3.0; cfg.beta_max = 0.0;
    cfg.gamma_steps = cfg.beta_steps = 40;
    cfg.confirm_spectral = true;  // makes each cell expensive enough to time

    std::vector<ckn::RegionCell> serial_cells, parallel_cells;
    const double ts = run_once(cfg, true, serial_cells);
    const double tp = run_once(cfg, false, parallel_cells);

    bool identical = serial_cells.size() == parallel_cells.size();
    for (size_t i = 0; identical && i < serial_cells.size(); ++i) {
        const auto& a = serial_cells[i];
        const auto& b = parallel_cells[i];
        identical = a.cls == b.cls && a.beta == b.beta && a.gamma == b.gamma &&
                    (a.q_min_eigenvalue == b.q_min_eigenvalue ||
                     (std::isnan(a.q_min_eigenvalue) && std::isnan(b.q_min_eigenvalue)));
    }

    std::printf("region map %dx%d with spectral confirmation\n", cfg.gamma_steps,
                cfg.beta_steps);
    std::printf("serial reference: %8.3f s\n", ts);
    std::printf("parallel kernel:  %8.3f s  (speedup %.2fx)\n", tp, ts / tp);
    std::printf("outputs identical: %s\n", identical ? "yes" : "NO");
    return identical ? 0 : 1;
}
