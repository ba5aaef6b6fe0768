// config.hpp -- run configuration file, overrides, hashing, CSV emission
#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "ckn/params.hpp"

namespace ckn {

// Flat sectioned configuration. Every field has a usable default so a config
// file only states deviations. Parsing failures are line/field addressed.
struct RunConfig {
    // [problem]
    int d = 3;
    double beta = 0.0;
    double gamma = 0.0;
    double p = 0.0;  // at most one of p, m may be set; neither -> p = 2
    double m = 0.0;
    std::string mode = "weighted";  // "weighted" | "unweighted"

    // [grid]
    double r_max = 20.0;
    int cells = 512;
    std::string spacing = "geometric";  // "uniform" | "geometric"

    // [time]
    double horizon = 5.0;
    double dt0 = 1e-4;
    double dt_max = 0.1;
    double sample_interval = 0.05;
    std::string datum = "barenblatt";  // initial_datum name
    std::string variables = "self-similar";  // "self-similar" | "original"

    // [spectral]
    int ell_max = 6;
    int count = 4;
    double bisection_tol = 1e-5;
    double bracket_lo = 0.0;  // 0 -> automatic from the closed-form hint
    double bracket_hi = 0.0;
    int scan_points = 33;
    double eps = 1e-3;  // rate-oracle perturbation amplitude

    // [sweep]
    double gamma_min = -3.0, gamma_max = -0.1;
    double beta_min = -3.0, beta_max = -0.05;
    int gamma_steps = 50, beta_steps = 50;
    bool serial = false;  // serial reference kernel instead of the parallel one
    bool confirm_spectral = false;  // add q_min_eigenvalue column to region maps

    // [output]
    std::string out_dir = "out";
};

// Parse `[section]` / `key = value` text. Unknown sections or keys, duplicate
// keys, and malformed values throw ConfigError naming the line and field.
RunConfig parse_config_text(const std::string& text);
RunConfig parse_config_file(const std::string& path);

// Apply one "section.key=value" override in place.
void apply_override(RunConfig& cfg, const std::string& kv);

// Canonical serialization (sorted key order) and its FNV-1a hash; the hash is
// stamped into every CSV metadata block so outputs are traceable to a config.
std::string canonical_config(const RunConfig& cfg);
std::uint64_t config_hash(const RunConfig& cfg);

// ParamSet from the [problem] section.
ParamSet params_from_config(const RunConfig& cfg);

// CSV with a metadata comment block. Values are printed with %.17g so
// identical runs are byte-identical. write() goes through a temporary file
// followed by an atomic rename.
struct CsvWriter {
    std::vector<std::pair<std::string, std::string>> metadata;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    void meta(const std::string& key, const std::string& value);
    void meta(const std::string& key, double value);
    void add_row(const std::vector<double>& values);
    void add_row_raw(std::vector<std::string> values);
    std::string render() const;
    void write(const std::string& path) const;
};

std::string format_double(double x);  // %.17g

}  // namespace ckn
