// config.cpp -- sectioned config parsing, canonical hashing, CSV emission

#include "ckn/config.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

namespace ckn {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& v, const std::string& where) {
    try {
        size_t pos = 0;
        const double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ConfigError(where + ": expected a number, got '" + v + "'");
    }
}

int parse_int(const std::string& v, const std::string& where) {
    try {
        size_t pos = 0;
        const int x = std::stoi(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ConfigError(where + ": expected an integer, got '" + v + "'");
    }
}

bool parse_bool(const std::string& v, const std::string& where) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError(where + ": expected a boolean, got '" + v + "'");
}

// Single dispatch point shared by the file parser and --override.
void set_field(RunConfig& c, const std::string& section, const std::string& key,
               const std::string& value, const std::string& where) {
    const std::string field = section + "." + key;
    const std::string at = where + " (" + field + ")";
    if (section == "problem") {
        if (key == "d") c.d = parse_int(value, at);
        else if (key == "beta") c.beta = parse_double(value, at);
        else if (key == "gamma") c.gamma = parse_double(value, at);
        else if (key == "p") c.p = parse_double(value, at);
        else if (key == "m") c.m = parse_double(value, at);
        else if (key == "mode") {
            if (value != "weighted" && value != "unweighted")
                throw ConfigError(at + ": mode must be 'weighted' or 'unweighted'");
            c.mode = value;
        } else throw ConfigError(at + ": unknown key");
    } else if (section == "grid") {
        if (key == "r_max") c.r_max = parse_double(value, at);
        else if (key == "cells") c.cells = parse_int(value, at);
        else if (key == "spacing") {
            if (value != "uniform" && value != "geometric")
                throw ConfigError(at + ": spacing must be 'uniform' or 'geometric'");
            c.spacing = value;
        } else throw ConfigError(at + ": unknown key");
    } else if (section == "time") {
        if (key == "horizon") c.horizon = parse_double(value, at);
        else if (key == "dt0") c.dt0 = parse_double(value, at);
        else if (key == "dt_max") c.dt_max = parse_double(value, at);
        else if (key == "sample_interval") c.sample_interval = parse_double(value, at);
        else if (key == "datum") c.datum = value;
        else if (key == "variables") {
            if (value != "self-similar" && value != "original")
                throw ConfigError(at + ": variables must be 'self-similar' or 'original'");
            c.variables = value;
        } else throw ConfigError(at + ": unknown key");
    } else if (section == "spectral") {
        if (key == "ell_max") c.ell_max = parse_int(value, at);
        else if (key == "count") c.count = parse_int(value, at);
        else if (key == "bisection_tol") c.bisection_tol = parse_double(value, at);
        else if (key == "bracket_lo") c.bracket_lo = parse_double(value, at);
        else if (key == "bracket_hi") c.bracket_hi = parse_double(value, at);
        else if (key == "scan_points") c.scan_points = parse_int(value, at);
        else if (key == "eps") c.eps = parse_double(value, at);
        else throw ConfigError(at + ": unknown key");
    } else if (section == "sweep") {
        if (key == "gamma_min") c.gamma_min = parse_double(value, at);
        else if (key == "gamma_max") c.gamma_max = parse_double(value, at);
        else if (key == "beta_min") c.beta_min = parse_double(value, at);
        else if (key == "beta_max") c.beta_max = parse_double(value, at);
        else if (key == "gamma_steps") c.gamma_steps = parse_int(value, at);
        else if (key == "beta_steps") c.beta_steps = parse_int(value, at);
        else if (key == "serial") c.serial = parse_bool(value, at);
        else if (key == "confirm_spectral") c.confirm_spectral = parse_bool(value, at);
        else throw ConfigError(at + ": unknown key");
    } else if (section == "output") {
        if (key == "dir") c.out_dir = value;
        else throw ConfigError(at + ": unknown key");
    } else {
        throw ConfigError(at + ": unknown section '" + section + "'");
    }
}

}  // namespace

RunConfig parse_config_text(const std::string& text) {
    RunConfig cfg;
    std::istringstream in(text);
    std::string line, section;
    std::set<std::string> seen;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string where = "line " + std::to_string(lineno);
        std::string t = trim(line);
        if (t.empty() || t[0] == '#' || t[0] == ';') continue;
        if (t.front() == '[') {
            if (t.back() != ']') throw ConfigError(where + ": unterminated section header");
            section = trim(t.substr(1, t.size() - 2));
            if (section.empty()) throw ConfigError(where + ": empty section name");
            continue;
        }
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError(where + ": expected 'key = value'");
        if (section.empty())
            throw ConfigError(where + ": key before any [section] header");
        const std::string key = trim(t.substr(0, eq));
        const std::string value = trim(t.substr(eq + 1));
        if (key.empty()) throw ConfigError(where + ": empty key");
        if (!seen.insert(section + "." + key).second)
            throw ConfigError(where + ": duplicate key '" + section + "." + key + "'");
        set_field(cfg, section, key, value, where);
    }
    if (cfg.p != 0.0 && cfg.m != 0.0)
        throw ConfigError("problem.p and problem.m are mutually exclusive");
    return cfg;
}

RunConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

void apply_override(RunConfig& cfg, const std::string& kv) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos)
        throw ConfigError("override '" + kv + "': expected section.key=value");
    const std::string field = trim(kv.substr(0, eq));
    const std::string value = trim(kv.substr(eq + 1));
    const auto dot = field.find('.');
    if (dot == std::string::npos)
        throw ConfigError("override '" + kv + "': key must be section.key");
    set_field(cfg, field.substr(0, dot), field.substr(dot + 1), value, "override");
    if (cfg.p != 0.0 && cfg.m != 0.0)
        throw ConfigError("problem.p and problem.m are mutually exclusive");
}

std::string canonical_config(const RunConfig& c) {
    std::ostringstream o;
    o << "grid.cells=" << c.cells << "\n"
      << "grid.r_max=" << format_double(c.r_max) << "\n"
      << "grid.spacing=" << c.spacing << "\n"
      // output.dir is deliberately excluded: the hash identifies the
      // computation, and the same run must hash identically anywhere
      << "problem.beta=" << format_double(c.beta) << "\n"
      << "problem.d=" << c.d << "\n"
      << "problem.gamma=" << format_double(c.gamma) << "\n"
      << "problem.m=" << format_double(c.m) << "\n"
      << "problem.mode=" << c.mode << "\n"
      << "problem.p=" << format_double(c.p) << "\n"
      << "spectral.bisection_tol=" << format_double(c.bisection_tol) << "\n"
      << "spectral.bracket_hi=" << format_double(c.bracket_hi) << "\n"
      << "spectral.bracket_lo=" << format_double(c.bracket_lo) << "\n"
      << "spectral.count=" << c.count << "\n"
      << "spectral.ell_max=" << c.ell_max << "\n"
      << "spectral.eps=" << format_double(c.eps) << "\n"
      << "spectral.scan_points=" << c.scan_points << "\n"
      << "sweep.beta_max=" << format_double(c.beta_max) << "\n"
      << "sweep.beta_min=" << format_double(c.beta_min) << "\n"
      << "sweep.beta_steps=" << c.beta_steps << "\n"
      << "sweep.confirm_spectral=" << (c.confirm_spectral ? 1 : 0) << "\n"
      << "sweep.gamma_max=" << format_double(c.gamma_max) << "\n"
      << "sweep.gamma_min=" << format_double(c.gamma_min) << "\n"
      << "sweep.gamma_steps=" << c.gamma_steps << "\n"
      << "sweep.serial=" << (c.serial ? 1 : 0) << "\n"
      << "time.datum=" << c.datum << "\n"
      << "time.dt0=" << format_double(c.dt0) << "\n"
      << "time.dt_max=" << format_double(c.dt_max) << "\n"
      << "time.horizon=" << format_double(c.horizon) << "\n"
      << "time.sample_interval=" << format_double(c.sample_interval) << "\n"
      << "time.variables=" << c.variables << "\n";
    return o.str();
}

std::uint64_t config_hash(const RunConfig& cfg) {
    const std::string s = canonical_config(cfg);
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    return h;
}

ParamSet params_from_config(const RunConfig& cfg) {
    const Mode mode = cfg.mode == "unweighted" ? Mode::UnweightedGN : Mode::Weighted;
    if (cfg.m != 0.0)
        return derive_params_from_m(cfg.d, cfg.beta, cfg.gamma, cfg.m, mode);
    const double p = cfg.p != 0.0 ? cfg.p : 2.0;
    return derive_params(cfg.d, cfg.beta, cfg.gamma, p, mode);
}

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void CsvWriter::meta(const std::string& key, const std::string& value) {
    metadata.emplace_back(key, value);
}

void CsvWriter::meta(const std::string& key, double value) {
    metadata.emplace_back(key, format_double(value));
}

void CsvWriter::add_row(const std::vector<double>& values) {
    std::vector<std::string> r;
    r.reserve(values.size());
    for (double v : values) r.push_back(format_double(v));
    rows.push_back(std::move(r));
}

void CsvWriter::add_row_raw(std::vector<std::string> values) {
    rows.push_back(std::move(values));
}

std::string CsvWriter::render() const {
    std::ostringstream o;
    for (const auto& [k, v] : metadata) o << "# " << k << ": " << v << "\n";
    for (size_t i = 0; i < columns.size(); ++i)
        o << (i ? "," : "") << columns[i];
    o << "\n";
    for (const auto& r : rows) {
        for (size_t i = 0; i < r.size(); ++i) o << (i ? "," : "") << r[i];
        o << "\n";
    }
    return o.str();
}

void CsvWriter::write(const std::string& path) const {
    namespace fs = std::filesystem;
    const fs::path target(path);
    if (target.has_parent_path()) fs::create_directories(target.parent_path());
    const fs::path tmp = target.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw ConfigError("cannot write '" + tmp.string() + "'");
        out << render();
    }
    fs::rename(tmp, target);
}

}  // namespace ckn
