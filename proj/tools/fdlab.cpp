// fdlab.cpp -- command-line driver: derivations, simulations, spectra,
// threshold scans, region maps, GN deficits, and the verification suite

#include <cstdio>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ckn/acceptance.hpp"
#include "ckn/config.hpp"
#include "ckn/flow.hpp"
#include "ckn/functionals.hpp"
#include "ckn/profiles.hpp"
#include "ckn/spectral.hpp"
#include "ckn/sweep.hpp"

namespace {

using namespace ckn;

constexpr const char* kVersion = "fdlab 1.0";

std::string hash_hex(const RunConfig& cfg) {
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(config_hash(cfg)));
    return buf;
}

CsvWriter make_writer(const RunConfig& cfg, const std::string& command) {
    CsvWriter w;
    w.meta("tool", kVersion);
    w.meta("command", command);
    w.meta("config_hash", hash_hex(cfg));
    return w;
}

std::string out_path(const RunConfig& cfg, const std::string& file) {
    return cfg.out_dir + "/" + file;
}

GridPtr grid_from(const RunConfig& cfg, const ParamSet& ps) {
    return build_grid(ps, cfg.r_max, cfg.cells,
                      cfg.spacing == "uniform" ? Spacing::Uniform : Spacing::Geometric);
}

FlowOptions flow_options(const RunConfig& cfg) {
    FlowOptions fo;
    fo.dt0 = cfg.dt0;
    fo.dt_max = cfg.dt_max;
    fo.sample_interval = cfg.sample_interval;
    return fo;
}

void write_trace(const RunConfig& cfg, const FlowTrace& tr, const std::string& file,
                 const std::string& command) {
    CsvWriter w = make_writer(cfg, command);
    if (!tr.ok()) w.meta("error", tr.error);
    w.columns = {"tau", "mass", "E", "F", "G", "E_rel", "I_rel", "R_star", "R_weighted"};
    for (const TraceRow& r : tr.rows)
        w.add_row({r.tau, r.mass, r.E, r.F, r.G, r.E_rel, r.I_rel, r.R_star, r.R_weighted});
    w.write(out_path(cfg, file));
}

int cmd_derive(const RunConfig& cfg) {
    const ParamSet ps = params_from_config(cfg);
    CsvWriter w = make_writer(cfg, "derive");
    w.columns = {"name", "value"};
    for (const auto& [k, v] : ps.to_record()) {
        std::printf("%-12s %.17g\n", k.c_str(), v);
        w.add_row_raw({k, format_double(v)});
    }
    std::printf("%-12s %s\n", "class", region_class_name(classify_region(ps)));
    w.write(out_path(cfg, "params.csv"));
    return 0;
}

int cmd_simulate(const RunConfig& cfg) {
    const ParamSet ps = params_from_config(cfg);
    const GridPtr g = grid_from(cfg, ps);
    const Variables vars =
        cfg.variables == "original" ? Variables::Original : Variables::SelfSimilar;
    FlowState s0{initial_datum(g, ps, cfg.datum), 0.0, vars, ps};
    FlowState end;
    const FlowTrace tr = run_flow(s0, cfg.horizon, flow_options(cfg), &end);
    write_trace(cfg, tr, "trace.csv", "simulate");

    CsvWriter w = make_writer(cfg, "simulate");
    w.meta("time", end.time);
    w.columns = {"r", "u"};
    for (int i = 0; i < end.field.size(); ++i)
        w.add_row({g->centers[static_cast<size_t>(i)], end.field[i]});
    w.write(out_path(cfg, "final_state.csv"));
    if (!tr.ok()) {
        std::cerr << "solver failure: " << tr.error << " (partial trace written)\n";
        return 3;
    }
    return 0;
}

int cmd_trace(const RunConfig& cfg) {
    const ParamSet ps = params_from_config(cfg);
    const GridPtr g = grid_from(cfg, ps);
    const RadialField u = initial_datum(g, ps, cfg.datum);

    CsvWriter w = make_writer(cfg, "trace");
    w.columns = {"functional", "term", "value"};
    const auto emit = [&](const FunctionalReport& rep) {
        w.add_row_raw({rep.name, "value", format_double(rep.value)});
        for (const auto& [k, v] : rep.terms)
            w.add_row_raw({rep.name, k, format_double(v)});
    };
    const EntropySuite es = entropy_suite(u, ps);
    w.add_row_raw({"entropy", "E", format_double(es.E)});
    w.add_row_raw({"entropy", "F", format_double(es.F)});
    w.add_row_raw({"entropy", "I", format_double(es.I)});
    w.add_row_raw({"entropy", "G", format_double(es.G)});
    w.add_row_raw({"entropy", "tail_fraction", format_double(es.tail_fraction)});
    const RelativeSuite rs = relative_suite(u, ps, false);
    w.add_row_raw({"relative", "E_rel", format_double(rs.E_rel)});
    w.add_row_raw({"relative", "I_rel", format_double(rs.I_rel)});
    w.add_row_raw({"relative", "mass", format_double(rs.mass)});
    if (ps.unweighted()) {
        emit(renyi_remainder(u, ps));
        emit(rstar_remainder(u, ps));
        const IdentityCheck ic = blw_identity_check(u, ps);
        w.add_row_raw({"fisher_identity", "lhs", format_double(ic.lhs)});
        w.add_row_raw({"fisher_identity", "rhs", format_double(ic.rhs)});
        w.add_row_raw({"fisher_identity", "gap", format_double(ic.gap)});
    }
    emit(weighted_remainder(u, ps));
    w.write(out_path(cfg, "functionals.csv"));
    return 0;
}

int cmd_spectrum(const RunConfig& cfg) {
    const ParamSet ps = params_from_config(cfg);
    const GridPtr g = grid_from(cfg, ps);
    CsvWriter w = make_writer(cfg, "spectrum");
    w.columns = {"ell", "index", "eigenvalue", "residual"};
    for (int ell = 0; ell <= cfg.ell_max; ++ell) {
        const ModeSpectrum sp = solve_spectrum(assemble_mode(ps, ell, g), cfg.count);
        for (size_t k = 0; k < sp.eigenvalues.size(); ++k)
            w.add_row({static_cast<double>(ell), static_cast<double>(k),
                       sp.eigenvalues[k], sp.residuals[k]});
    }
    const GapResult gap = hardy_poincare_constant(ps, g, cfg.ell_max);
    w.meta("lambda1", gap.lambda1);
    w.meta("lambda1_ell", static_cast<double>(gap.ell));
    w.write(out_path(cfg, "spectrum.csv"));
    std::printf("lambda1 = %.12g (ell = %d)\n", gap.lambda1, gap.ell);
    return 0;
}

int cmd_threshold(const RunConfig& cfg) {
    ThresholdOptions opt;
    opt.bracket_lo = cfg.bracket_lo;
    opt.bracket_hi = cfg.bracket_hi;
    opt.tolerance = cfg.bisection_tol;
    opt.ell_max = cfg.ell_max;
    opt.cells = cfg.cells;
    opt.scan_points = cfg.scan_points;
    opt.serial = cfg.serial;
    const double p = cfg.p != 0.0 ? cfg.p : 2.0;
    const ThresholdResult res = symmetry_threshold_via_Q(cfg.d, cfg.gamma, p, opt);

    CsvWriter w = make_writer(cfg, "threshold");
    w.meta("alpha_critical", res.alpha_critical);
    w.meta("alpha_hint", res.alpha_hint);
    w.meta("radial_at_threshold", res.radial_at_threshold);
    w.columns = {"alpha", "min_eigenvalue", "ell", "radial_eigenvalue"};
    for (const ThresholdScanRow& row : res.scan)
        w.add_row({row.alpha, row.min_eigenvalue, static_cast<double>(row.ell),
                   row.radial_eigenvalue});
    w.write(out_path(cfg, "threshold.csv"));
    std::printf("alpha_critical = %.8f (closed-form hint %.8f)\n", res.alpha_critical,
                res.alpha_hint);
    return 0;
}

int cmd_region_map(const RunConfig& cfg) {
    const std::vector<RegionCell> cells = region_map(cfg);
    CsvWriter w = make_writer(cfg, "region-map");
    w.columns = {"gamma", "beta", "p", "class", "alpha", "alpha_FS", "q_min_eigenvalue"};
    for (const RegionCell& c : cells)
        w.add_row_raw({format_double(c.gamma), format_double(c.beta), format_double(c.p),
                       region_class_name(c.cls), format_double(c.alpha),
                       format_double(c.alpha_FS), format_double(c.q_min_eigenvalue)});
    w.write(out_path(cfg, "region_map.csv"));
    return 0;
}

int cmd_gn_deficit(const RunConfig& cfg) {
    const ParamSet ps = params_from_config(cfg);
    if (!ps.unweighted())
        throw ConfigError("gn-deficit requires beta = gamma = 0");
    const GridPtr g = grid_from(cfg, ps);
    CsvWriter w = make_writer(cfg, "gn-deficit");
    w.columns = {"case", "deficit", "grad2", "norm_q1", "norm_2q", "cgn_grid"};
    const auto emit = [&](const std::string& name, const RadialField& f) {
        const FunctionalReport rep = gn_deficit(f, ps);
        w.add_row_raw({name, format_double(rep.value), format_double(rep.terms.at("grad2")),
                       format_double(rep.terms.at("norm_q1")),
                       format_double(rep.terms.at("norm_2q")),
                       format_double(rep.terms.at("cgn_grid"))});
    };
    emit("optimizer", sample(g, [&](double r) {
             return std::pow(barenblatt_star(ps, r), ps.m - 0.5);
         }));
    for (const double s : {0.9, 1.15})
        emit("dilate_" + format_double(s), sample(g, [&](double r) {
                 return std::pow(barenblatt_star(ps, s * r), ps.m - 0.5);
             }));
    emit("gaussian", sample(g, [](double r) { return std::exp(-r * r); }));
    emit("squeezed", initial_datum(g, ps, "squeezed"));
    w.write(out_path(cfg, "gn_deficit.csv"));
    return 0;
}

int cmd_verify(const RunConfig& cfg, bool quick) {
    const std::vector<CriterionResult> results = run_acceptance(quick);
    CsvWriter w = make_writer(cfg, "verify");
    w.columns = {"id", "pass", "title", "detail"};
    bool all = true;
    for (const CriterionResult& r : results) {
        std::printf("%-4s %s  %s -- %s\n", r.id.c_str(), r.pass ? "PASS" : "FAIL",
                    r.title.c_str(), r.detail.c_str());
        w.add_row_raw({r.id, r.pass ? "1" : "0", r.title, r.detail});
        all = all && r.pass;
    }
    w.write(out_path(cfg, "acceptance.csv"));
    return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical laboratory for weighted fast-diffusion flows"};
    app.require_subcommand(1);
    app.fallthrough();  // accept the global flags after the subcommand name too

    std::string config_path, out_dir;
    std::vector<std::string> overrides;
    bool quick = false;
    app.add_option("--config", config_path, "configuration file");
    app.add_option("--out", out_dir, "output directory (overrides [output] dir)");
    app.add_option("--override", overrides, "section.key=value (repeatable)");

    CLI::App* c_derive = app.add_subcommand("derive", "print/emit the derived parameters");
    CLI::App* c_sim = app.add_subcommand("simulate", "run a flow, write trace + final state");
    CLI::App* c_trace = app.add_subcommand("trace", "evaluate all functionals of a datum");
    CLI::App* c_spec = app.add_subcommand("spectrum", "mode spectra and the spectral gap");
    CLI::App* c_thr = app.add_subcommand("threshold", "locate the symmetry-breaking alpha");
    CLI::App* c_map = app.add_subcommand("region-map", "classify a (gamma, beta) grid");
    CLI::App* c_gn = app.add_subcommand("gn-deficit", "GN deficits of reference functions");
    CLI::App* c_ver = app.add_subcommand("verify", "run the acceptance suite");
    c_ver->add_flag("--quick", quick, "reduced sizes (smoke test, not acceptance)");
    for (CLI::App* sub : app.get_subcommands(nullptr)) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        RunConfig cfg;
        if (!config_path.empty()) cfg = ckn::parse_config_file(config_path);
        for (const std::string& kv : overrides) ckn::apply_override(cfg, kv);
        if (!out_dir.empty()) cfg.out_dir = out_dir;

        if (c_derive->parsed()) return cmd_derive(cfg);
        if (c_sim->parsed()) return cmd_simulate(cfg);
        if (c_trace->parsed()) return cmd_trace(cfg);
        if (c_spec->parsed()) return cmd_spectrum(cfg);
        if (c_thr->parsed()) return cmd_threshold(cfg);
        if (c_map->parsed()) return cmd_region_map(cfg);
        if (c_gn->parsed()) return cmd_gn_deficit(cfg);
        if (c_ver->parsed()) return cmd_verify(cfg, quick);
        return 2;
    } catch (const ckn::ConfigError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const ckn::Inadmissible& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const ckn::BadGridSpec& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const ckn::UnsupportedDimension& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const ckn::DegenerateDenominator& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const ckn::Error& e) {
        std::cerr << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 3;
    }
}
