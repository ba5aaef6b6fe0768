// test_config.cpp -- config parsing, overrides, hashing, CSV rendering
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <string>

#include "ckn/config.hpp"

using namespace ckn;

namespace {
const char* kSample = R"(# reference configuration
[problem]
d = 3
beta = -1
gamma = -2
m = 0.8
mode = weighted

[grid]
r_max = 25
cells = 256
spacing = uniform

[time]
horizon = 2.5
datum = squeezed

[spectral]
ell_max = 4

[sweep]
serial = true

[output]
dir = results
)";
}  // namespace

TEST_CASE("happy-path parse") {
    const RunConfig c = parse_config_text(kSample);
    CHECK(c.d == 3);
    CHECK(c.beta == doctest::Approx(-1.0));
    CHECK(c.m == doctest::Approx(0.8));
    CHECK(c.mode == "weighted");
    CHECK(c.r_max == doctest::Approx(25.0));
    CHECK(c.cells == 256);
    CHECK(c.spacing == "uniform");
    CHECK(c.horizon == doctest::Approx(2.5));
    CHECK(c.datum == "squeezed");
    CHECK(c.ell_max == 4);
    CHECK(c.serial);
    CHECK(c.out_dir == "results");
    // untouched fields keep defaults
    CHECK(c.dt0 == doctest::Approx(1e-4));
    CHECK(c.scan_points == 33);
}

TEST_CASE("errors are line and field addressed") {
    using doctest::Contains;
    CHECK_THROWS_WITH_AS(parse_config_text("[problem]\nwhatever = 1\n"),
                         Contains("problem.whatever"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_config_text("[problem]\nd = abc\n"), Contains("line 2"),
                         ConfigError);
    CHECK_THROWS_WITH_AS(parse_config_text("d = 3\n"), Contains("section"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_config_text("[problem]\nd = 3\nd = 4\n"),
                         Contains("duplicate"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_config_text("[nosuch]\nx = 1\n"), Contains("unknown section"),
                         ConfigError);
    CHECK_THROWS_AS(parse_config_text("[problem]\np = 2\nm = 0.8\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("[problem\nd = 3\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("[grid]\nspacing = diagonal\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_file("/no/such/file.ini"), ConfigError);
}

TEST_CASE("overrides") {
    RunConfig c = parse_config_text(kSample);
    apply_override(c, "grid.cells=512");
    CHECK(c.cells == 512);
    apply_override(c, "problem.mode=unweighted");
    CHECK(c.mode == "unweighted");
    CHECK_THROWS_AS(apply_override(c, "cells=512"), ConfigError);
    CHECK_THROWS_AS(apply_override(c, "grid.cells"), ConfigError);
    CHECK_THROWS_AS(apply_override(c, "grid.nope=1"), ConfigError);
}

TEST_CASE("canonical hash is stable and sensitive") {
    const RunConfig a = parse_config_text(kSample);
    const RunConfig b = parse_config_text(kSample);
    CHECK(config_hash(a) == config_hash(b));
    RunConfig c = a;
    apply_override(c, "grid.cells=257");
    CHECK(config_hash(a) != config_hash(c));
}

TEST_CASE("params from config") {
    RunConfig c = parse_config_text(kSample);
    const ParamSet ps = params_from_config(c);
    CHECK(ps.m == doctest::Approx(0.8));
    CHECK(ps.alpha == doctest::Approx(1.5));
    // default problem: p = 2 unweighted-style parameters
    const RunConfig d;
    CHECK(params_from_config(d).p == doctest::Approx(2.0));
}

TEST_CASE("CSV rendering is deterministic and carries metadata") {
    CsvWriter w;
    w.meta("config_hash", "deadbeef");
    w.meta("value", 0.1);
    w.columns = {"a", "b"};
    w.add_row({1.0, 1.0 / 3.0});
    w.add_row_raw({"x", "y"});
    const std::string out = w.render();
    CHECK(out == "# config_hash: deadbeef\n# value: 0.10000000000000001\na,b\n"
                 "1,0.33333333333333331\nx,y\n");
}

TEST_CASE("round-trippable float formatting") {
    CHECK(format_double(0.1) == "0.10000000000000001");
    CHECK(format_double(2.0) == "2");
    CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);
}
