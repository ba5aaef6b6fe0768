// test_cli.cpp -- end-to-end checks of the fdlab driver (exit codes, CSV output,
// byte-identical determinism). Shells out to the built binary.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

int run(const std::string& args) {
    const std::string cmd = std::string(FDLAB_BIN) + " " + args + " >/dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream o;
    o << in.rdbuf();
    return o.str();
}

fs::path fresh_dir(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("fdlab_test_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

}  // namespace

TEST_CASE("derive succeeds and writes params.csv") {
    const fs::path out = fresh_dir("derive");
    CHECK(run("derive --out " + out.string() +
              " --override problem.gamma=-1 --override problem.beta=-0.5") == 0);
    const std::string csv = slurp(out / "params.csv");
    CHECK(csv.find("# config_hash:") != std::string::npos);
    CHECK(csv.find("alpha") != std::string::npos);
}

TEST_CASE("inadmissible parameters exit 2") {
    // beta must exceed gamma - 2
    CHECK(run("derive --override problem.gamma=0 --override problem.beta=-3") == 2);
}

TEST_CASE("invalid input exits 2") {
    CHECK(run("simulate --override time.horizon=0") == 2);
    CHECK(run("derive --override cells=10") == 2);        // malformed override
    CHECK(run("derive --config /no/such/file.ini") == 2); // missing config
    CHECK(run("frobnicate") == 2);                        // unknown subcommand
    CHECK(run("derive --no-such-flag") == 2);
}

TEST_CASE("simulate writes a trace and is byte-identical across runs") {
    const std::string ov = " --override grid.cells=64 --override time.horizon=0.2"
                           " --override time.sample_interval=0.05";
    const fs::path a = fresh_dir("sim_a");
    const fs::path b = fresh_dir("sim_b");
    REQUIRE(run("simulate --out " + a.string() + ov) == 0);
    REQUIRE(run("simulate --out " + b.string() + ov) == 0);
    const std::string ta = slurp(a / "trace.csv");
    CHECK(ta == slurp(b / "trace.csv"));
    CHECK(slurp(a / "final_state.csv") == slurp(b / "final_state.csv"));
    CHECK(ta.find("tau,") != std::string::npos);
    // at least header + a few sample rows
    CHECK(std::count(ta.begin(), ta.end(), '\n') > 4);
}

TEST_CASE("region map covers inadmissible cells instead of dropping them") {
    const fs::path out = fresh_dir("map");
    const std::string ov = " --override sweep.gamma_steps=4 --override sweep.beta_steps=4"
                           " --override sweep.gamma_min=-2 --override sweep.gamma_max=-0.5"
                           " --override sweep.beta_min=-3 --override sweep.beta_max=-0.2"
                           " --override problem.p=1.5";
    REQUIRE(run("region-map --out " + out.string() + ov) == 0);
    const std::string csv = slurp(out / "region_map.csv");
    CHECK(csv.find("Inadmissible") != std::string::npos);
    CHECK(csv.find("Symmetry") != std::string::npos);
    // 4x4 grid -> 16 data rows, none dropped
    std::istringstream in(csv);
    std::string line;
    int data_rows = 0;
    while (std::getline(in, line))
        if (!line.empty() && line[0] != '#' && line.find("gamma") != 0) ++data_rows;
    CHECK(data_rows == 16);
}

TEST_CASE("empty sweep range exits 2") {
    CHECK(run("region-map --override sweep.gamma_min=-1 --override sweep.gamma_max=-2") == 2);
}

TEST_CASE("gn-deficit rejects genuinely weighted parameters") {
    CHECK(run("gn-deficit --override problem.gamma=-0.5 --override problem.beta=-1"
              " --override problem.p=1.5") == 2);
}
