// run_acceptance.cpp -- standalone runner: one pass/fail line per criterion

#include <cstdio>
#include <cstring>

#include "ckn/acceptance.hpp"

int main(int argc, char** argv) {
    const bool quick = argc > 1 && std::strcmp(argv[1], "--quick") == 0;
    bool all = true;
    ckn::run_acceptance(quick, [&](const ckn::CriterionResult& r) {
        std::printf("%-4s %s  %s -- %s\n", r.id.c_str(), r.pass ? "PASS" : "FAIL",
                    r.title.c_str(), r.detail.c_str());
        std::fflush(stdout);
        all = all && r.pass;
    });
    return all ? 0 : 1;
}
