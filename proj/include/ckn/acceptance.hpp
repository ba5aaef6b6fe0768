// acceptance.hpp -- the end-to-end verification suite (criteria A1..A12)
#pragma once

#include <functional>
#include <string>
#include <vector>

namespace ckn {

struct CriterionResult {
    std::string id;      // "A1" .. "A12"
    std::string title;
    bool pass = false;
    std::string detail;  // measured-vs-expected summary
};

// Runs every criterion (each one self-contained, with fixed reference
// parameters); exceptions inside a criterion are caught and reported as
// failures. `quick` shrinks grids/horizons for smoke testing and is NOT the
// acceptance configuration.
std::vector<CriterionResult> run_acceptance(
    bool quick = false,
    const std::function<void(const CriterionResult&)>& on_result = {});

}  // namespace ckn
