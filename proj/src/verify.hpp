#pragma once

#include <string>
#include <vector>

namespace stcl::verify {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    double seconds = 0.0;
    std::string detail;
};

// Run acceptance criterion `id` (1..8), or all of them with id = 0.
// With quick = true the long quadrature criteria (5, 6) shrink to one
// sample each; the release gate runs the full set.
std::vector<CriterionResult> run(int id = 0, bool quick = false);

// One line per criterion: "criterion k PASS/FAIL  name  (t s)  detail".
std::string format_table(const std::vector<CriterionResult>& results);

bool all_passed(const std::vector<CriterionResult>& results);

} // namespace stcl::verify
