#pragma once

#include <vector>

#include "model.hpp"

namespace stcl::rates2 {

// Dense transition-rate matrix S~^{if}, row i = source, column f = target,
// stored in energy units (rate times hbar). Rows sum to zero.
struct RateMatrix {
    int order = 2;
    int n = 0;
    std::vector<double> a;  // row-major n*n

    double& at(int i, int f) { return a[static_cast<size_t>(i) * n + f]; }
    double at(int i, int f) const { return a[static_cast<size_t>(i) * n + f]; }
    double max_abs() const;
    double max_row_sum_abs() const;
};

// Golden-rule rate with the reservoir sum left open:
//   s11(i, f; l1) = 2 pi |V_{if,l1}|^2 D_{l1} C_{l1}(chi_f - chi_i).
double s11_constrained(const model::Setup& setup, int i, int f, int lambda1);

// Full second-order matrix: off-diagonals are lambda sums of s11, the
// diagonal is rebuilt from probability conservation.
RateMatrix s2_matrix(const model::Setup& setup);

} // namespace stcl::rates2
