#pragma once

#include <vector>

#include "rates2.hpp"

namespace stcl::steady {

// Order-by-order steady-state probabilities: sum(p0) = 1, sum(p2) = 0.
struct SteadyStateExpansion {
    std::vector<double> p0;
    std::vector<double> p2;
};

// Nullspace of s2^T normalized to sum 1. The zero eigenvalue must be
// simple; disconnected setups raise NumericError listing the blocks.
std::vector<double> solve_order0(const rates2::RateMatrix& s2);

// Solves s2^T p2 = -s4^T p0 on the zero-sum subspace via the bordered
// system; checks the residual against 1e-12 * |rhs|.
std::vector<double> solve_order2(const rates2::RateMatrix& s2,
                                 const rates2::RateMatrix& s4,
                                 const std::vector<double>& p0);

} // namespace stcl::steady
