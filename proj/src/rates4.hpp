#pragma once

#include <complex>
#include <vector>

#include "model.hpp"
#include "rates2.hpp"

namespace stcl::rates4 {

using cplx = std::complex<double>;

// Fourth-order pieces per (i, f) before taking real parts, plus the
// assembled conservation-closed matrix. Wick channels:
//   s22a  non-crossing co-/pair-tunnelling (regularised)
//   s22b  crossing co-/pair-tunnelling (no subtraction needed)
//   s31a/b/c  virtually-assisted sequential tunnelling
// The s22c channel vanishes identically in the eta -> 0 limit.
struct FourthOrderBreakdown {
    int n = 0;
    std::vector<cplx> s22a, s22b, s31a, s31b, s31c;  // row-major n*n
    rates2::RateMatrix s4;

    cplx at(const std::vector<cplx>& v, int i, int f) const {
        return v[static_cast<size_t>(i) * n + f];
    }
};

// Co-/pair-tunnelling rates with both reservoir contractions left open.
cplx s22a_constrained(const model::Setup& setup, int i, int f, int l1, int l2);
cplx s22b_constrained(const model::Setup& setup, int i, int f, int l1, int l2);

// The no-tunnelling channel: identically zero after regularisation.
cplx s22c(const model::Setup& setup, int i, int f);

// Individual virtually-assisted channels and their sum, with the single
// branch-connecting contraction l1 left open.
cplx s31a_constrained(const model::Setup& setup, int i, int f, int l1);
cplx s31b_constrained(const model::Setup& setup, int i, int f, int l1);
cplx s31c_constrained(const model::Setup& setup, int i, int f, int l1);
cplx s31_constrained(const model::Setup& setup, int i, int f, int l1);

// Full fourth-order matrix: off-diagonals Re[s22a+s22b] + 2 Re[s31],
// diagonal from probability conservation.
FourthOrderBreakdown s4_matrix(const model::Setup& setup);

// Relative change of the s4 entries when every cutoff is doubled. Values
// above setup.tol().cutoff_drift_rel indicate a coupling-sum-rule violation.
double cutoff_doubling_drift(const model::Setup& setup);

} // namespace stcl::rates4
