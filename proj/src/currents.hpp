#pragma once

#include <span>
#include <vector>

#include "model.hpp"
#include "rates2.hpp"
#include "steady.hpp"

namespace stcl::currents {

// Signed current-rate matrix: diagonal (elastic) entries are physical and
// rows need not sum to zero.
struct CurrentRateMatrix {
    int order = 2;
    int n = 0;
    std::vector<double> a;
    double& at(int i, int f) { return a[static_cast<size_t>(i) * n + f]; }
    double at(int i, int f) const { return a[static_cast<size_t>(i) * n + f]; }
};

// Charge bookkeeping weight of a contraction-label assignment for the
// current into reservoir `lambda`: each open label counts -1 if it removes
// a particle from lambda and +1 if it adds one.
int filter_weight(int lambda, std::span<const int> assignment);

// Second-order current rates into reservoir lambda (> 0).
CurrentRateMatrix current_rates_2(const model::Setup& setup, int lambda);

// Fourth-order current rates: filtered co-/pair-tunnelling plus twice the
// real part of the filtered virtually-assisted channel, elastic entries
// included.
CurrentRateMatrix current_rates_4(const model::Setup& setup, int lambda);

struct CurrentEntry {
    int lambda = 0;
    double i2 = 0.0;             // order-2 current
    double i4 = 0.0;             // order-4 current
    double i4_sequential = 0.0;  // S_l2 acting on p2
    double i4_cotunnel = 0.0;    // filtered 22 channel on p0
    double i4_virtual = 0.0;     // filtered 31 channel on p0
};

// Current into reservoir lambda, in units of charge * energy (hbar = 1).
CurrentEntry current(const model::Setup& setup, int lambda,
                     const steady::SteadyStateExpansion& exp);

// All positive labels in setup order.
std::vector<CurrentEntry> current_report(const model::Setup& setup,
                                         const steady::SteadyStateExpansion& exp);

} // namespace stcl::currents
