#pragma once

#include <random>

#include "model.hpp"

namespace stcl::randsetup {

// Arbitrary Hermitian coupling between well-separated levels; no particle
// structure implied. mu_zero forces equilibrium.
model::Setup general(std::mt19937_64& rng, int n_states, int n_reservoirs,
                     bool mu_zero = false, double cutoff = 1e6);

// Truncated three-state system: an empty state plus two singly-occupied
// orbitals, coupled to n_reservoirs leads. Charge-conserving amplitudes.
model::Setup three_state(std::mt19937_64& rng, int n_reservoirs = 2,
                         double cutoff = 2e6, bool mu_zero = false);

// Full two-mode interacting model (4 occupation states) with bilinear
// lead couplings. Satisfies the coupling sum rule, so fourth-order rates
// are cutoff-independent in the wide-band limit.
model::Setup anderson(std::mt19937_64& rng, int n_reservoirs = 2,
                      double cutoff = 1e6, bool mu_zero = false);

// A ladder of states n = 0..n_states-1 where each step exchanges one
// particle with the environment. Used for the gauge-shift property.
model::Setup ladder(std::mt19937_64& rng, int n_states, int n_reservoirs,
                    double mu_shift = 0.0, double chi_shift = 0.0,
                    double cutoff = 1e6);

} // namespace stcl::randsetup
