#pragma once

#include <complex>

#include "tolerances.hpp"

namespace stcl::specfun {

using cplx = std::complex<double>;

// Polygamma functions psi^(n) for complex argument, n = 0..3.
// Upward recurrence into the asymptotic (Bernoulli) region; reflection for
// Re z < 1/2. Accurate to >= 12 significant digits away from the poles.
// Non-positive integer arguments raise ValidationError.
cplx polygamma(int n, cplx z);
cplx digamma(cplx z);
cplx trigamma(cplx z);

// Equilibrium distributions at temperature T > 0, stable for |eps|/T up to
// 1e4 and beyond (no overflowing intermediates). bose() has a pole at eps = 0.
double fermi(double eps, double T);
double bose(double eps, double T);
double fermi_deriv(double eps, double T);   // d n_F / d eps
double bose_deriv(double eps, double T);    // d n_B / d eps, eps != 0

// eps * n_B(eps), continuous through eps = 0 where it equals T.
double eps_times_bose(double eps, double T);

// n_psi(delta) = psi(1/2 + i delta / (2 pi T)) and its delta-derivatives
// (i / 2 pi T)^k psi_k(1/2 + i delta / (2 pi T)).
cplx n_psi(double delta, double T);
cplx n_psi_deriv(int order, double delta, double T);

// Closed form of the convolution integral
//   I^s(d1,d2) = lim_{eta->0} int de C1(e-d1) C2(d2-e) / (e + s*i*eta),
// s = +1 or -1, with C_j(e) = n_F(e - mu_j):
//   I^s = n_B(d2-d1-mu1-mu2) [ n_psi(-s(d2-mu2)) - n_psi(-s(d1+mu1)) ].
// The n_B pole is removable; below tol.pole_rel*T the trigamma limit is used.
cplx integral_I(int s, double d1, double d2, double mu1, double mu2,
                double T, const Tolerances& tol = Tolerances{});

struct Grad2 {
    cplx d1;  // partial w.r.t. d1
    cplx d2;  // partial w.r.t. d2
};

// Analytic partials of integral_I. Near the removable singularity
// (|n_B argument| < tol.grad_pole_rel*T) a midpoint series through the
// third polygamma keeps them smooth.
Grad2 integral_I_grad(int s, double d1, double d2, double mu1, double mu2,
                      double T, const Tolerances& tol = Tolerances{});

// (d/d_d1 + d/d_d2) integral_I: the combination appearing in the
// equal-argument limits of the fourth-order rates. The n_B' pieces cancel
// analytically, so this stays finite through the pole.
cplx integral_I_dirsum(int s, double d1, double d2, double mu1, double mu2,
                       double T, const Tolerances& tol = Tolerances{});

// Closed form of J^s(delta) = lim int de n_F(e - delta - mu) / (e + s*i*eta)
// over a band of half-width `cutoff`:
//   J^s = -s*i*pi n_F(-delta-mu) + Re n_psi(delta+mu) - ln(cutoff/(2 pi T)).
// The O(1/cutoff) remainder is dropped. Requires
// cutoff >= tol.cutoff_min_ratio * |delta+mu|.
cplx integral_J(int s, double delta, double mu, double cutoff,
                double T, const Tolerances& tol = Tolerances{});

// d/d_delta of integral_J; cutoff-independent.
cplx integral_J_deriv(int s, double delta, double mu, double T);

} // namespace stcl::specfun
