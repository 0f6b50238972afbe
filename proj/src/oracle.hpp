#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "model.hpp"

namespace stcl::oracle {

using cplx = std::complex<double>;

// Adaptive quadrature of int de n_F(e-mu1) n_F(mu2-e) / (e - i*gamma) over
// a window wide enough that the truncated tail is below 1e-12.
cplx i0_quadrature(double mu1, double mu2, double gamma, double T);

// Finite-switch-on transcriptions of the fourth-order rate integrands,
// momentum sums replaced by band-limited energy integrals. These never
// touch the closed-form digamma layer. All reservoir cutoffs must be equal.
cplx eta_s22a(const model::Setup& setup, int i, int f, double eta);
cplx eta_s22b(const model::Setup& setup, int i, int f, double eta);
cplx eta_s22c(const model::Setup& setup, int i, int f, double eta);
cplx eta_s31a(const model::Setup& setup, int i, int f, double eta);
cplx eta_s31b(const model::Setup& setup, int i, int f, double eta);
cplx eta_s31c(const model::Setup& setup, int i, int f, double eta);
cplx eta_s31(const model::Setup& setup, int i, int f, double eta);

// The bare T-matrix co-tunnelling piece 4 eta G22a, divergent as 1/eta.
cplx eta_r22a(const model::Setup& setup, int i, int f, double eta);

// Double-Lorentzian functional F[g, eta] for the equal-intermediate-state
// part of the non-crossing channel.
double f_functional(const model::Setup& setup, int i, int f, double eta);

// Default eta grid {1e-2, 3e-3, 1e-3, 3e-4, 1e-4} * T.
std::vector<double> default_eta_grid(double T);

// eta -> 0 limit by quadratic extrapolation through the three smallest
// grid points.
cplx richardson_eta_limit(const std::function<cplx(double)>& fn,
                          const std::vector<double>& etas);

// Power-law diagnostics: least-squares exponent of |value| vs eta in
// log-log space; fit quality is the uncentered R^2 of the fitted power law
// in linear space (1 - sum(v - fit)^2 / sum v^2).
struct EtaSeriesFit {
    std::vector<double> etas;    // strictly decreasing
    std::vector<double> values;
    double exponent = 0.0;
    double r2 = 0.0;
};

EtaSeriesFit eta_scaling_fit(const std::function<double(double)>& evaluator,
                             const std::vector<double>& etas);

} // namespace stcl::oracle
