#pragma once

#include <complex>
#include <functional>
#include <vector>

namespace stcl::quadrature {

using cplx = std::complex<double>;

struct Options {
    double abs_tol = 1e-10;
    double rel_tol = 1e-10;
    // When nonzero, also stop once the error falls below mass_rel times the
    // accumulated |interval value| mass. Keeps cancellation-heavy integrands
    // from demanding precision beyond their conditioning.
    double mass_rel = 0.0;
    int max_intervals = 4000;
};

struct Stats {
    int evaluations = 0;
    int intervals = 0;
    double error_estimate = 0.0;
};

// Globally adaptive Gauss-Kronrod 7/15 over [a, b] for a complex-valued
// integrand. `breakpoints` seeds the initial subdivision (sharp features,
// near-poles); points outside (a, b) are ignored. Throws NumericError with
// interval diagnostics if the target is not reached.
cplx integrate(const std::function<cplx(double)>& f, double a, double b,
               const std::vector<double>& breakpoints, const Options& opts,
               Stats* stats = nullptr);

// Convenience overload without seeds.
cplx integrate(const std::function<cplx(double)>& f, double a, double b,
               const Options& opts, Stats* stats = nullptr);

// Breakpoint helper: center +/- widths at several scales, clipped later by
// integrate(). Appends to `out`.
void seed_feature(std::vector<double>& out, double center, double width);

} // namespace stcl::quadrature
