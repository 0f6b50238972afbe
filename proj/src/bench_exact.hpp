#pragma once

#include <functional>
#include <vector>

namespace stcl::bench_exact {

struct ResonantLevelParams {
    double eps0 = 0.0;
    double gamma0 = 1.0;
    double mu_bias = 0.0;
    double temperature = 1.0;
};

// Exact equilibrium occupation of the level,
//   P1 = 1/2 + (1/pi) Im psi(1/2 + (gamma0 - 2 i eps0) / (4 pi T)).
// Only defined at mu_bias = 0.
double exact_occupation(const ResonantLevelParams& p);

// Exact current into the right lead,
//   I = (gamma0 / 4 pi) [Im psi(... + i mu ...) - Im psi(... - i mu ...)],
// unit charge.
double exact_current(const ResonantLevelParams& p);

// Taylor coefficients of fn(gamma0) around gamma0 = 0 up to `order`,
// via Richardson-extrapolated central differences with base step
// 1e-3 * T. coefficient[k] multiplies gamma0^k.
std::vector<double> taylor_in_gamma0(const std::function<double(double)>& fn,
                                     int order, double T);

} // namespace stcl::bench_exact
