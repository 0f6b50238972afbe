#include "bench_exact.hpp"

#include <cmath>

#include "errors.hpp"
#include "specfun.hpp"

namespace stcl::bench_exact {

namespace {
constexpr double PI = 3.141592653589793238462643383279503;
using specfun::cplx;
}

double exact_occupation(const ResonantLevelParams& p) {
    if (p.mu_bias != 0.0)
        throw ValidationError("exact_occupation: closed form is equilibrium-only (mu_bias = 0)");
    if (!(p.temperature > 0.0)) throw ValidationError("exact_occupation: T must be > 0");
    const double w = 4.0 * PI * p.temperature;
    const cplx z(0.5 + p.gamma0 / w, -2.0 * p.eps0 / w);
    return 0.5 + specfun::digamma(z).imag() / PI;
}

double exact_current(const ResonantLevelParams& p) {
    if (!(p.temperature > 0.0)) throw ValidationError("exact_current: T must be > 0");
    const double w = 4.0 * PI * p.temperature;
    const cplx zp(0.5 + p.gamma0 / w, (-2.0 * p.eps0 + p.mu_bias) / w);
    const cplx zm(0.5 + p.gamma0 / w, (-2.0 * p.eps0 - p.mu_bias) / w);
    return p.gamma0 / (4.0 * PI) *
           (specfun::digamma(zp).imag() - specfun::digamma(zm).imag());
}

std::vector<double> taylor_in_gamma0(const std::function<double(double)>& fn,
                                     int order, double T) {
    if (order < 0 || order > 2) throw ValidationError("taylor_in_gamma0: order must be 0..2");
    const double h0 = 1e-3 * T;
    const int levels = 4;

    std::vector<double> coeff;
    coeff.push_back(fn(0.0));
    if (order >= 1) {
        // central first difference, Richardson over halved steps
        std::vector<double> d(levels);
        for (int k = 0; k < levels; ++k) {
            const double h = h0 / std::pow(2.0, k);
            d[static_cast<size_t>(k)] = (fn(h) - fn(-h)) / (2.0 * h);
        }
        for (int lev = 1; lev < levels; ++lev) {
            const double fac = std::pow(4.0, lev);
            for (int k = levels - 1; k >= lev; --k)
                d[static_cast<size_t>(k)] =
                    (fac * d[static_cast<size_t>(k)] - d[static_cast<size_t>(k - 1)]) / (fac - 1.0);
        }
        const double err = std::abs(d[levels - 1] - d[levels - 2]);
        if (!(err < 1e-6 * std::max(1.0, std::abs(d[levels - 1]))))
            throw NumericError("taylor_in_gamma0: first derivative did not converge, "
                               "estimate error " + std::to_string(err));
        coeff.push_back(d[levels - 1]);
    }
    if (order >= 2) {
        const double f0 = coeff[0];
        std::vector<double> d(levels);
        for (int k = 0; k < levels; ++k) {
            const double h = h0 / std::pow(2.0, k);
            d[static_cast<size_t>(k)] = (fn(h) - 2.0 * f0 + fn(-h)) / (h * h);
        }
        for (int lev = 1; lev < levels; ++lev) {
            const double fac = std::pow(4.0, lev);
            for (int k = levels - 1; k >= lev; --k)
                d[static_cast<size_t>(k)] =
                    (fac * d[static_cast<size_t>(k)] - d[static_cast<size_t>(k - 1)]) / (fac - 1.0);
        }
        const double err = std::abs(d[levels - 1] - d[levels - 2]);
        if (!(err < 1e-5 * std::max(1.0, std::abs(d[levels - 1]))))
            throw NumericError("taylor_in_gamma0: second derivative did not converge, "
                               "estimate error " + std::to_string(err));
        coeff.push_back(0.5 * d[levels - 1]);
    }
    return coeff;
}

} // namespace stcl::bench_exact
