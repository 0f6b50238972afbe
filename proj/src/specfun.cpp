#include "specfun.hpp"

#include <cmath>
#include <limits>

#include "errors.hpp"

namespace stcl::specfun {

namespace {

constexpr double PI = 3.141592653589793238462643383279503;

// Even Bernoulli numbers B_2 .. B_20.
constexpr double B2K[10] = {
    1.0 / 6.0, -1.0 / 30.0, 1.0 / 42.0, -1.0 / 30.0, 5.0 / 66.0,
    -691.0 / 2730.0, 7.0 / 6.0, -3617.0 / 510.0, 43867.0 / 798.0,
    -174611.0 / 330.0,
};

// |z| beyond which the asymptotic series is used.
constexpr double ASYMPTOTIC_RADIUS = 18.0;

bool finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

// Asymptotic expansions, |z| >= ASYMPTOTIC_RADIUS, Re z > 0.
cplx polygamma_asymptotic(int n, cplx z) {
    const cplx w = 1.0 / z;
    const cplx w2 = w * w;
    cplx sum;
    switch (n) {
    case 0: {
        sum = std::log(z) - 0.5 * w;
        cplx p = w2;
        for (int k = 1; k <= 10; ++k) {
            sum -= B2K[k - 1] / (2.0 * k) * p;
            p *= w2;
        }
        return sum;
    }
    case 1: {
        sum = w + 0.5 * w2;
        cplx p = w2 * w;
        for (int k = 1; k <= 10; ++k) {
            sum += B2K[k - 1] * p;
            p *= w2;
        }
        return sum;
    }
    case 2: {
        sum = -w2 - w2 * w;
        cplx p = w2 * w2;
        for (int k = 1; k <= 10; ++k) {
            sum -= (2.0 * k + 1.0) * B2K[k - 1] * p;
            p *= w2;
        }
        return sum;
    }
    case 3: {
        sum = 2.0 * w2 * w + 3.0 * w2 * w2;
        cplx p = w2 * w2 * w;
        for (int k = 1; k <= 10; ++k) {
            sum += (2.0 * k + 1.0) * (2.0 * k + 2.0) * B2K[k - 1] * p;
            p *= w2;
        }
        return sum;
    }
    default:
        throw ValidationError("polygamma: order must be 0..3");
    }
}

// Reflection z -> 1-z correction terms, derivatives of pi*cot(pi*z).
cplx reflection_term(int n, cplx z) {
    const cplx s = std::sin(PI * z);
    const cplx c = std::cos(PI * z);
    const cplx s2 = s * s;
    switch (n) {
    case 0: return PI * c / s;
    case 1: return PI * PI / s2;
    case 2: return 2.0 * PI * PI * PI * c / (s2 * s);
    case 3: return 2.0 * PI * PI * PI * PI * (1.0 + 2.0 * c * c) / (s2 * s2);
    default: throw ValidationError("polygamma: order must be 0..3");
    }
}

} // namespace

cplx polygamma(int n, cplx z) {
    if (n < 0 || n > 3) throw ValidationError("polygamma: order must be 0..3");
    if (!finite(z)) throw ValidationError("polygamma: non-finite argument");
    if (z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::floor(z.real()))
        throw ValidationError("polygamma: pole at non-positive integer z = " +
                              std::to_string(static_cast<long long>(z.real())));

    if (z.real() < 0.5) {
        // psi(1-z) - psi(z) = pi cot(pi z), differentiated n times.
        const cplx r = reflection_term(n, z);
        const cplx p = polygamma(n, 1.0 - z);
        switch (n) {
        case 0: return p - r;
        case 1: return -p + r;
        case 2: return p - r;
        case 3: return -p + r;
        }
    }

    // Upward recurrence until the asymptotic region.
    cplx acc = 0.0;
    cplx zz = z;
    while (std::abs(zz) < ASYMPTOTIC_RADIUS) {
        switch (n) {
        case 0: acc -= 1.0 / zz; break;
        case 1: acc += 1.0 / (zz * zz); break;
        case 2: acc -= 2.0 / (zz * zz * zz); break;
        case 3: acc += 6.0 / (zz * zz * zz * zz); break;
        }
        zz += 1.0;
    }
    return polygamma_asymptotic(n, zz) + acc;
}

cplx digamma(cplx z) { return polygamma(0, z); }
cplx trigamma(cplx z) { return polygamma(1, z); }

double fermi(double eps, double T) {
    if (!(T > 0.0) || !std::isfinite(eps)) throw ValidationError("fermi: need finite eps and T > 0");
    const double y = eps / T;
    if (y >= 0.0) {
        const double e = std::exp(-y);
        return e / (1.0 + e);
    }
    return 1.0 / (1.0 + std::exp(y));
}

double bose(double eps, double T) {
    if (!(T > 0.0) || !std::isfinite(eps)) throw ValidationError("bose: need finite eps and T > 0");
    if (eps == 0.0) throw ValidationError("bose: pole at eps = 0");
    const double y = eps / T;
    if (y > 0.0) {
        if (y > 700.0) return std::exp(-y);
        return 1.0 / std::expm1(y);
    }
    // n_B(-x) = -1 - n_B(x)
    const double ay = -y;
    const double pos = (ay > 700.0) ? std::exp(-ay) : 1.0 / std::expm1(ay);
    return -1.0 - pos;
}

double fermi_deriv(double eps, double T) {
    const double u = std::abs(eps) / (2.0 * T);
    if (u > 350.0) return -std::exp(-2.0 * u) / T;
    const double ch = std::cosh(u);
    return -1.0 / (4.0 * T * ch * ch);
}

double bose_deriv(double eps, double T) {
    if (eps == 0.0) throw ValidationError("bose_deriv: pole at eps = 0");
    const double u = std::abs(eps) / (2.0 * T);
    if (u > 350.0) return -std::exp(-2.0 * u) / T;
    const double sh = std::sinh(u);
    return -1.0 / (4.0 * T * sh * sh);
}

double eps_times_bose(double eps, double T) {
    const double y = eps / T;
    if (std::abs(y) < 1e-4) {
        // y/(e^y - 1) = 1 - y/2 + y^2/12 - y^4/720 + ...
        return T * (1.0 - y / 2.0 + y * y / 12.0 - y * y * y * y / 720.0);
    }
    return eps * bose(eps, T);
}

cplx n_psi(double delta, double T) {
    return polygamma(0, cplx(0.5, delta / (2.0 * PI * T)));
}

cplx n_psi_deriv(int order, double delta, double T) {
    const cplx iw = cplx(0.0, 1.0 / (2.0 * PI * T));
    cplx scale = 1.0;
    for (int k = 0; k < order; ++k) scale *= iw;
    return scale * polygamma(order, cplx(0.5, delta / (2.0 * PI * T)));
}

cplx integral_I(int s, double d1, double d2, double mu1, double mu2,
                double T, const Tolerances& tol) {
    const double x = d2 - d1 - mu1 - mu2;   // n_B argument
    const double a = d1 + mu1;
    const double b = d2 - mu2;
    const double sg = static_cast<double>(s);
    if (std::abs(x) < tol.pole_rel * T) {
        // n_B(x) [F(b) - F(a)], F(d) = n_psi(-s d): trigamma limit with the
        // divided difference expanded at the midpoint.
        const double c = 0.5 * (a + b);
        const cplx dd = -sg * (n_psi_deriv(1, -sg * c, T) +
                               (x * x / 24.0) * n_psi_deriv(3, -sg * c, T));
        return eps_times_bose(x, T) * dd;
    }
    return bose(x, T) * (n_psi(-sg * b, T) - n_psi(-sg * a, T));
}

Grad2 integral_I_grad(int s, double d1, double d2, double mu1, double mu2,
                      double T, const Tolerances& tol) {
    const double x = d2 - d1 - mu1 - mu2;
    const double a = d1 + mu1;
    const double b = d2 - mu2;
    const double sg = static_cast<double>(s);
    if (std::abs(x) < tol.grad_pole_rel * T) {
        const double c = 0.5 * (a + b);
        const cplx F1 = -sg * n_psi_deriv(1, -sg * c, T);
        const cplx F2 = n_psi_deriv(2, -sg * c, T);
        const cplx F3 = -sg * n_psi_deriv(3, -sg * c, T);
        Grad2 g;
        g.d1 = 0.5 * T * F2 + 0.5 * F1 + x * (-T * F3 / 12.0 - F2 / 4.0 - F1 / (6.0 * T));
        g.d2 = 0.5 * T * F2 - 0.5 * F1 + x * (T * F3 / 12.0 - F2 / 4.0 + F1 / (6.0 * T));
        return g;
    }
    const cplx B = n_psi(-sg * b, T) - n_psi(-sg * a, T);
    const double nb = bose(x, T);
    const double nbp = bose_deriv(x, T);
    Grad2 g;
    g.d1 = -nbp * B + sg * nb * n_psi_deriv(1, -sg * a, T);
    g.d2 = nbp * B - sg * nb * n_psi_deriv(1, -sg * b, T);
    return g;
}

cplx integral_I_dirsum(int s, double d1, double d2, double mu1, double mu2,
                       double T, const Tolerances& tol) {
    const double x = d2 - d1 - mu1 - mu2;
    const double a = d1 + mu1;
    const double b = d2 - mu2;
    const double sg = static_cast<double>(s);
    if (std::abs(x) < tol.grad_pole_rel * T) {
        const double c = 0.5 * (a + b);
        return eps_times_bose(x, T) * n_psi_deriv(2, -sg * c, T);
    }
    return sg * bose(x, T) *
           (n_psi_deriv(1, -sg * a, T) - n_psi_deriv(1, -sg * b, T));
}

cplx integral_J(int s, double delta, double mu, double cutoff,
                double T, const Tolerances& tol) {
    if (!(cutoff > 0.0)) throw ValidationError("integral_J: cutoff must be positive");
    if (cutoff < tol.cutoff_min_ratio * std::abs(delta + mu))
        throw ValidationError("integral_J: cutoff " + std::to_string(cutoff) +
                              " too small for |delta+mu| = " +
                              std::to_string(std::abs(delta + mu)));
    const double sg = static_cast<double>(s);
    const double re = n_psi(delta + mu, T).real() - std::log(cutoff / (2.0 * PI * T));
    const double im = -sg * PI * fermi(-delta - mu, T);
    return cplx(re, im);
}

cplx integral_J_deriv(int s, double delta, double mu, double T) {
    const double sg = static_cast<double>(s);
    const double re =
        -trigamma(cplx(0.5, (delta + mu) / (2.0 * PI * T))).imag() / (2.0 * PI * T);
    const double im = sg * PI * fermi_deriv(-delta - mu, T);
    return cplx(re, im);
}

} // namespace stcl::specfun
