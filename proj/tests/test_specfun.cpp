#include <doctest.h>

#include <cmath>
#include <random>

#include "errors.hpp"
#include "oracle.hpp"
#include "specfun.hpp"

using namespace stcl;
using specfun::cplx;

namespace {
constexpr double PI = 3.141592653589793238462643383279503;

// Euler-Mascheroni constant from the harmonic-sum definition, independent
// of the digamma implementation.
double euler_gamma_series() {
    const double N = 4000000.0;
    double h = 0.0;
    for (double k = N; k >= 1.0; k -= 1.0) h += 1.0 / k;
    // Euler-Maclaurin tail corrections
    return h - std::log(N) - 0.5 / N + 1.0 / (12.0 * N * N) - 1.0 / (120.0 * N * N * N * N);
}
} // namespace

TEST_CASE("digamma recurrence at a generic complex point") {
    const cplx z(3.7, 1.2);
    const cplx lhs = specfun::digamma(z + 1.0) - specfun::digamma(z);
    CHECK(std::abs(lhs - 1.0 / z) < 1e-12 * std::abs(1.0 / z));
}

TEST_CASE("digamma special values against independent series") {
    const double gamma = euler_gamma_series();
    CHECK(std::abs(specfun::digamma(cplx(1.0, 0.0)).real() + gamma) < 1e-12);
    CHECK(std::abs(specfun::digamma(cplx(1.0, 0.0)).imag()) < 1e-15);
    // duplication-related value psi(1/2) = -gamma - 2 ln 2
    CHECK(std::abs(specfun::digamma(cplx(0.5, 0.0)).real() + gamma + 2.0 * std::log(2.0)) <
          1e-12);
}

TEST_CASE("digamma pole rejection") {
    CHECK_THROWS_AS(specfun::digamma(cplx(0.0, 0.0)), ValidationError);
    CHECK_THROWS_AS(specfun::digamma(cplx(-3.0, 0.0)), ValidationError);
    CHECK_THROWS_AS(specfun::digamma(cplx(std::nan(""), 0.0)), ValidationError);
}

TEST_CASE("trigamma special values") {
    CHECK(std::abs(specfun::trigamma(cplx(0.5, 0.0)).real() - PI * PI / 2.0) < 1e-12);
    CHECK(specfun::trigamma(cplx(0.5, 0.0)).imag() == 0.0);
}

TEST_CASE("trigamma matches finite difference of digamma") {
    const cplx z(2.0, 3.0);
    const double h = 1e-5;
    const cplx fd = (specfun::digamma(z + h) - specfun::digamma(z - h)) / (2.0 * h);
    CHECK(std::abs(specfun::trigamma(z) - fd) < 1e-8);
}

TEST_CASE("digamma recurrence over a random grid") {
    std::mt19937_64 rng(1234);
    std::uniform_real_distribution<double> re(-50.0, 50.0);
    std::uniform_real_distribution<double> im(-50.0, 50.0);
    double worst = 0.0;
    int count = 0;
    while (count < 2000) {
        cplx z(re(rng), im(rng));
        // stay off the pole strip along the negative real axis
        if (std::abs(z.imag()) < 0.5 && z.real() < 0.5) continue;
        ++count;
        const cplx lhs = specfun::digamma(z + 1.0) - specfun::digamma(z);
        worst = std::max(worst, std::abs(lhs - 1.0 / z) / std::abs(1.0 / z));
    }
    CHECK(worst < 1e-12);
}

TEST_CASE("fermi and bose identities") {
    const double T = 1.0;
    CHECK(specfun::fermi(0.0, T) == 0.5);
    CHECK(std::abs(specfun::fermi(7.3, T) + specfun::fermi(-7.3, T) - 1.0) < 1e-15);
    CHECK(std::abs(specfun::bose(2.0, T) + specfun::bose(-2.0, T) + 1.0) < 1e-15);
    // stability far into the tails
    CHECK(specfun::fermi(1e4, T) >= 0.0);
    CHECK(specfun::fermi(-1e4, T) == 1.0);
    CHECK(std::isfinite(specfun::bose(1e4, T)));
    CHECK_THROWS_AS(specfun::bose(0.0, T), ValidationError);
}

TEST_CASE("n_psi reflection and special points") {
    const double T = 1.0;
    const cplx at0 = specfun::n_psi(0.0, T);
    CHECK(at0.imag() == 0.0);
    CHECK(std::abs(at0 - specfun::digamma(cplx(0.5, 0.0))) == 0.0);
    const cplx plus = specfun::n_psi(3.0, T);
    const cplx minus = specfun::n_psi(-3.0, T);
    CHECK(std::abs(minus - std::conj(plus)) < 1e-15);
    CHECK(std::abs(specfun::n_psi(2.0 * PI * T, T) - specfun::digamma(cplx(0.5, 1.0))) <
          1e-14);
}

TEST_CASE("integral_I conjugation") {
    const double T = 1.0;
    const cplx ip = specfun::integral_I(+1, 0.3, 1.1, 0.2, -0.5, T);
    const cplx im = specfun::integral_I(-1, 0.3, 1.1, 0.2, -0.5, T);
    CHECK(std::abs(im - std::conj(ip)) < 1e-14 * std::abs(ip));
}

TEST_CASE("integral_I against quadrature of the defining integral") {
    const double T = 1.0;
    // I^-(0, 1, 0, 0) evaluated by the oracle near gamma = 1e-6 T; the
    // leftover linear-in-gamma drift is removed by one Richardson step
    const cplx closed = specfun::integral_I(-1, 0.0, 1.0, 0.0, 0.0, T);
    const cplx q1 = oracle::i0_quadrature(0.0, 1.0, 2e-6, T);
    const cplx q2 = oracle::i0_quadrature(0.0, 1.0, 1e-6, T);
    CHECK(std::abs(closed - (2.0 * q2 - q1)) < 1e-8);
}

TEST_CASE("integral_I removable singularity matches quadrature") {
    const double T = 1.0;
    // d2 - d1 - mu1 - mu2 = 0 exactly
    const double d1 = 0.3, mu1 = 0.2, mu2 = -0.5, d2 = d1 + mu1 + mu2;
    const cplx closed = specfun::integral_I(-1, d1, d2, mu1, mu2, T);
    // gamma -> 0 limit of the quadrature by Richardson in gamma
    const cplx q1 = oracle::i0_quadrature(d1 + mu1, d2 - mu2, 2e-4, T);
    const cplx q2 = oracle::i0_quadrature(d1 + mu1, d2 - mu2, 1e-4, T);
    const cplx quad = 2.0 * q2 - q1;
    CHECK(std::abs(closed - quad) < 1e-7);
}

TEST_CASE("integral_I continuity through the pole") {
    const double T = 1.0;
    // removable point with both digamma arguments at -3T
    const double d1 = -3.2, mu1 = 0.2, mu2 = 0.7;
    const double d2 = d1 + mu1 + mu2;  // n_B argument crosses zero here
    const double xi = 1e-6 * T;
    const cplx left = specfun::integral_I(-1, d1, d2 - xi, mu1, mu2, T);
    const cplx right = specfun::integral_I(-1, d1, d2 + xi, mu1, mu2, T);
    CHECK(std::abs(left - right) < 1e-6 * std::abs(left));
    // and the fallback value sits between them
    const cplx mid = specfun::integral_I(-1, d1, d2, mu1, mu2, T);
    CHECK(std::abs(mid - left) < 1e-6 * std::abs(mid));
    CHECK(std::abs(mid - right) < 1e-6 * std::abs(mid));
}

TEST_CASE("integral_I gradient matches finite differences") {
    const double T = 1.0;
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    const double h = 1e-6;
    double worst = 0.0;
    for (int k = 0; k < 100; ++k) {
        const double d1 = u(rng), d2 = u(rng), m1 = u(rng), m2 = u(rng);
        if (std::abs(d2 - d1 - m1 - m2) < 1e-2) continue;  // stay off the pole for FD
        const auto g = specfun::integral_I_grad(-1, d1, d2, m1, m2, T);
        const cplx fd1 = (specfun::integral_I(-1, d1 + h, d2, m1, m2, T) -
                          specfun::integral_I(-1, d1 - h, d2, m1, m2, T)) /
                         (2.0 * h);
        const cplx fd2 = (specfun::integral_I(-1, d1, d2 + h, m1, m2, T) -
                          specfun::integral_I(-1, d1, d2 - h, m1, m2, T)) /
                         (2.0 * h);
        const double scale = std::max(std::abs(g.d1), std::abs(g.d2));
        worst = std::max(worst, std::abs(g.d1 - fd1) / scale);
        worst = std::max(worst, std::abs(g.d2 - fd2) / scale);
    }
    CHECK(worst < 1e-7);
}

TEST_CASE("integral_I directional derivative sum rule") {
    const double T = 1.0;
    const double d1 = 0.4, d2 = 1.3, m1 = -0.2, m2 = 0.7, h = 1e-6;
    const cplx ds = specfun::integral_I_dirsum(-1, d1, d2, m1, m2, T);
    const cplx fd = (specfun::integral_I(-1, d1 + h, d2 + h, m1, m2, T) -
                     specfun::integral_I(-1, d1 - h, d2 - h, m1, m2, T)) /
                    (2.0 * h);
    CHECK(std::abs(ds - fd) < 1e-7 * std::abs(ds));
    const auto g = specfun::integral_I_grad(-1, d1, d2, m1, m2, T);
    CHECK(std::abs(ds - (g.d1 + g.d2)) < 1e-13 * std::abs(ds));
}

TEST_CASE("integral_I gradient is continuous across its pole branch") {
    // the gradient switches to a midpoint polygamma series below
    // grad_pole_rel * T; both branches agree at the boundary to the
    // accuracy the direct branch retains there
    const double T = 1.0;
    const double d1 = -3.2, mu1 = 0.2, mu2 = 0.7;
    const double d2_pole = d1 + mu1 + mu2;
    for (double x : {4e-4, -4e-4}) {  // just outside the default switch
        const auto direct = specfun::integral_I_grad(-1, d1, d2_pole + x, mu1, mu2, T);
        Tolerances wide;
        wide.grad_pole_rel = 1e-3;  // force the series branch at the same point
        const auto series = specfun::integral_I_grad(-1, d1, d2_pole + x, mu1, mu2, T, wide);
        const double scale = std::abs(direct.d1) + std::abs(direct.d2);
        CHECK(std::abs(direct.d1 - series.d1) < 1e-6 * scale);
        CHECK(std::abs(direct.d2 - series.d2) < 1e-6 * scale);
    }
}

TEST_CASE("distribution derivatives match finite differences") {
    const double T = 1.3, h = 1e-6;
    for (double eps : {-4.0, -0.3, 0.7, 9.0}) {
        const double fd_f = (specfun::fermi(eps + h, T) - specfun::fermi(eps - h, T)) / (2 * h);
        CHECK(std::abs(specfun::fermi_deriv(eps, T) - fd_f) < 1e-10);
        const double fd_b = (specfun::bose(eps + h, T) - specfun::bose(eps - h, T)) / (2 * h);
        CHECK(std::abs(specfun::bose_deriv(eps, T) - fd_b) < 1e-8 * std::abs(fd_b));
    }
}

TEST_CASE("eps times bose agrees with the direct product at the series edge") {
    const double T = 2.0;
    // series/direct switch sits at |eps/T| = 1e-4
    for (double y : {0.99e-4, 1.01e-4, -0.99e-4}) {
        const double x = y * T;
        CHECK(std::abs(specfun::eps_times_bose(x, T) - x / std::expm1(y)) < 1e-14 * T);
    }
    CHECK(specfun::eps_times_bose(0.0, T) == T);
}

TEST_CASE("integral_I gradient conjugation between branches") {
    const double T = 1.0;
    const auto gp = specfun::integral_I_grad(+1, 0.3, 1.1, 0.2, -0.5, T);
    const auto gm = specfun::integral_I_grad(-1, 0.3, 1.1, 0.2, -0.5, T);
    CHECK(std::abs(gp.d1 - std::conj(gm.d1)) < 1e-14);
    CHECK(std::abs(gp.d2 - std::conj(gm.d2)) < 1e-14);
}

TEST_CASE("integral_J structure") {
    const double T = 1.0, mu = 0.4, delta = 0.9;
    const cplx jp3 = specfun::integral_J(+1, delta, mu, 1e3, T);
    const cplx jp6 = specfun::integral_J(+1, delta, mu, 1e6, T);
    // imaginary part is cutoff-independent and pins the distribution
    CHECK(jp3.imag() == jp6.imag());
    CHECK(std::abs(jp3.imag() + PI * specfun::fermi(-delta - mu, T)) < 1e-15);
    const cplx jm = specfun::integral_J(-1, delta, mu, 1e3, T);
    const cplx diff = jp3 - jm;
    CHECK(std::abs(diff - cplx(0.0, -2.0 * PI * specfun::fermi(-delta - mu, T))) < 1e-15);
    CHECK_THROWS_AS(specfun::integral_J(+1, 50.0, 0.0, 1e3, T), ValidationError);
}

TEST_CASE("integral_J against band-limited quadrature") {
    const double T = 1.0, cutoff = 1e4;
    const cplx closed = specfun::integral_J(+1, 0.0, 0.0, cutoff, T);
    // J^+ = conj of the gamma -> 0 convolution with the lower band edge
    const cplx qm1 = oracle::i0_quadrature(0.0, -cutoff, 2e-4, T);
    const cplx qm2 = oracle::i0_quadrature(0.0, -cutoff, 1e-4, T);
    const cplx quad = std::conj(2.0 * qm2 - qm1);
    CHECK(std::abs(closed - quad) < 1e-4);
}

TEST_CASE("integral_J derivative") {
    const double T = 1.0, mu = -0.3, delta = 0.8, h = 1e-6;
    const cplx jd = specfun::integral_J_deriv(+1, delta, mu, T);
    const cplx fd = (specfun::integral_J(+1, delta + h, mu, 1e6, T) -
                     specfun::integral_J(+1, delta - h, mu, 1e6, T)) /
                    (2.0 * h);
    CHECK(std::abs(jd - fd) < 1e-8);
    // cutoff independence is structural: the derivative never sees it
    const cplx fd2 = (specfun::integral_J(+1, delta + h, mu, 1e3, T) -
                      specfun::integral_J(+1, delta - h, mu, 1e3, T)) /
                     (2.0 * h);
    CHECK(std::abs(fd - fd2) < 1e-9);
    // at delta + mu = 0 only the distribution-derivative term survives
    const cplx at0 = specfun::integral_J_deriv(+1, 0.3, -0.3, T);
    CHECK(std::abs(at0.real()) < 1e-15);
    CHECK(std::abs(at0.imag() - PI * specfun::fermi_deriv(0.0, T)) < 1e-15);
}
