#include "rates4.hpp"

#include <cmath>

#include "specfun.hpp"

namespace stcl::rates4 {

namespace {

constexpr double PI = 3.141592653589793238462643383279503;

using specfun::integral_I;
using specfun::integral_I_dirsum;
using specfun::integral_J;
using specfun::integral_J_deriv;

} // namespace

cplx s22a_constrained(const model::Setup& setup, int i, int f, int l1, int l2) {
    const int N = setup.n_states();
    const double T = setup.temperature();
    const auto& tol = setup.tol();
    const double fb = tol.fallback_rel * T;
    const double mu1 = setup.mu(l1);
    const double mu2 = setup.mu(l2);
    const double dd12 = setup.dos(l1) * setup.dos(l2);

    double val = 0.0;

    // Tunnelling through two distinct intermediate states. The (n,m) and
    // (m,n) partners are conjugates, so each unordered pair contributes
    // 2 Re[A (I^-(P) - I^+(Q))] / (chi_n - chi_m).
    for (int n = 0; n < N; ++n) {
        for (int m = n + 1; m < N; ++m) {
            const cplx A = setup.V(i, n, l1) * setup.V(n, f, l2) *
                           setup.V(f, m, -l2) * setup.V(m, i, -l1) * dd12;
            if (A == cplx(0.0, 0.0)) continue;
            const double d = setup.dchi(n, m);
            const double p1 = setup.dchi(i, n), p2 = setup.dchi(f, n);
            const double q1 = setup.dchi(i, m), q2 = setup.dchi(f, m);
            if (std::abs(d) >= fb) {
                const cplx Im_ = integral_I(-1, p1, p2, mu1, mu2, T, tol);
                const cplx Ip = integral_I(+1, q1, q2, mu1, mu2, T, tol);
                val += 2.0 * PI * 2.0 * (A * (Im_ - Ip)).real() / d;
            } else {
                // Divided difference of Re I collapses to the directional
                // derivative at the midpoint; the Im part keeps its 1/d.
                const cplx ds = integral_I_dirsum(-1, 0.5 * (p1 + q1), 0.5 * (p2 + q2),
                                                  mu1, mu2, T, tol);
                const cplx ImP = integral_I(-1, p1, p2, mu1, mu2, T, tol);
                const cplx ImQ = integral_I(-1, q1, q2, mu1, mu2, T, tol);
                val += 2.0 * PI * (-2.0 * A.real() * ds.real() -
                                   (2.0 / d) * A.imag() * (ImP.imag() + ImQ.imag()));
            }
        }
    }

    // Equal intermediate states: matrix-element derivative plus the
    // time-local correction terms.
    for (int m = 0; m < N; ++m) {
        const double w12 = std::norm(setup.V(i, m, l1)) * std::norm(setup.V(m, f, l2)) * dd12;
        if (w12 == 0.0) continue;
        const double d1 = setup.dchi(i, m), d2 = setup.dchi(f, m);
        const cplx ds = integral_I_dirsum(+1, d1, d2, mu1, mu2, T, tol);
        val += 2.0 * PI * w12 * (-ds.real());
        const double c2 = setup.spectral_C(l2, setup.dchi(f, m));
        const double c1 = setup.spectral_C(l1, setup.dchi(m, i));
        const cplx jp1 = integral_J_deriv(+1, setup.dchi(i, m), mu1, T);
        const cplx jp2 = integral_J_deriv(+1, setup.dchi(m, f), mu2, T);
        val += 2.0 * PI * w12 * (c2 * jp1.real() - c1 * jp2.real());
    }

    return cplx(val, 0.0);
}

cplx s22b_constrained(const model::Setup& setup, int i, int f, int l1, int l2) {
    const int N = setup.n_states();
    const double T = setup.temperature();
    const auto& tol = setup.tol();
    const double fb = tol.fallback_rel * T;
    const double mu1 = setup.mu(l1);
    const double mu2 = setup.mu(l2);
    const double dd12 = setup.dos(l1) * setup.dos(l2);

    cplx val = 0.0;
    for (int n = 0; n < N; ++n) {
        for (int m = 0; m < N; ++m) {
            const cplx A = setup.V(i, n, l1) * setup.V(n, f, l2) *
                           setup.V(f, m, -l1) * setup.V(m, i, -l2) * dd12;
            if (A == cplx(0.0, 0.0)) continue;
            const double x = setup.dchi(m, f) + setup.dchi(n, i);
            const double a1 = setup.dchi(i, n), a2 = setup.dchi(f, n);
            const double b1 = setup.dchi(m, f), b2 = setup.dchi(m, i);
            cplx dd;
            if (std::abs(x) >= fb) {
                dd = (integral_I(-1, a1, a2, mu1, mu2, T, tol) -
                      integral_I(-1, b1, b2, mu1, mu2, T, tol)) / x;
            } else {
                dd = -integral_I_dirsum(-1, 0.5 * (a1 + b1), 0.5 * (a2 + b2),
                                        mu1, mu2, T, tol);
            }
            val += A * dd;
        }
    }
    // The statistics sign of the crossed contraction combines with the
    // denominator flip behind the I-difference form, leaving -sign.
    return -setup.crossing_sign() * 2.0 * PI * val;
}

cplx s22c(const model::Setup&, int, int) { return cplx(0.0, 0.0); }

cplx s31a_constrained(const model::Setup& setup, int i, int f, int l1) {
    const int N = setup.n_states();
    const double T = setup.temperature();
    const auto& tol = setup.tol();
    const double d1 = setup.dos(l1);
    const double cfi = setup.spectral_C(l1, setup.dchi(f, i));

    cplx val = 0.0;
    for (int l2 : setup.signed_labels()) {
        const double dd12 = d1 * setup.dos(l2);
        const double mu2 = setup.mu(l2);
        const double lam2_cut = setup.cutoff(l2);
        for (int n = 0; n < N; ++n) {
            const cplx jfn = integral_J(+1, setup.dchi(f, n), mu2, lam2_cut, T, tol);
            // chain through a second intermediate state m != f
            for (int m = 0; m < N; ++m) {
                if (m == f) continue;
                const cplx A = setup.V(i, f, l1) * setup.V(f, n, l2) *
                               setup.V(n, m, -l2) * setup.V(m, i, -l1) * dd12;
                if (A == cplx(0.0, 0.0)) continue;
                val += 2.0 * PI * A * cfi * jfn / setup.dchi(f, m);
            }
            // m = f limit: derivative of J plus the J' J correction
            const double w = std::norm(setup.V(i, f, l1)) * std::norm(setup.V(f, n, l2)) * dd12;
            if (w == 0.0) continue;
            const cplx jpfn = integral_J_deriv(+1, setup.dchi(f, n), mu2, T);
            val += 2.0 * PI * w * cfi * jpfn;
            const cplx jpif = integral_J_deriv(+1, setup.dchi(i, f), setup.mu(l1), T);
            val += cplx(0.0, -1.0) * w * jpif * jfn;
        }
    }
    return val;
}

cplx s31b_constrained(const model::Setup& setup, int i, int f, int l1) {
    const int N = setup.n_states();
    const double T = setup.temperature();
    const auto& tol = setup.tol();
    const double fb = tol.fallback_rel * T;
    const double d1 = setup.dos(l1);
    const double cfi = setup.spectral_C(l1, setup.dchi(f, i));

    cplx val = 0.0;
    for (int l2 : setup.signed_labels()) {
        const double dd12 = d1 * setup.dos(l2);
        const double mu2 = setup.mu(l2);
        const double lam2_cut = setup.cutoff(l2);
        for (int n = 0; n < N; ++n) {
            for (int m = 0; m < N; ++m) {
                const cplx A = setup.V(i, f, l1) * setup.V(f, n, l2) *
                               setup.V(n, m, -l1) * setup.V(m, i, -l2) * dd12;
                if (A == cplx(0.0, 0.0)) continue;
                const double x = setup.dchi(i, f) + setup.dchi(n, m);
                cplx dd;
                if (std::abs(x) >= fb) {
                    dd = (integral_J(+1, setup.dchi(f, n), mu2, lam2_cut, T, tol) -
                          integral_J(+1, setup.dchi(i, m), mu2, lam2_cut, T, tol)) / x;
                } else {
                    dd = -integral_J_deriv(+1, 0.5 * (setup.dchi(f, n) + setup.dchi(i, m)),
                                           mu2, T);
                }
                val += A * cfi * dd;
            }
        }
    }
    // Statistics sign of the crossing contraction.
    return setup.crossing_sign() * 2.0 * PI * val;
}

cplx s31c_constrained(const model::Setup& setup, int i, int f, int l1) {
    const int N = setup.n_states();
    const double T = setup.temperature();
    const auto& tol = setup.tol();
    const double d1 = setup.dos(l1);
    const double cfi = setup.spectral_C(l1, setup.dchi(f, i));

    cplx val = 0.0;
    for (int l2 : setup.signed_labels()) {
        const double dd12 = d1 * setup.dos(l2);
        const double mu2 = setup.mu(l2);
        const double lam2_cut = setup.cutoff(l2);
        for (int m = 0; m < N; ++m) {
            const cplx jim = integral_J(+1, setup.dchi(i, m), mu2, lam2_cut, T, tol);
            // virtual excursion through n != i
            for (int n = 0; n < N; ++n) {
                if (n == i) continue;
                const cplx A = setup.V(i, f, l1) * setup.V(f, n, -l1) *
                               setup.V(n, m, l2) * setup.V(m, i, -l2) * dd12;
                if (A == cplx(0.0, 0.0)) continue;
                val += 2.0 * PI * A * cfi * jim / setup.dchi(i, n);
            }
            // n = i limit
            const double w = std::norm(setup.V(i, f, l1)) * std::norm(setup.V(i, m, l2)) * dd12;
            if (w == 0.0) continue;
            const cplx jpif = integral_J_deriv(+1, setup.dchi(i, f), setup.mu(l1), T);
            val += cplx(0.0, 1.0) * w * jpif * jim;
        }
    }
    return val;
}

cplx s31_constrained(const model::Setup& setup, int i, int f, int l1) {
    return s31a_constrained(setup, i, f, l1) + s31b_constrained(setup, i, f, l1) +
           s31c_constrained(setup, i, f, l1);
}

FourthOrderBreakdown s4_matrix(const model::Setup& setup) {
    const int N = setup.n_states();
    FourthOrderBreakdown b;
    b.n = N;
    const size_t nn = static_cast<size_t>(N) * N;
    b.s22a.assign(nn, cplx(0.0, 0.0));
    b.s22b.assign(nn, cplx(0.0, 0.0));
    b.s31a.assign(nn, cplx(0.0, 0.0));
    b.s31b.assign(nn, cplx(0.0, 0.0));
    b.s31c.assign(nn, cplx(0.0, 0.0));
    b.s4.order = 4;
    b.s4.n = N;
    b.s4.a.assign(nn, 0.0);

    for (int i = 0; i < N; ++i) {
        for (int f = 0; f < N; ++f) {
            const size_t k = static_cast<size_t>(i) * N + f;
            for (int l1 : setup.signed_labels()) {
                for (int l2 : setup.signed_labels()) {
                    b.s22a[k] += s22a_constrained(setup, i, f, l1, l2);
                    b.s22b[k] += s22b_constrained(setup, i, f, l1, l2);
                }
                b.s31a[k] += s31a_constrained(setup, i, f, l1);
                b.s31b[k] += s31b_constrained(setup, i, f, l1);
                b.s31c[k] += s31c_constrained(setup, i, f, l1);
            }
        }
    }

    for (int i = 0; i < N; ++i) {
        for (int f = 0; f < N; ++f) {
            if (i == f) continue;
            const size_t k = static_cast<size_t>(i) * N + f;
            b.s4.at(i, f) = (b.s22a[k] + b.s22b[k]).real() +
                            2.0 * (b.s31a[k] + b.s31b[k] + b.s31c[k]).real();
        }
    }
    for (int i = 0; i < N; ++i) {
        double row = 0.0;
        for (int f = 0; f < N; ++f)
            if (f != i) row += b.s4.at(i, f);
        b.s4.at(i, i) = -row;
    }
    return b;
}

double cutoff_doubling_drift(const model::Setup& setup) {
    const FourthOrderBreakdown base = s4_matrix(setup);
    const FourthOrderBreakdown doubled = s4_matrix(setup.with_scaled_cutoffs(2.0));
    const double scale = std::max(base.s4.max_abs(), 1e-300);
    double drift = 0.0;
    for (size_t k = 0; k < base.s4.a.size(); ++k)
        drift = std::max(drift, std::abs(base.s4.a[k] - doubled.s4.a[k]));
    return drift / scale;
}

} // namespace stcl::rates4
