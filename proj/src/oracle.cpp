#include "oracle.hpp"

#include <algorithm>
#include <cmath>

#include "errors.hpp"
#include "quadrature.hpp"
#include "specfun.hpp"

namespace stcl::oracle {

namespace {

using model::Setup;
using quadrature::Options;
using quadrature::integrate;
using quadrature::seed_feature;

// A reservoir-summed amplitude chain: eps -> sum_k coef_k * C_{lambda_k}(eps).
struct Chain {
    std::vector<std::pair<int, cplx>> terms;

    bool empty() const { return terms.empty(); }
    void add(int lambda, cplx coef) {
        if (coef != cplx(0.0, 0.0)) terms.emplace_back(lambda, coef);
    }
    cplx eval(const Setup& s, double eps) const {
        cplx v = 0.0;
        for (const auto& [lam, c] : terms) v += c * s.spectral_C(lam, eps);
        return v;
    }
    // Fermi-step locations for breakpoint seeding.
    void steps(const Setup& s, std::vector<double>& out, double T) const {
        for (const auto& [lam, c] : terms) seed_feature(out, s.mu(lam), T);
    }
};

double band_halfwidth(const Setup& s) {
    double lam = s.reservoirs().front().cutoff;
    for (const auto& r : s.reservoirs())
        if (r.cutoff != lam)
            throw NumericError("finite-eta oracle requires equal reservoir cutoffs");
    return lam;
}

void log_tail_breaks(std::vector<double>& out, double T, double band) {
    for (double w = 30.0 * T; w < band; w *= 3.0) {
        out.push_back(w);
        out.push_back(-w);
    }
}

// Two-pass 1-D integral: a loose pass fixes the magnitude, a second pass
// runs at rel_tol with a matching absolute floor.
cplx integrate_scaled(const std::function<cplx(double)>& f, double a, double b,
                      const std::vector<double>& breaks, double rel_tol) {
    Options loose;
    loose.abs_tol = 1e-290;
    loose.rel_tol = 1e-4;
    loose.mass_rel = 1e-5;
    loose.max_intervals = 4000;
    const cplx first = integrate(f, a, b, breaks, loose);
    Options tight;
    tight.rel_tol = rel_tol;
    tight.abs_tol = std::max(rel_tol * std::abs(first), 1e-280);
    tight.mass_rel = 1e-3 * rel_tol;
    tight.max_intervals = 20000;
    return integrate(f, a, b, breaks, tight);
}

struct Oracle2D {
    const Setup& setup;
    double band;
    double rel_tol;

    // integrand f(e1, e2); inner breakpoints may depend on e1.
    cplx run(const std::function<cplx(double, double)>& f,
             const std::vector<double>& outer_breaks,
             const std::function<void(double, std::vector<double>&)>& inner_breaks) const {
        Options inner_opts;
        inner_opts.abs_tol = 1e-290;
        inner_opts.rel_tol = 0.03 * rel_tol;
        inner_opts.mass_rel = 1e-4 * rel_tol;
        inner_opts.max_intervals = 20000;
        auto outer_f = [&](double e1) -> cplx {
            std::vector<double> br;
            inner_breaks(e1, br);
            return integrate([&](double e2) { return f(e1, e2); }, -band, band, br,
                             inner_opts);
        };
        return integrate_scaled(outer_f, -band, band, outer_breaks, rel_tol);
    }
};

constexpr double REL_2D = 1e-8;
constexpr double REL_1D = 1e-11;

} // namespace

cplx i0_quadrature(double mu1, double mu2, double gamma, double T) {
    if (!(gamma > 0.0)) throw ValidationError("i0_quadrature: gamma must be > 0");
    if (!(T > 0.0)) throw ValidationError("i0_quadrature: T must be > 0");
    const double W = std::max(std::abs(mu1), std::abs(mu2)) + 45.0 * T;
    std::vector<double> br;
    seed_feature(br, 0.0, gamma);
    seed_feature(br, mu1, T);
    seed_feature(br, mu2, T);
    auto f = [&](double e) -> cplx {
        const double num = specfun::fermi(e - mu1, T) * specfun::fermi(mu2 - e, T);
        return num / cplx(e, -gamma);
    };
    Options opts;
    opts.abs_tol = 1e-12;
    opts.rel_tol = 1e-11;
    opts.max_intervals = 20000;
    return integrate(f, -W, W, br, opts);
}

cplx eta_s22a(const Setup& setup, int i, int f, double eta) {
    const int N = setup.n_states();
    const double T = setup.temperature();
    const double band = band_halfwidth(setup);
    Oracle2D engine{setup, band, REL_2D};

    cplx total = 0.0;
    for (int n = 0; n < N; ++n) {
        for (int m = 0; m < N; ++m) {
            Chain P, Q;
            for (int l1 : setup.signed_labels())
                P.add(l1, setup.V(i, n, l1) * setup.V(m, i, -l1) * setup.dos(l1));
            for (int l2 : setup.signed_labels())
                Q.add(l2, setup.V(n, f, l2) * setup.V(f, m, -l2) * setup.dos(l2));
            if (P.empty() || Q.empty()) continue;

            const double din = setup.dchi(i, n), dim = setup.dchi(i, m);
            const double dmf = setup.dchi(m, f);
            const double shift = setup.dchi(m, i) + setup.dchi(m, f);
            const bool diag = (n == m);

            std::vector<double> outer;
            seed_feature(outer, -din, eta);
            seed_feature(outer, -dim, eta);
            P.steps(setup, outer, T);
            log_tail_breaks(outer, T, band);

            auto inner_breaks = [&, dmf, shift](double e1, std::vector<double>& br) {
                seed_feature(br, -dmf, eta);
                for (const auto& [lam, c] : Q.terms) {
                    seed_feature(br, 0.5 * (setup.mu(lam) + e1 - shift), 0.5 * T);
                    if (diag) seed_feature(br, setup.mu(lam), T);
                }
                log_tail_breaks(br, T, band);
            };
            auto f2 = [&, din, dim, dmf, shift, diag](double e1, double e2) -> cplx {
                cplx bracket = Q.eval(setup, 2.0 * e2 - e1 + shift);
                if (diag) bracket -= Q.eval(setup, e2);
                const double lor = (e2 + dmf) * (e2 + dmf) + eta * eta;
                return P.eval(setup, e1) * 2.0 * eta * bracket /
                       (cplx(din + e1, -eta) * cplx(dim + e1, eta) * lor);
            };
            total += engine.run(f2, outer, inner_breaks);
        }
    }
    return total;
}

cplx eta_r22a(const Setup& setup, int i, int f, double eta) {
    const int N = setup.n_states();
    const double T = setup.temperature();
    const double band = band_halfwidth(setup);
    Oracle2D engine{setup, band, 1e-7};

    cplx total = 0.0;
    for (int n = 0; n < N; ++n) {
        for (int m = 0; m < N; ++m) {
            Chain P, Q;
            for (int l1 : setup.signed_labels())
                P.add(l1, setup.V(i, n, l1) * setup.V(m, i, -l1) * setup.dos(l1));
            for (int l2 : setup.signed_labels())
                Q.add(l2, setup.V(n, f, l2) * setup.V(f, m, -l2) * setup.dos(l2));
            if (P.empty() || Q.empty()) continue;

            const double din = setup.dchi(i, n), dim = setup.dchi(i, m);
            const double dif = setup.dchi(i, f);

            std::vector<double> outer;
            seed_feature(outer, -din, eta);
            seed_feature(outer, -dim, eta);
            P.steps(setup, outer, T);
            log_tail_breaks(outer, T, band);

            auto inner_breaks = [&, dif](double e1, std::vector<double>& br) {
                seed_feature(br, -dif - e1, 2.0 * eta);
                Q.steps(setup, br, T);
                log_tail_breaks(br, T, band);
            };
            auto f2 = [&, din, dim, dif](double e1, double e2) -> cplx {
                const double r = dif + e1 + e2;
                return 4.0 * eta * P.eval(setup, e1) * Q.eval(setup, e2) /
                       ((r * r + 4.0 * eta * eta) * cplx(din + e1, -eta) *
                        cplx(dim + e1, eta));
            };
            total += engine.run(f2, outer, inner_breaks);
        }
    }
    return total;
}

cplx eta_s22b(const Setup& setup, int i, int f, double eta) {
    const int N = setup.n_states();
    const double T = setup.temperature();
    const double band = band_halfwidth(setup);
    Oracle2D engine{setup, band, REL_2D};

    cplx total = 0.0;
    for (int n = 0; n < N; ++n) {
        for (int m = 0; m < N; ++m) {
            Chain P1, P2;
            for (int l1 : setup.signed_labels())
                P1.add(l1, setup.V(i, n, l1) * setup.V(f, m, -l1) * setup.dos(l1));
            for (int l2 : setup.signed_labels())
                P2.add(l2, setup.V(n, f, l2) * setup.V(m, i, -l2) * setup.dos(l2));
            if (P1.empty() || P2.empty()) continue;

            const double din = setup.dchi(i, n), dim = setup.dchi(i, m);
            const double dif = setup.dchi(i, f);

            std::vector<double> outer;
            seed_feature(outer, -din, eta);
            P1.steps(setup, outer, T);
            log_tail_breaks(outer, T, band);

            auto inner_breaks = [&, dif, dim](double e1, std::vector<double>& br) {
                seed_feature(br, -dif - e1, 2.0 * eta);
                seed_feature(br, -dim, eta);
                P2.steps(setup, br, T);
                log_tail_breaks(br, T, band);
            };
            const double sign = setup.crossing_sign();
            auto f2 = [&, sign, din, dim, dif](double e1, double e2) -> cplx {
                const double r = dif + e1 + e2;
                return sign * 4.0 * eta * P1.eval(setup, e1) * P2.eval(setup, e2) /
                       ((r * r + 4.0 * eta * eta) * cplx(din + e1, -eta) *
                        cplx(dim + e2, eta));
            };
            total += engine.run(f2, outer, inner_breaks);
        }
    }
    return total;
}

namespace {

// Band-limited int de chain(e) / (delta + e + s*i*w).
cplx jlike(const Setup& setup, const Chain& chain, double delta, double w, int s,
           double rel_tol) {
    const double T = setup.temperature();
    const double band = band_halfwidth(setup);
    std::vector<double> br;
    seed_feature(br, -delta, std::abs(w));
    chain.steps(setup, br, T);
    log_tail_breaks(br, T, band);
    auto f = [&](double e) -> cplx {
        return chain.eval(setup, e) / cplx(delta + e, s * w);
    };
    return integrate_scaled(f, -band, band, br, rel_tol);
}

// int de chain(e) / ((X - i a)(X + i b)) with X = delta + e.
cplx jlike2(const Setup& setup, const Chain& chain, double delta, double a, double b,
            double rel_tol) {
    const double T = setup.temperature();
    const double band = band_halfwidth(setup);
    std::vector<double> br;
    seed_feature(br, -delta, std::max(std::abs(a), std::abs(b)));
    chain.steps(setup, br, T);
    log_tail_breaks(br, T, band);
    auto f = [&](double e) -> cplx {
        const double X = delta + e;
        return chain.eval(setup, e) / (cplx(X, -a) * cplx(X, b));
    };
    return integrate_scaled(f, -band, band, br, rel_tol);
}

} // namespace

cplx eta_s22c(const Setup& setup, int i, int f, double eta) {
    if (i == f) return 0.0;  // exact cancellation against G20 * G02
    const int N = setup.n_states();
    const double dif = setup.dchi(i, f);
    cplx upper = 0.0, lower = 0.0;
    for (int n = 0; n < N; ++n) {
        Chain c;
        for (int l1 : setup.signed_labels())
            c.add(l1, setup.V(i, n, l1) * setup.V(n, f, -l1) * setup.dos(l1));
        if (c.empty()) continue;
        upper += jlike(setup, c, setup.dchi(i, n), eta, -1, REL_1D);
    }
    for (int m = 0; m < N; ++m) {
        Chain c;
        for (int l2 : setup.signed_labels())
            c.add(l2, setup.V(f, m, l2) * setup.V(m, i, -l2) * setup.dos(l2));
        if (c.empty()) continue;
        lower += jlike(setup, c, setup.dchi(i, m), eta, +1, REL_1D);
    }
    return 4.0 * eta * upper * lower / (dif * dif + 4.0 * eta * eta);
}

cplx eta_s31a(const Setup& setup, int i, int f, double eta) {
    const int N = setup.n_states();
    const double T = setup.temperature();
    const double band = band_halfwidth(setup);
    Oracle2D engine{setup, band, REL_2D};

    cplx total = 0.0;
    for (int n = 0; n < N; ++n) {
        for (int m = 0; m < N; ++m) {
            Chain U, W;
            for (int l1 : setup.signed_labels())
                U.add(l1, setup.V(i, f, l1) * setup.V(m, i, -l1) * setup.dos(l1));
            for (int l2 : setup.signed_labels())
                W.add(l2, setup.V(f, n, l2) * setup.V(n, m, -l2) * setup.dos(l2));
            if (U.empty() || W.empty()) continue;

            const double dif = setup.dchi(i, f), dim = setup.dchi(i, m);
            const double din = setup.dchi(i, n), dfn = setup.dchi(f, n);
            const bool diag = (m == f);

            std::vector<double> outer;
            seed_feature(outer, -dif, eta);
            seed_feature(outer, -dif, 3.0 * eta);
            seed_feature(outer, -dim, eta);
            U.steps(setup, outer, T);
            log_tail_breaks(outer, T, band);

            auto inner_breaks = [&, din, dfn, diag](double e1, std::vector<double>& br) {
                seed_feature(br, -din - e1, 2.0 * eta);
                if (diag) seed_feature(br, -dfn, eta);
                W.steps(setup, br, T);
                log_tail_breaks(br, T, band);
            };
            auto f2 = [&, dif, dim, din, dfn, diag](double e1, double e2) -> cplx {
                cplx bracket = 4.0 * eta / (cplx(din + e1 + e2, 2.0 * eta) *
                                            cplx(dif + e1, 3.0 * eta));
                if (diag) bracket += cplx(0.0, 1.0) / cplx(dfn + e2, eta);
                return U.eval(setup, e1) * W.eval(setup, e2) * bracket /
                       (cplx(dif + e1, -eta) * cplx(dim + e1, eta));
            };
            total += engine.run(f2, outer, inner_breaks);
        }
    }
    return total;
}

cplx eta_s31b(const Setup& setup, int i, int f, double eta) {
    const int N = setup.n_states();
    const double T = setup.temperature();
    const double band = band_halfwidth(setup);
    Oracle2D engine{setup, band, REL_2D};

    cplx total = 0.0;
    for (int n = 0; n < N; ++n) {
        for (int m = 0; m < N; ++m) {
            Chain X, Y;
            for (int l1 : setup.signed_labels())
                X.add(l1, setup.V(i, f, l1) * setup.V(n, m, -l1) * setup.dos(l1));
            for (int l2 : setup.signed_labels())
                Y.add(l2, setup.V(f, n, l2) * setup.V(m, i, -l2) * setup.dos(l2));
            if (X.empty() || Y.empty()) continue;

            const double dif = setup.dchi(i, f), dim = setup.dchi(i, m);
            const double din = setup.dchi(i, n);

            std::vector<double> outer;
            seed_feature(outer, -dif, eta);
            seed_feature(outer, -dif, 3.0 * eta);
            X.steps(setup, outer, T);
            log_tail_breaks(outer, T, band);

            auto inner_breaks = [&, din, dim](double e1, std::vector<double>& br) {
                seed_feature(br, -din - e1, 2.0 * eta);
                seed_feature(br, -dim, eta);
                Y.steps(setup, br, T);
                log_tail_breaks(br, T, band);
            };
            const double sign = setup.crossing_sign();
            auto f2 = [&, sign, dif, dim, din](double e1, double e2) -> cplx {
                return sign * 4.0 * eta * X.eval(setup, e1) * Y.eval(setup, e2) /
                       (cplx(dif + e1, -eta) * cplx(dif + e1, 3.0 * eta) *
                        cplx(din + e1 + e2, 2.0 * eta) * cplx(dim + e2, eta));
            };
            total += engine.run(f2, outer, inner_breaks);
        }
    }
    return total;
}

cplx eta_s31c(const Setup& setup, int i, int f, double eta) {
    const int N = setup.n_states();
    cplx total = 0.0;
    for (int n = 0; n < N; ++n) {
        Chain Z;
        for (int l1 : setup.signed_labels())
            Z.add(l1, setup.V(i, f, l1) * setup.V(f, n, -l1) * setup.dos(l1));
        if (Z.empty()) continue;

        cplx zint;
        if (n == i) {
            // combined with the G11 * G20 subtraction: -i int Z / ((X+3i eta)(X+i eta))
            zint = -cplx(0.0, 1.0) *
                   jlike2(setup, Z, setup.dchi(i, f), -3.0 * eta, eta, REL_1D);
        } else {
            // int Z / ((X - i eta)(X + 3 i eta))
            zint = 4.0 * eta *
                   jlike2(setup, Z, setup.dchi(i, f), eta, 3.0 * eta, REL_1D) /
                   cplx(setup.dchi(i, n), 2.0 * eta);
        }

        for (int m = 0; m < N; ++m) {
            Chain R;
            for (int l2 : setup.signed_labels())
                R.add(l2, setup.V(n, m, l2) * setup.V(m, i, -l2) * setup.dos(l2));
            if (R.empty()) continue;
            const cplx rint = jlike(setup, R, setup.dchi(i, m), eta, +1, REL_1D);
            total += zint * rint;
        }
    }
    return total;
}

cplx eta_s31(const Setup& setup, int i, int f, double eta) {
    return eta_s31a(setup, i, f, eta) + eta_s31b(setup, i, f, eta) +
           eta_s31c(setup, i, f, eta);
}

double f_functional(const Setup& setup, int i, int f, double eta) {
    if (!(eta >= 1e-6 * setup.temperature() && eta <= 0.1 * setup.temperature()))
        throw ValidationError("f_functional: eta outside [1e-6, 1e-1] * T");
    const int N = setup.n_states();
    const double T = setup.temperature();
    // g tends to a constant deep in the filled band, so the window must be
    // the physical band: a smaller cut leaves an O(1/W) offset.
    const double wmax = band_halfwidth(setup);

    auto g = [&](double e1, double e2) -> double {
        double acc = 0.0;
        for (int m = 0; m < N; ++m) {
            const double dim = setup.dchi(i, m), dmf = setup.dchi(m, f);
            for (int l1 : setup.signed_labels()) {
                const double w1 = std::norm(setup.V(i, m, l1)) * setup.dos(l1);
                if (w1 == 0.0) continue;
                for (int l2 : setup.signed_labels()) {
                    const double w2 = std::norm(setup.V(m, f, l2)) * setup.dos(l2);
                    if (w2 == 0.0) continue;
                    acc += 2.0 * w1 * w2 * setup.spectral_C(l1, e1 - dim) *
                           (setup.spectral_C(l2, 2.0 * e2 - e1 - dmf) -
                            setup.spectral_C(l2, e2 - dmf));
                }
            }
        }
        return acc;
    };

    Options inner_opts;
    inner_opts.abs_tol = 1e-290;
    inner_opts.rel_tol = 1e-9;
    inner_opts.mass_rel = 1e-10;
    inner_opts.max_intervals = 20000;
    auto outer_f = [&](double e1) -> cplx {
        std::vector<double> br;
        seed_feature(br, 0.0, eta);
        for (int m = 0; m < N; ++m)
            for (int l2 : setup.signed_labels()) {
                seed_feature(br, 0.5 * (setup.mu(l2) + setup.dchi(m, f) + e1), 0.5 * T);
                seed_feature(br, setup.mu(l2) + setup.dchi(m, f), T);
            }
        log_tail_breaks(br, T, wmax);
        auto fin = [&](double e2) -> cplx {
            const double l1v = eta / (e1 * e1 + eta * eta);
            const double l2v = eta / (e2 * e2 + eta * eta);
            return l1v * l2v * g(e1, e2);
        };
        return integrate(fin, -wmax, wmax, br, inner_opts);
    };
    std::vector<double> outer;
    seed_feature(outer, 0.0, eta);
    for (int m = 0; m < N; ++m)
        for (int l1 : setup.signed_labels())
            seed_feature(outer, setup.mu(l1) + setup.dchi(i, m), T);
    log_tail_breaks(outer, T, wmax);
    const cplx val = integrate_scaled(outer_f, -wmax, wmax, outer, 1e-8);
    return val.real() / eta;
}

std::vector<double> default_eta_grid(double T) {
    return {1e-2 * T, 3e-3 * T, 1e-3 * T, 3e-4 * T, 1e-4 * T};
}

cplx richardson_eta_limit(const std::function<cplx(double)>& fn,
                          const std::vector<double>& etas) {
    if (etas.size() < 3) throw ValidationError("richardson_eta_limit: need >= 3 eta values");
    std::vector<double> e(etas);
    std::sort(e.begin(), e.end());
    const double e0 = e[0], e1 = e[1], e2 = e[2];
    const cplx f0 = fn(e0), f1 = fn(e1), f2 = fn(e2);
    // quadratic Lagrange extrapolation to eta = 0
    const double w0 = e1 * e2 / ((e1 - e0) * (e2 - e0));
    const double w1 = e0 * e2 / ((e0 - e1) * (e2 - e1));
    const double w2 = e0 * e1 / ((e0 - e2) * (e1 - e2));
    return w0 * f0 + w1 * f1 + w2 * f2;
}

EtaSeriesFit eta_scaling_fit(const std::function<double(double)>& evaluator,
                             const std::vector<double>& etas) {
    EtaSeriesFit fit;
    fit.etas = etas;
    std::sort(fit.etas.begin(), fit.etas.end(), std::greater<>());
    for (double e : fit.etas) fit.values.push_back(evaluator(e));

    const size_t n = fit.etas.size();
    if (n < 2) throw ValidationError("eta_scaling_fit: need >= 2 eta values");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t k = 0; k < n; ++k) {
        const double x = std::log(fit.etas[k]);
        const double y = std::log(std::max(std::abs(fit.values[k]), 1e-300));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double denom = n * sxx - sx * sx;
    fit.exponent = (n * sxy - sx * sy) / denom;
    const double logc = (sy - fit.exponent * sx) / n;

    // Uncentered R^2 of the fitted power law in linear space.
    double ss_res = 0.0, ss_tot = 0.0;
    for (size_t k = 0; k < n; ++k) {
        const double pred = std::exp(logc + fit.exponent * std::log(fit.etas[k]));
        const double v = std::abs(fit.values[k]);
        ss_res += (v - pred) * (v - pred);
        ss_tot += v * v;
    }
    fit.r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 0.0;
    return fit;
}

} // namespace stcl::oracle
