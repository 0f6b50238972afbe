#include "verify.hpp"

#include <chrono>
#include <cmath>
#include <complex>
#include <functional>
#include <random>
#include <sstream>

#include "bench_exact.hpp"
#include "currents.hpp"
#include "errors.hpp"
#include "model.hpp"
#include "oracle.hpp"
#include "randsetup.hpp"
#include "rates2.hpp"
#include "rates4.hpp"
#include "specfun.hpp"
#include "steady.hpp"

namespace stcl::verify {

namespace {

constexpr double PI = 3.141592653589793238462643383279503;
using specfun::cplx;

struct Check {
    bool pass = true;
    double worst = 0.0;
    std::string note;

    void expect(double measured, double bound) {
        worst = std::max(worst, measured);
        if (!(measured <= bound)) pass = false;
    }
};

double rel_diff(double a, double b) {
    const double scale = std::max(std::abs(a), std::abs(b));
    return scale > 0.0 ? std::abs(a - b) / scale : 0.0;
}

// --- criterion 1: golden-rule benchmark ---------------------------------

CriterionResult criterion1() {
    CriterionResult r{1, "golden-rule benchmark (S2, P0)", false, 0.0, ""};
    Check c;
    const double T = 1.0, gamma0 = PI;
    for (double e0 : {-10.0, -1.0, 0.0, 1.0, 10.0}) {
        auto setup = model::resonant_level(e0, gamma0, 0.0, T, 1e6);
        auto s2 = rates2::s2_matrix(setup);
        c.expect(rel_diff(s2.at(0, 1), gamma0 * specfun::fermi(e0, T)), 1e-12);
        auto p0 = steady::solve_order0(s2);
        c.expect(rel_diff(p0[1], specfun::fermi(e0, T)), 1e-12);
    }
    r.pass = c.pass;
    std::ostringstream os;
    os << "worst rel " << c.worst << " (bound 1e-12)";
    r.detail = os.str();
    return r;
}

// --- criterion 2: fourth-order occupation -------------------------------

CriterionResult criterion2() {
    CriterionResult r{2, "fourth-order occupation (P2)", false, 0.0, ""};
    Check c_formula, c_taylor;
    const double T = 1.0, gamma0 = PI;
    for (int k = 0; k < 41; ++k) {
        const double e0 = -10.0 + 0.5 * k;
        auto setup = model::resonant_level(e0, gamma0, 0.0, T, 1e6);
        auto s2 = rates2::s2_matrix(setup);
        auto b4 = rates4::s4_matrix(setup);
        auto p0 = steady::solve_order0(s2);
        auto p2 = steady::solve_order2(s2, b4.s4, p0);

        const double formula = gamma0 / (4.0 * PI * PI * T) *
                               specfun::trigamma(cplx(0.5, -e0 / (2.0 * PI * T))).imag();
        c_formula.expect(rel_diff(p2[1], formula), 1e-10);

        auto occ = [&](double g) {
            return bench_exact::exact_occupation({e0, g, 0.0, T});
        };
        const auto coef = bench_exact::taylor_in_gamma0(occ, 1, T);
        c_taylor.expect(rel_diff(p2[1], coef[1] * gamma0), 1e-7);
    }
    r.pass = c_formula.pass && c_taylor.pass;
    std::ostringstream os;
    os << "worst rel vs trigamma " << c_formula.worst << " (1e-10), vs Taylor "
       << c_taylor.worst << " (1e-7)";
    r.detail = os.str();
    return r;
}

// --- criterion 3: second-order current ----------------------------------

CriterionResult criterion3() {
    CriterionResult r{3, "second-order current", false, 0.0, ""};
    Check c;
    const double T = 1.0, gamma0 = PI, mu = 6.0;
    for (int k = 0; k < 41; ++k) {
        const double e0 = -10.0 + 0.5 * k;
        auto setup = model::resonant_level(e0, gamma0, mu, T, 1e6);
        auto s2 = rates2::s2_matrix(setup);
        auto p0 = steady::solve_order0(s2);
        steady::SteadyStateExpansion exp{p0, std::vector<double>(p0.size(), 0.0)};
        auto entry = currents::current(setup, 2, exp);
        const double expect = gamma0 / 4.0 * (specfun::fermi(e0 - mu / 2, T) -
                                              specfun::fermi(e0 + mu / 2, T));
        c.expect(rel_diff(entry.i2, expect), 1e-12);
    }
    r.pass = c.pass;
    std::ostringstream os;
    os << "worst rel " << c.worst << " (bound 1e-12)";
    r.detail = os.str();
    return r;
}

// --- criterion 4: fourth-order current ----------------------------------

CriterionResult criterion4() {
    CriterionResult r{4, "fourth-order current vs exact Taylor", false, 0.0, ""};
    Check c;
    const double T = 1.0, gamma0 = PI, mu = 6.0;
    for (int k = 0; k < 41; ++k) {
        const double e0 = -10.0 + 0.5 * k;
        auto setup = model::resonant_level(e0, gamma0, mu, T, 1e6);
        auto s2 = rates2::s2_matrix(setup);
        auto b4 = rates4::s4_matrix(setup);
        auto p0 = steady::solve_order0(s2);
        auto p2 = steady::solve_order2(s2, b4.s4, p0);
        auto entry = currents::current(setup, 2, {p0, p2});

        auto cur = [&](double g) {
            return bench_exact::exact_current({e0, g, mu, T});
        };
        const auto coef = bench_exact::taylor_in_gamma0(cur, 2, T);
        const double trunc = coef[1] * gamma0 + coef[2] * gamma0 * gamma0;
        c.expect(rel_diff(entry.i2 + entry.i4, trunc), 1e-6);
    }
    r.pass = c.pass;
    std::ostringstream os;
    os << "worst rel " << c.worst << " (bound 1e-6)";
    r.detail = os.str();
    return r;
}

// --- criterion 5: eta-scaling exponents ---------------------------------

CriterionResult criterion5(bool quick) {
    CriterionResult r{5, "eta-scaling exponents", false, 0.0, ""};
    std::mt19937_64 rng(20240517);
    auto setup = randsetup::three_state(rng, 2);
    const int i = 1, f = 2;
    auto grid = oracle::default_eta_grid(setup.temperature());
    if (quick) grid = {1e-2, 3e-3, 1e-3};

    auto fit_r22a = oracle::eta_scaling_fit(
        [&](double eta) { return std::abs(oracle::eta_r22a(setup, i, f, eta)); }, grid);
    auto fit_s22c = oracle::eta_scaling_fit(
        [&](double eta) { return std::abs(oracle::eta_s22c(setup, i, f, eta)); }, grid);
    auto fit_s22a = oracle::eta_scaling_fit(
        [&](double eta) { return std::abs(oracle::eta_s22a(setup, i, f, eta)); }, grid);

    const bool ok_r = std::abs(fit_r22a.exponent + 1.0) <= 0.05 && fit_r22a.r2 > 0.999;
    const bool ok_c = std::abs(fit_s22c.exponent - 1.0) <= 0.05 && fit_s22c.r2 > 0.999;
    const bool ok_a = std::abs(fit_s22a.exponent) <= 0.05 && fit_s22a.r2 > 0.999;
    r.pass = ok_r && ok_c && ok_a;
    std::ostringstream os;
    os << "r22a " << fit_r22a.exponent << " (r2 " << fit_r22a.r2 << "), s22c "
       << fit_s22c.exponent << " (r2 " << fit_s22c.r2 << "), s22a " << fit_s22a.exponent
       << " (r2 " << fit_s22a.r2 << ")";
    r.detail = os.str();
    return r;
}

// --- criterion 6: oracle equivalence ------------------------------------

CriterionResult criterion6(bool quick) {
    CriterionResult r{6, "analytic rates vs finite-eta oracle", false, 0.0, ""};
    Check c;
    std::mt19937_64 rng(891230);
    const int n_setups = quick ? 1 : 3;
    std::ostringstream os;
    for (int s = 0; s < n_setups; ++s) {
        auto setup = randsetup::general(rng, 3, 2, false, 2e6);
        auto grid = oracle::default_eta_grid(setup.temperature());
        const int i = 0, f = 1;

        cplx a_sum = 0.0, b_sum = 0.0, s31_sum = 0.0;
        for (int l1 : setup.signed_labels()) {
            for (int l2 : setup.signed_labels()) {
                a_sum += rates4::s22a_constrained(setup, i, f, l1, l2);
                b_sum += rates4::s22b_constrained(setup, i, f, l1, l2);
            }
            s31_sum += rates4::s31_constrained(setup, i, f, l1);
        }
        const cplx lim_a = oracle::richardson_eta_limit(
            [&](double eta) { return oracle::eta_s22a(setup, i, f, eta); }, grid);
        const cplx lim_b = oracle::richardson_eta_limit(
            [&](double eta) { return oracle::eta_s22b(setup, i, f, eta); }, grid);
        const cplx lim_31 = oracle::richardson_eta_limit(
            [&](double eta) { return oracle::eta_s31(setup, i, f, eta); }, grid);

        const double da = std::abs(lim_a - a_sum) / std::abs(a_sum);
        const double db = std::abs(lim_b - b_sum) / std::abs(b_sum);
        const double d31 = std::abs(lim_31 - s31_sum) / std::abs(s31_sum);
        c.expect(da, 1e-4);
        c.expect(db, 1e-4);
        c.expect(d31, 1e-4);
        os << "setup " << s << ": s22a " << da << ", s22b " << db << ", s31 " << d31 << "; ";
    }
    r.pass = c.pass;
    r.detail = os.str() + "(bound 1e-4)";
    return r;
}

// --- criterion 7: property suites ---------------------------------------

CriterionResult criterion7() {
    CriterionResult r{7, "property suites", false, 0.0, ""};
    std::ostringstream os;
    bool ok = true;

    // (a) row sums on 50 random setups
    {
        std::mt19937_64 rng(777001);
        double worst = 0.0;
        for (int k = 0; k < 50; ++k) {
            const int n = 2 + static_cast<int>(rng() % 3);
            auto setup = randsetup::general(rng, n, 1 + static_cast<int>(rng() % 2));
            auto s2 = rates2::s2_matrix(setup);
            auto b4 = rates4::s4_matrix(setup);
            worst = std::max(worst, s2.max_row_sum_abs() / std::max(s2.max_abs(), 1e-300));
            worst = std::max(worst, b4.s4.max_row_sum_abs() / std::max(b4.s4.max_abs(), 1e-300));
        }
        ok = ok && worst <= 1e-12;
        os << "(a) row sums " << worst << "; ";
    }
    // (b) detailed balance at equilibrium
    {
        std::mt19937_64 rng(777002);
        double worst = 0.0;
        for (int k = 0; k < 10; ++k) {
            auto setup = randsetup::general(rng, 3, 2, /*mu_zero=*/true);
            auto s2 = rates2::s2_matrix(setup);
            for (int i = 0; i < 3; ++i)
                for (int f = 0; f < 3; ++f) {
                    if (i == f) continue;
                    if (s2.at(i, f) < 1e-300 || s2.at(f, i) < 1e-300) continue;
                    const double lhs = s2.at(i, f) / s2.at(f, i);
                    const double rhs = std::exp(-setup.dchi(f, i) / setup.temperature());
                    worst = std::max(worst, rel_diff(lhs, rhs));
                }
        }
        ok = ok && worst <= 1e-10;
        os << "(b) detailed balance " << worst << "; ";
    }
    // (c) cutoff doubling on sum-rule setups
    {
        std::mt19937_64 rng(777003);
        double worst = 0.0;
        for (int k = 0; k < 5; ++k) {
            auto setup = randsetup::anderson(rng, 2);
            worst = std::max(worst, rates4::cutoff_doubling_drift(setup));
        }
        ok = ok && worst <= 1e-8;
        os << "(c) cutoff drift " << worst << "; ";
    }
    // (d) per-order current conservation
    {
        std::mt19937_64 rng(777004);
        double worst = 0.0;
        for (int k = 0; k < 5; ++k) {
            auto setup = randsetup::anderson(rng, 2);
            auto s2 = rates2::s2_matrix(setup);
            auto b4 = rates4::s4_matrix(setup);
            auto p0 = steady::solve_order0(s2);
            auto p2 = steady::solve_order2(s2, b4.s4, p0);
            auto rep = currents::current_report(setup, {p0, p2});
            double sum2 = 0.0, sum4 = 0.0, scale = 0.0;
            for (const auto& e : rep) {
                sum2 += e.i2;
                sum4 += e.i4;
                scale = std::max({scale, std::abs(e.i2), std::abs(e.i4)});
            }
            if (scale > 0.0)
                worst = std::max(worst, std::max(std::abs(sum2), std::abs(sum4)) / scale);
        }
        ok = ok && worst <= 1e-11;
        os << "(d) current conservation " << worst << "; ";
    }
    // (e) equilibrium currents vanish
    {
        std::mt19937_64 rng(777005);
        double worst = 0.0;
        for (int k = 0; k < 5; ++k) {
            auto setup = randsetup::general(rng, 3, 2, /*mu_zero=*/true);
            auto s2 = rates2::s2_matrix(setup);
            auto b4 = rates4::s4_matrix(setup);
            auto p0 = steady::solve_order0(s2);
            auto p2 = steady::solve_order2(s2, b4.s4, p0);
            auto rep = currents::current_report(setup, {p0, p2});
            const double scale = std::max(s2.max_abs(), b4.s4.max_abs());
            for (const auto& e : rep)
                worst = std::max(worst, std::max(std::abs(e.i2), std::abs(e.i4)) / scale);
        }
        ok = ok && worst <= 1e-12;
        os << "(e) equilibrium currents " << worst << "; ";
    }
    // (f) i0 quadrature vs closed form
    {
        std::mt19937_64 rng(777006);
        std::uniform_real_distribution<double> mu(-5.0, 5.0);
        std::uniform_real_distribution<double> lg(-3.0, 0.0);
        const double T = 1.0;
        double worst = 0.0;
        for (int k = 0; k < 100; ++k) {
            const double m1 = mu(rng), m2 = mu(rng);
            const double g = std::pow(10.0, lg(rng));
            const cplx quad = oracle::i0_quadrature(m1, m2, g, T);
            // closed form: n_B(m2-m1) [psi(1/2+(g+i m2)/2piT) - psi(1/2+(g+i m1)/2piT)]
            cplx closed;
            const double x = m2 - m1;
            const cplx pa = specfun::digamma(cplx(0.5 + g / (2 * PI * T), m1 / (2 * PI * T)));
            const cplx pb = specfun::digamma(cplx(0.5 + g / (2 * PI * T), m2 / (2 * PI * T)));
            if (std::abs(x) > 1e-9 * T) {
                closed = specfun::bose(x, T) * (pb - pa);
            } else {
                closed = specfun::eps_times_bose(x, T) * cplx(0.0, 1.0 / (2 * PI * T)) *
                         specfun::trigamma(cplx(0.5 + g / (2 * PI * T), m1 / (2 * PI * T)));
            }
            worst = std::max(worst, std::abs(quad - closed));
        }
        ok = ok && worst <= 1e-8;
        os << "(f) i0 vs digamma " << worst;
    }

    r.pass = ok;
    r.detail = os.str();
    return r;
}

// --- criterion 8: special-function invariants ---------------------------

CriterionResult criterion8() {
    CriterionResult r{8, "digamma/trigamma invariants", false, 0.0, ""};
    std::mt19937_64 rng(424242);
    std::uniform_real_distribution<double> re(-50.0, 50.0);
    std::uniform_real_distribution<double> im(-50.0, 50.0);
    double worst_rec = 0.0, worst_fd = 0.0;
    int count = 0;
    while (count < 10000) {
        cplx z(re(rng), im(rng));
        if (std::abs(z.imag()) < 0.5 && z.real() < 0.5) continue;  // pole strip
        ++count;
        const cplx lhs = specfun::digamma(z + 1.0) - specfun::digamma(z);
        worst_rec = std::max(worst_rec, std::abs(lhs - 1.0 / z) / std::abs(1.0 / z));
        if (count % 10 == 0) {
            const double h = 1e-5;
            const cplx fd = (specfun::digamma(z + h) - specfun::digamma(z - h)) / (2.0 * h);
            worst_fd = std::max(worst_fd, std::abs(specfun::trigamma(z) - fd));
        }
    }
    r.pass = worst_rec <= 1e-12 && worst_fd <= 1e-8;
    std::ostringstream os;
    os << "recurrence " << worst_rec << " (1e-12), trigamma FD " << worst_fd << " (1e-8)";
    r.detail = os.str();
    return r;
}

} // namespace

std::vector<CriterionResult> run(int id, bool quick) {
    std::vector<CriterionResult> out;
    auto runner = [&](int k, double budget_s, const std::function<CriterionResult()>& fn) {
        if (id != 0 && id != k) return;
        const auto t0 = std::chrono::steady_clock::now();
        CriterionResult r;
        try {
            r = fn();
        } catch (const std::exception& e) {
            r.id = k;
            r.name = "criterion " + std::to_string(k);
            r.pass = false;
            r.detail = std::string("exception: ") + e.what();
        }
        r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (budget_s > 0.0 && r.seconds > budget_s) {
            r.pass = false;
            r.detail += " [over the " + std::to_string(budget_s) + " s budget]";
        }
        out.push_back(r);
    };
    runner(1, 1.0, criterion1);
    runner(2, 10.0, criterion2);
    runner(3, 1.0, criterion3);
    runner(4, 60.0, criterion4);
    runner(5, 300.0, [&] { return criterion5(quick); });
    runner(6, 600.0, [&] { return criterion6(quick); });
    runner(7, 0.0, criterion7);
    runner(8, 5.0, criterion8);
    return out;
}

std::string format_table(const std::vector<CriterionResult>& results) {
    std::ostringstream os;
    for (const auto& r : results) {
        os << "criterion " << r.id << " " << (r.pass ? "PASS" : "FAIL") << "  " << r.name
           << "  (" << r.seconds << " s)  " << r.detail << "\n";
    }
    return os.str();
}

bool all_passed(const std::vector<CriterionResult>& results) {
    for (const auto& r : results)
        if (!r.pass) return false;
    return !results.empty();
}

} // namespace stcl::verify
