#include <doctest.h>

#include <cmath>
#include <random>

#include "model.hpp"
#include "oracle.hpp"
#include "randsetup.hpp"
#include "rates4.hpp"
#include "specfun.hpp"

using namespace stcl;
using specfun::cplx;

namespace {
constexpr double PI = 3.141592653589793238462643383279503;
}

TEST_CASE("i0 quadrature against its digamma closed form") {
    const double T = 1.0, m1 = 0.7, m2 = -1.3, g = 0.01;
    const cplx quad = oracle::i0_quadrature(m1, m2, g, T);
    const cplx pa = specfun::digamma(cplx(0.5 + g / (2 * PI * T), m1 / (2 * PI * T)));
    const cplx pb = specfun::digamma(cplx(0.5 + g / (2 * PI * T), m2 / (2 * PI * T)));
    const cplx closed = specfun::bose(m2 - m1, T) * (pb - pa);
    CHECK(std::abs(quad - closed) < 1e-8);
}

TEST_CASE("i0 reflection identity") {
    const double T = 1.0, m1 = 0.9, m2 = 0.2, g = 0.05;
    const cplx lhs = oracle::i0_quadrature(m1, m2, g, T);
    const cplx rhs = -std::conj(oracle::i0_quadrature(-m2, -m1, g, T));
    CHECK(std::abs(lhs - rhs) < 1e-9);
}

TEST_CASE("i0 gamma to zero limit reproduces integral_I") {
    const double T = 1.0, d1 = 0.2, d2 = 1.0, m1 = 0.1, m2 = -0.4;
    const cplx closed = specfun::integral_I(-1, d1, d2, m1, m2, T);
    const cplx q1 = oracle::i0_quadrature(d1 + m1, d2 - m2, 2e-4, T);
    const cplx q2 = oracle::i0_quadrature(d1 + m1, d2 - m2, 1e-4, T);
    CHECK(std::abs(2.0 * q2 - q1 - closed) < 1e-7);
}

TEST_CASE("functional form of the equal-intermediate-state channel") {
    std::mt19937_64 rng(3333);
    auto setup = randsetup::three_state(rng, 2);
    const int i = 1, f = 2;

    // eta * F -> 0 linearly
    std::vector<double> etas = {3e-2, 1e-2, 3e-3, 1e-3};
    auto fit = oracle::eta_scaling_fit(
        [&](double eta) { return std::abs(eta * oracle::f_functional(setup, i, f, eta)); },
        etas);
    CHECK(std::abs(fit.exponent - 1.0) < 0.05);
    CHECK(fit.r2 > 0.999);

    // eta -> 0 limit matches the analytic equal-state part of s22a: lines
    // two and three of the non-crossing channel, i.e. the full channel here
    // because no distinct-state chain survives for this (i, f)
    cplx target = 0.0;
    for (int l1 : setup.signed_labels())
        for (int l2 : setup.signed_labels())
            target += rates4::s22a_constrained(setup, i, f, l1, l2);
    const cplx lim = oracle::richardson_eta_limit(
        [&](double eta) { return cplx(oracle::f_functional(setup, i, f, eta), 0.0); },
        {1e-3, 3e-4, 1e-4});
    CHECK(std::abs(lim - target) < 1e-4 * std::abs(target));
}

TEST_CASE("functional vanishes for zero coupling") {
    std::vector<model::Reservoir> res = {{1, 0.0, 1.0, 1e6, 1.0}};
    std::vector<model::CouplingEntry> coup = {{0, 1, 1, {0.0, 0.0}}};
    auto s = model::Setup(1.0, {0.0, 1.0}, {}, res, coup);
    CHECK(oracle::f_functional(s, 0, 1, 1e-3) == 0.0);
}

TEST_CASE("eta grid and scaling fit basics") {
    auto grid = oracle::default_eta_grid(2.0);
    CHECK(grid.size() == 5);
    CHECK(grid.front() == 2e-2);
    CHECK(grid.back() == 2e-4);
    auto fit = oracle::eta_scaling_fit([](double eta) { return 3.0 * eta * eta; },
                                       {1e-2, 3e-3, 1e-3});
    CHECK(fit.exponent == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(fit.r2 > 0.999999);
}

TEST_CASE("oracle matches analytic fourth-order rates on one random setup") {
    std::mt19937_64 rng(98765);
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
    CHECK(std::abs(lim_a - a_sum) < 1e-5 * std::abs(a_sum));
    const cplx lim_b = oracle::richardson_eta_limit(
        [&](double eta) { return oracle::eta_s22b(setup, i, f, eta); }, grid);
    CHECK(std::abs(lim_b - b_sum) < 1e-4 * std::abs(b_sum));
    const cplx lim_31 = oracle::richardson_eta_limit(
        [&](double eta) { return oracle::eta_s31(setup, i, f, eta); }, grid);
    CHECK(std::abs(lim_31 - s31_sum) < 1e-4 * std::abs(s31_sum));
}

TEST_CASE("eta scaling of the divergent and vanishing channels") {
    std::mt19937_64 rng(24680);
    auto setup = randsetup::three_state(rng, 2);
    auto grid = oracle::default_eta_grid(setup.temperature());
    const int i = 1, f = 2;

    auto fit_r = oracle::eta_scaling_fit(
        [&](double eta) { return std::abs(oracle::eta_r22a(setup, i, f, eta)); }, grid);
    CHECK(std::abs(fit_r.exponent + 1.0) < 0.05);
    CHECK(fit_r.r2 > 0.999);

    auto fit_c = oracle::eta_scaling_fit(
        [&](double eta) { return std::abs(oracle::eta_s22c(setup, i, f, eta)); }, grid);
    CHECK(std::abs(fit_c.exponent - 1.0) < 0.05);
    CHECK(fit_c.r2 > 0.999);
    // the equal-state entry cancels exactly; the distinct-state entry
    // shrinks linearly with eta
    CHECK(std::abs(oracle::eta_s22c(setup, i, i, 1e-3)) == 0.0);
    CHECK(std::abs(oracle::eta_s22c(setup, i, f, 1e-4)) <
          2e-2 * std::abs(oracle::eta_s22c(setup, i, f, 1e-2)) + 1e-30);

    auto fit_a = oracle::eta_scaling_fit(
        [&](double eta) { return std::abs(oracle::eta_s22a(setup, i, f, eta)); }, grid);
    CHECK(std::abs(fit_a.exponent) < 0.05);
    CHECK(fit_a.r2 > 0.999);
}
