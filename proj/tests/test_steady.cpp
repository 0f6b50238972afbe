#include <doctest.h>

#include <cmath>
#include <random>

#include "errors.hpp"
#include "model.hpp"
#include "randsetup.hpp"
#include "rates2.hpp"
#include "rates4.hpp"
#include "specfun.hpp"
#include "steady.hpp"

using namespace stcl;
using specfun::cplx;

namespace {
constexpr double PI = 3.141592653589793238462643383279503;

// Stationary distribution of a rate matrix by the Markov-chain tree
// theorem: P_i proportional to the (i,i) cofactor of the generator. Small
// and completely independent of the production solver.
std::vector<double> tree_theorem_p0(const rates2::RateMatrix& s2) {
    const int n = s2.n;
    std::vector<double> p(static_cast<size_t>(n));
    for (int drop = 0; drop < n; ++drop) {
        // minor of s2^T with row/col `drop` removed
        std::vector<double> m;
        for (int r = 0; r < n; ++r) {
            if (r == drop) continue;
            for (int c = 0; c < n; ++c) {
                if (c == drop) continue;
                m.push_back(s2.at(c, r));
            }
        }
        const int k = n - 1;
        // determinant by Gaussian elimination
        double det = 1.0;
        for (int col = 0; col < k; ++col) {
            int piv = col;
            for (int r = col + 1; r < k; ++r)
                if (std::abs(m[static_cast<size_t>(r) * k + col]) >
                    std::abs(m[static_cast<size_t>(piv) * k + col]))
                    piv = r;
            if (piv != col) {
                for (int c = 0; c < k; ++c)
                    std::swap(m[static_cast<size_t>(col) * k + c], m[static_cast<size_t>(piv) * k + c]);
                det = -det;
            }
            det *= m[static_cast<size_t>(col) * k + col];
            if (det == 0.0) break;
            for (int r = col + 1; r < k; ++r) {
                const double f = m[static_cast<size_t>(r) * k + col] / m[static_cast<size_t>(col) * k + col];
                for (int c = col; c < k; ++c)
                    m[static_cast<size_t>(r) * k + c] -= f * m[static_cast<size_t>(col) * k + c];
            }
        }
        p[static_cast<size_t>(drop)] = std::abs(det);
    }
    double sum = 0.0;
    for (double v : p) sum += v;
    for (double& v : p) v /= sum;
    return p;
}
} // namespace

TEST_CASE("equilibrium occupation of the resonant level") {
    const double T = 1.0, eps0 = 1.3;
    auto s = model::resonant_level(eps0, PI, 0.0, T, 1e6);
    auto p0 = steady::solve_order0(rates2::s2_matrix(s));
    CHECK(p0[1] == doctest::Approx(specfun::fermi(eps0, T)).epsilon(1e-14));
    CHECK(p0[0] + p0[1] == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("symmetric two-state rates give the uniform distribution") {
    rates2::RateMatrix m;
    m.n = 2;
    m.a = {-0.7, 0.7, 0.7, -0.7};
    auto p = steady::solve_order0(m);
    CHECK(p[0] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(p[1] == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("random ergodic matrices match the tree-theorem oracle") {
    std::mt19937_64 rng(112233);
    for (int k = 0; k < 10; ++k) {
        auto s = randsetup::general(rng, 3, 2);
        auto m = rates2::s2_matrix(s);
        auto p = steady::solve_order0(m);
        auto oracle = tree_theorem_p0(m);
        for (int i = 0; i < 3; ++i) CHECK(std::abs(p[static_cast<size_t>(i)] - oracle[static_cast<size_t>(i)]) < 1e-12);
    }
}

TEST_CASE("disconnected blocks raise an ergodicity error naming them") {
    rates2::RateMatrix m;
    m.n = 4;
    m.a.assign(16, 0.0);
    m.at(0, 1) = 1.0;
    m.at(1, 0) = 2.0;
    m.at(2, 3) = 0.5;
    m.at(3, 2) = 0.25;
    for (int i = 0; i < 4; ++i) {
        double row = 0.0;
        for (int f = 0; f < 4; ++f)
            if (f != i) row += m.at(i, f);
        m.at(i, i) = -row;
    }
    try {
        steady::solve_order0(m);
        FAIL("expected NumericError");
    } catch (const NumericError& e) {
        const std::string w = e.what();
        CHECK(w.find("{0,1}") != std::string::npos);
        CHECK(w.find("{2,3}") != std::string::npos);
    }
}

TEST_CASE("order-2 correction of the resonant level") {
    const double T = 1.0, gamma0 = PI;
    for (double eps0 : {-2.0, 0.7, 4.0}) {
        auto s = model::resonant_level(eps0, gamma0, 0.0, T, 1e6);
        auto s2 = rates2::s2_matrix(s);
        auto b4 = rates4::s4_matrix(s);
        auto p0 = steady::solve_order0(s2);
        auto p2 = steady::solve_order2(s2, b4.s4, p0);
        const double expect = gamma0 / (4.0 * PI * PI * T) *
                              specfun::trigamma(cplx(0.5, -eps0 / (2.0 * PI * T))).imag();
        CHECK(p2[1] == doctest::Approx(expect).epsilon(1e-12));
        CHECK(std::abs(p2[0] + p2[1]) < 1e-14);  // zero-sum constraint
    }
}

TEST_CASE("order-2 correction vanishes cases") {
    const double T = 1.0;
    auto s = model::resonant_level(0.0, PI, 0.0, T, 1e6);
    auto s2 = rates2::s2_matrix(s);
    auto b4 = rates4::s4_matrix(s);
    auto p0 = steady::solve_order0(s2);
    auto p2 = steady::solve_order2(s2, b4.s4, p0);
    CHECK(std::abs(p2[0]) < 1e-14);
    CHECK(std::abs(p2[1]) < 1e-14);

    rates2::RateMatrix zero;
    zero.order = 4;
    zero.n = 2;
    zero.a.assign(4, 0.0);
    auto p2z = steady::solve_order2(s2, zero, p0);
    CHECK(p2z[0] == 0.0);
    CHECK(p2z[1] == 0.0);
}

TEST_CASE("equilibrium distribution is Gibbs") {
    std::mt19937_64 rng(445566);
    auto s = randsetup::general(rng, 4, 2, /*mu_zero=*/true);
    auto p0 = steady::solve_order0(rates2::s2_matrix(s));
    double z = 0.0;
    for (int n = 0; n < 4; ++n) z += std::exp(-s.chi(n) / s.temperature());
    for (int n = 0; n < 4; ++n) {
        const double gibbs = std::exp(-s.chi(n) / s.temperature()) / z;
        CHECK(std::abs(p0[static_cast<size_t>(n)] - gibbs) < 1e-10);
    }
}
