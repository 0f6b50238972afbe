#include "rates2.hpp"

#include <cmath>

#include "errors.hpp"

namespace stcl::rates2 {

namespace {
constexpr double PI = 3.141592653589793238462643383279503;
}

double RateMatrix::max_abs() const {
    double m = 0.0;
    for (double v : a) m = std::max(m, std::abs(v));
    return m;
}

double RateMatrix::max_row_sum_abs() const {
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
        double s = 0.0;
        for (int f = 0; f < n; ++f) s += at(i, f);
        worst = std::max(worst, std::abs(s));
    }
    return worst;
}

double s11_constrained(const model::Setup& setup, int i, int f, int lambda1) {
    if (i < 0 || f < 0 || i >= setup.n_states() || f >= setup.n_states())
        throw ValidationError("s11_constrained: state index out of range");
    const double v2 = std::norm(setup.V(i, f, lambda1));
    if (v2 == 0.0) return 0.0;
    return 2.0 * PI * v2 * setup.dos(lambda1) * setup.spectral_C(lambda1, setup.dchi(f, i));
}

RateMatrix s2_matrix(const model::Setup& setup) {
    const int N = setup.n_states();
    RateMatrix m;
    m.order = 2;
    m.n = N;
    m.a.assign(static_cast<size_t>(N) * N, 0.0);
    for (int i = 0; i < N; ++i) {
        for (int f = 0; f < N; ++f) {
            if (i == f) continue;
            double sum = 0.0;
            for (int lam : setup.signed_labels()) sum += s11_constrained(setup, i, f, lam);
            m.at(i, f) = sum;
        }
    }
    for (int i = 0; i < N; ++i) {
        double row = 0.0;
        for (int f = 0; f < N; ++f)
            if (f != i) row += m.at(i, f);
        m.at(i, i) = -row;
    }
    return m;
}

} // namespace stcl::rates2
