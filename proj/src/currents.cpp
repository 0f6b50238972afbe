#include "currents.hpp"

#include "errors.hpp"
#include "rates4.hpp"

namespace stcl::currents {

int filter_weight(int lambda, std::span<const int> assignment) {
    int w = 0;
    for (int ls : assignment) {
        if (ls == -lambda) ++w;
        if (ls == lambda) --w;
    }
    return w;
}

CurrentRateMatrix current_rates_2(const model::Setup& setup, int lambda) {
    if (!setup.has_label(lambda)) throw ValidationError("unknown reservoir label");
    const int N = setup.n_states();
    CurrentRateMatrix m;
    m.order = 2;
    m.n = N;
    m.a.assign(static_cast<size_t>(N) * N, 0.0);
    for (int i = 0; i < N; ++i)
        for (int f = 0; f < N; ++f) {
            // weights: +1 for the conjugate label, -1 for the label itself
            m.at(i, f) = rates2::s11_constrained(setup, i, f, -lambda) -
                         rates2::s11_constrained(setup, i, f, lambda);
        }
    return m;
}

CurrentRateMatrix current_rates_4(const model::Setup& setup, int lambda) {
    if (!setup.has_label(lambda)) throw ValidationError("unknown reservoir label");
    const int N = setup.n_states();
    CurrentRateMatrix m;
    m.order = 4;
    m.n = N;
    m.a.assign(static_cast<size_t>(N) * N, 0.0);
    for (int i = 0; i < N; ++i) {
        for (int f = 0; f < N; ++f) {
            std::complex<double> s22 = 0.0;
            for (int l1 : setup.signed_labels()) {
                for (int l2 : setup.signed_labels()) {
                    const int pair[2] = {l1, l2};
                    const int w = filter_weight(lambda, pair);
                    if (w == 0) continue;
                    s22 += static_cast<double>(w) *
                           (rates4::s22a_constrained(setup, i, f, l1, l2) +
                            rates4::s22b_constrained(setup, i, f, l1, l2));
                }
            }
            std::complex<double> s31 = 0.0;
            for (int l1 : setup.signed_labels()) {
                const int single[1] = {l1};
                const int w = filter_weight(lambda, single);
                if (w == 0) continue;
                s31 += static_cast<double>(w) * rates4::s31_constrained(setup, i, f, l1);
            }
            m.at(i, f) = s22.real() + 2.0 * s31.real();
        }
    }
    return m;
}

CurrentEntry current(const model::Setup& setup, int lambda,
                     const steady::SteadyStateExpansion& exp) {
    const int N = setup.n_states();
    if (static_cast<int>(exp.p0.size()) != N || static_cast<int>(exp.p2.size()) != N)
        throw ValidationError("current: expansion does not match setup");
    const double q = setup.charge(lambda);
    const CurrentRateMatrix m2 = current_rates_2(setup, lambda);
    const CurrentRateMatrix m4 = current_rates_4(setup, lambda);

    CurrentEntry e;
    e.lambda = lambda;
    for (int n = 0; n < N; ++n) {
        for (int f = 0; f < N; ++f) {
            e.i2 += q * m2.at(n, f) * exp.p0[static_cast<size_t>(n)];
            e.i4_sequential += q * m2.at(n, f) * exp.p2[static_cast<size_t>(n)];
        }
    }

    // Channel breakdown of the order-4 rate part.
    for (int n = 0; n < N; ++n) {
        for (int f = 0; f < N; ++f) {
            std::complex<double> s22 = 0.0;
            for (int l1 : setup.signed_labels()) {
                for (int l2 : setup.signed_labels()) {
                    const int pair[2] = {l1, l2};
                    const int w = filter_weight(lambda, pair);
                    if (w == 0) continue;
                    s22 += static_cast<double>(w) *
                           (rates4::s22a_constrained(setup, n, f, l1, l2) +
                            rates4::s22b_constrained(setup, n, f, l1, l2));
                }
            }
            e.i4_cotunnel += q * s22.real() * exp.p0[static_cast<size_t>(n)];
            e.i4_virtual += q * (m4.at(n, f) - s22.real()) * exp.p0[static_cast<size_t>(n)];
        }
    }
    e.i4 = e.i4_sequential + e.i4_cotunnel + e.i4_virtual;
    return e;
}

std::vector<CurrentEntry> current_report(const model::Setup& setup,
                                         const steady::SteadyStateExpansion& exp) {
    std::vector<CurrentEntry> out;
    for (const auto& r : setup.reservoirs()) out.push_back(current(setup, r.label, exp));
    return out;
}

} // namespace stcl::currents
