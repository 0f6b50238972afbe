#include "randsetup.hpp"

#include <algorithm>
#include <cmath>

namespace stcl::randsetup {

namespace {

using model::cplx;
using model::CouplingEntry;
using model::Reservoir;

std::vector<double> separated_energies(std::mt19937_64& rng, int n) {
    std::uniform_real_distribution<double> gap(0.4, 1.7);
    std::uniform_real_distribution<double> start(-2.0, 0.0);
    std::vector<double> e(static_cast<size_t>(n));
    double x = start(rng);
    for (int k = 0; k < n; ++k) {
        e[static_cast<size_t>(k)] = x;
        x += gap(rng);
    }
    std::shuffle(e.begin(), e.end(), rng);
    return e;
}

std::vector<Reservoir> make_reservoirs(std::mt19937_64& rng, int n, bool mu_zero,
                                       double cutoff) {
    std::uniform_real_distribution<double> mu(-1.5, 1.5);
    std::uniform_real_distribution<double> dos(0.6, 1.6);
    std::vector<Reservoir> out;
    for (int r = 1; r <= n; ++r)
        out.push_back({r, mu_zero ? 0.0 : mu(rng), dos(rng), cutoff, 1.0});
    return out;
}

cplx rand_amp(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> mag(0.08, 0.3);
    std::uniform_real_distribution<double> phase(0.0, 6.283185307179586);
    const double m = mag(rng), p = phase(rng);
    return {m * std::cos(p), m * std::sin(p)};
}

} // namespace

model::Setup general(std::mt19937_64& rng, int n_states, int n_reservoirs,
                     bool mu_zero, double cutoff) {
    auto energies = separated_energies(rng, n_states);
    auto reservoirs = make_reservoirs(rng, n_reservoirs, mu_zero, cutoff);
    std::vector<CouplingEntry> coup;
    for (int n = 0; n < n_states; ++n)
        for (int m = n + 1; m < n_states; ++m)
            for (int r = 1; r <= n_reservoirs; ++r)
                for (int sgn : {+1, -1}) {
                    const cplx v = rand_amp(rng);
                    coup.push_back({n, m, sgn * r, v});
                    coup.push_back({m, n, -sgn * r, std::conj(v)});
                }
    return model::Setup(1.0, energies, {}, reservoirs, coup);
}

model::Setup three_state(std::mt19937_64& rng, int n_reservoirs, double cutoff,
                         bool mu_zero) {
    std::uniform_real_distribution<double> e1(0.5, 1.6);
    std::uniform_real_distribution<double> e2(-1.8, -0.6);
    std::vector<double> energies = {0.0, e1(rng), e2(rng)};
    auto reservoirs = make_reservoirs(rng, n_reservoirs, mu_zero, cutoff);
    std::vector<CouplingEntry> coup;
    for (int level : {1, 2})
        for (int r = 1; r <= n_reservoirs; ++r) {
            // particle created in r when the orbital empties
            const cplx v = rand_amp(rng);
            coup.push_back({0, level, r, v});
            coup.push_back({level, 0, -r, std::conj(v)});
        }
    return model::Setup(1.0, energies, {}, reservoirs, coup);
}

model::Setup anderson(std::mt19937_64& rng, int n_reservoirs, double cutoff,
                      bool mu_zero) {
    // states: bit 0 = mode a, bit 1 = mode b -> |0>, |a>, |b>, |ab>
    std::uniform_real_distribution<double> ea(0.3, 1.2);
    std::uniform_real_distribution<double> eb(-1.4, -0.5);
    std::uniform_real_distribution<double> uu(0.4, 1.3);
    const double epsa = ea(rng), epsb = eb(rng), U = uu(rng);
    std::vector<double> energies = {0.0, epsa, epsb, epsa + epsb + U};
    auto reservoirs = make_reservoirs(rng, n_reservoirs, mu_zero, cutoff);

    // annihilator matrix elements with fermionic ordering signs:
    //   d_a: |a> -> |0>, |ab> -> |b>      d_b: |b> -> |0>, |ab> -> -|a>
    struct Hop { int to, from; double sign; };
    const Hop da[] = {{0, 1, 1.0}, {2, 3, 1.0}};
    const Hop db[] = {{0, 2, 1.0}, {1, 3, -1.0}};

    std::vector<CouplingEntry> coup;
    for (int r = 1; r <= n_reservoirs; ++r) {
        const cplx ta = rand_amp(rng), tb = rand_amp(rng);
        for (const auto& h : da) {
            coup.push_back({h.to, h.from, r, ta * h.sign});
            coup.push_back({h.from, h.to, -r, std::conj(ta * h.sign)});
        }
        for (const auto& h : db) {
            coup.push_back({h.to, h.from, r, tb * h.sign});
            coup.push_back({h.from, h.to, -r, std::conj(tb * h.sign)});
        }
    }
    return model::Setup(1.0, energies, {}, reservoirs, coup);
}

model::Setup ladder(std::mt19937_64& rng, int n_states, int n_reservoirs,
                    double mu_shift, double chi_shift, double cutoff) {
    auto energies = separated_energies(rng, n_states);
    std::sort(energies.begin(), energies.end());
    for (int n = 0; n < n_states; ++n) energies[static_cast<size_t>(n)] += chi_shift * n;
    auto reservoirs = make_reservoirs(rng, n_reservoirs, false, cutoff);
    for (auto& r : reservoirs) r.mu += mu_shift;
    std::vector<CouplingEntry> coup;
    for (int n = 0; n + 1 < n_states; ++n)
        for (int r = 1; r <= n_reservoirs; ++r) {
            // step n+1 -> n hands one particle to reservoir r
            const cplx v = rand_amp(rng);
            coup.push_back({n, n + 1, r, v});
            coup.push_back({n + 1, n, -r, std::conj(v)});
        }
    return model::Setup(1.0, energies, {}, reservoirs, coup);
}

} // namespace stcl::randsetup
