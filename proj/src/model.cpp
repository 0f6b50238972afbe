#include "model.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "errors.hpp"
#include "specfun.hpp"

namespace stcl::model {

namespace {

constexpr double PI = 3.141592653589793238462643383279503;

bool finite(double x) { return std::isfinite(x); }

} // namespace

Setup::Setup(double temperature, std::vector<double> energies,
             std::vector<std::string> state_labels, std::vector<Reservoir> reservoirs,
             std::vector<CouplingEntry> coupling, Tolerances tol)
    : temperature_(temperature),
      energies_(std::move(energies)),
      state_labels_(std::move(state_labels)),
      reservoirs_(std::move(reservoirs)),
      coupling_entries_(std::move(coupling)),
      tol_(tol) {
    validate();
}

int Setup::reservoir_index(int lambda) const {
    const int r = std::abs(lambda);
    for (size_t k = 0; k < reservoirs_.size(); ++k)
        if (reservoirs_[k].label == r) return static_cast<int>(k);
    return -1;
}

bool Setup::has_label(int lambda) const {
    return lambda != 0 && reservoir_index(lambda) >= 0;
}

double Setup::mu(int lambda) const {
    const int k = reservoir_index(lambda);
    if (k < 0) throw ValidationError("unknown reservoir label " + std::to_string(lambda));
    return lambda > 0 ? reservoirs_[static_cast<size_t>(k)].mu
                      : -reservoirs_[static_cast<size_t>(k)].mu;
}

double Setup::dos(int lambda) const {
    const int k = reservoir_index(lambda);
    if (k < 0) throw ValidationError("unknown reservoir label " + std::to_string(lambda));
    return reservoirs_[static_cast<size_t>(k)].dos;
}

double Setup::cutoff(int lambda) const {
    const int k = reservoir_index(lambda);
    if (k < 0) throw ValidationError("unknown reservoir label " + std::to_string(lambda));
    return reservoirs_[static_cast<size_t>(k)].cutoff;
}

double Setup::charge(int lambda) const {
    const int k = reservoir_index(lambda);
    if (k < 0) throw ValidationError("unknown reservoir label " + std::to_string(lambda));
    return reservoirs_[static_cast<size_t>(k)].charge;
}

size_t Setup::vindex(int n, int m, int lambda_slot) const {
    const size_t L = signed_labels_.size();
    const size_t N = energies_.size();
    return (static_cast<size_t>(n) * N + static_cast<size_t>(m)) * L +
           static_cast<size_t>(lambda_slot);
}

cplx Setup::V(int n, int m, int lambda) const {
    if (n < 0 || m < 0 || n >= n_states() || m >= n_states())
        throw ValidationError("state index out of range");
    for (size_t s = 0; s < signed_labels_.size(); ++s)
        if (signed_labels_[s] == lambda) return vtable_[vindex(n, m, static_cast<int>(s))];
    throw ValidationError("unknown reservoir label " + std::to_string(lambda));
}

double Setup::spectral_C(int lambda, double eps) const {
    return specfun::fermi(eps - mu(lambda), temperature_);
}

void Setup::validate() {
    if (!(temperature_ > 0.0) || !finite(temperature_))
        throw ValidationError("temperature must be finite and positive");
    const int N = n_states();
    if (N < 2) throw ValidationError("need at least 2 system states");
    for (double e : energies_)
        if (!finite(e)) throw ValidationError("non-finite system energy");

    if (state_labels_.empty()) {
        for (int n = 0; n < N; ++n) state_labels_.push_back("s" + std::to_string(n));
    }
    if (static_cast<int>(state_labels_.size()) != N)
        throw ValidationError("state label count does not match energies");

    if (reservoirs_.empty()) throw ValidationError("need at least one reservoir");
    double max_scale = temperature_;
    for (double e : energies_) max_scale = std::max(max_scale, std::abs(e));
    std::vector<int> seen;
    for (const auto& r : reservoirs_) {
        if (r.label <= 0) throw ValidationError("reservoir labels must be positive");
        if (std::find(seen.begin(), seen.end(), r.label) != seen.end())
            throw ValidationError("duplicate reservoir label " + std::to_string(r.label));
        seen.push_back(r.label);
        if (!(r.dos > 0.0) || !finite(r.dos))
            throw ValidationError("reservoir " + std::to_string(r.label) + ": dos must be > 0");
        if (!finite(r.mu)) throw ValidationError("non-finite chemical potential");
        if (r.statistics != "fermion")
            throw ValidationError("reservoir " + std::to_string(r.label) +
                                  ": only fermionic statistics are supported");
        max_scale = std::max(max_scale, std::abs(r.mu));
    }
    for (const auto& r : reservoirs_) {
        const double required = tol_.cutoff_factor * max_scale;
        if (!(r.cutoff >= required)) {
            std::ostringstream msg;
            msg << "reservoir " << r.label << ": cutoff " << r.cutoff
                << " below " << tol_.cutoff_factor << " x largest setup scale "
                << max_scale << " (need >= " << required << ")";
            throw ValidationError(msg.str());
        }
    }

    signed_labels_.clear();
    for (const auto& r : reservoirs_) {
        signed_labels_.push_back(r.label);
        signed_labels_.push_back(-r.label);
    }

    // Dense amplitude table; entries merge with exact-duplicate detection.
    const size_t L = signed_labels_.size();
    vtable_.assign(static_cast<size_t>(N) * N * L, cplx(0.0, 0.0));
    std::map<std::tuple<int, int, int>, cplx> given;
    for (const auto& e : coupling_entries_) {
        if (e.n < 0 || e.n >= N || e.m < 0 || e.m >= N)
            throw ValidationError("coupling entry with state index out of range");
        if (!has_label(e.lambda))
            throw ValidationError("coupling entry references unknown reservoir label " +
                                  std::to_string(e.lambda));
        if (!finite(e.v.real()) || !finite(e.v.imag()))
            throw ValidationError("non-finite coupling amplitude");
        auto key = std::make_tuple(e.n, e.m, e.lambda);
        auto it = given.find(key);
        if (it != given.end() && it->second != e.v)
            throw ValidationError("conflicting duplicate coupling entry");
        given[key] = e.v;
    }

    // Hermiticity: V*(n,m,l) = V(m,n,-l). Missing partners are completed;
    // present ones must match exactly.
    for (const auto& [key, v] : given) {
        auto [n, m, l] = key;
        auto partner = std::make_tuple(m, n, -l);
        auto it = given.find(partner);
        if (it == given.end()) continue;
        if (it->second != std::conj(v)) {
            std::ostringstream msg;
            msg << "Hermiticity violation: V(" << n << "," << m << "," << l
                << ") = " << v.real() << (v.imag() < 0 ? "" : "+") << v.imag()
                << "i but V(" << m << "," << n << "," << -l << ") = "
                << it->second.real() << (it->second.imag() < 0 ? "" : "+")
                << it->second.imag() << "i";
            throw ValidationError(msg.str());
        }
    }
    std::map<std::tuple<int, int, int>, cplx> complete = given;
    for (const auto& [key, v] : given) {
        auto [n, m, l] = key;
        auto partner = std::make_tuple(m, n, -l);
        if (complete.find(partner) == complete.end()) complete[partner] = std::conj(v);
    }

    coupling_entries_.clear();
    for (const auto& [key, v] : complete) {
        auto [n, m, l] = key;
        coupling_entries_.push_back({n, m, l, v});
        for (size_t s = 0; s < L; ++s)
            if (signed_labels_[s] == l) vtable_[vindex(n, m, static_cast<int>(s))] = v;
    }

    // Degenerate levels are rejected when a nonzero two-step amplitude
    // chain connects them: those pairs produce genuinely singular
    // 1/(chi_a - chi_b) denominators in the fourth-order rates. Pairs
    // whose chains all vanish (the resonant level at zero detuning) never
    // form that denominator and stay valid.
    const double degen_gap = tol_.degen_rel * temperature_;
    for (int a = 0; a < N; ++a) {
        for (int b = a + 1; b < N; ++b) {
            if (std::abs(dchi(a, b)) >= degen_gap) continue;
            bool dangerous = false;
            for (int x = 0; x < N && !dangerous; ++x)
                for (int l : signed_labels_)
                    if (V(a, x, l) * V(x, b, -l) != cplx(0.0, 0.0)) {
                        dangerous = true;
                        break;
                    }
            if (dangerous) {
                std::ostringstream msg;
                msg << "degenerate system levels: states (" << a << ", " << b
                    << ") with |chi_a - chi_b| = " << std::abs(dchi(a, b)) << " < "
                    << degen_gap << " are coupled through an intermediate state";
                throw ValidationError(msg.str());
            }
        }
    }
}

Setup Setup::with_scaled_cutoffs(double factor) const {
    std::vector<Reservoir> res = reservoirs_;
    for (auto& r : res) r.cutoff *= factor;
    return Setup(temperature_, energies_, state_labels_, res, coupling_entries_, tol_);
}

Setup resonant_level(double eps0, double gamma0, double mu_bias, double T,
                     double cutoff, Tolerances tol) {
    if (!(gamma0 > 0.0)) throw ValidationError("resonant_level: gamma0 must be > 0");
    if (!(T > 0.0)) throw ValidationError("resonant_level: T must be > 0");
    const double amp = std::sqrt(gamma0 / (2.0 * PI)) / std::sqrt(2.0);  // J/sqrt(2), dos = 1
    std::vector<Reservoir> res = {
        {1, 0.5 * mu_bias, 1.0, cutoff, 1.0},   // left lead
        {2, -0.5 * mu_bias, 1.0, cutoff, 1.0},  // right lead
    };
    std::vector<CouplingEntry> coup;
    for (int lead = 1; lead <= 2; ++lead) {
        coup.push_back({0, 1, lead, cplx(amp, 0.0)});
        coup.push_back({1, 0, -lead, cplx(amp, 0.0)});
    }
    return Setup(T, {0.0, eps0}, {"empty", "occupied"}, res, coup, tol);
}

} // namespace stcl::model
