#pragma once

#include <complex>
#include <string>
#include <vector>

#include "tolerances.hpp"

namespace stcl::model {

using cplx = std::complex<double>;

// One physical reservoir. The stored label is positive; the conjugate
// branch -label shares dos, cutoff and charge and has mu(-label) = -mu.
// Only fermionic statistics are accepted in this version; the field exists
// so that the crossing-contraction sign stays data, not code.
struct Reservoir {
    int label = 0;
    double mu = 0.0;
    double dos = 1.0;     // energy-independent density-of-states scale
    double cutoff = 0.0;  // ultraviolet band half-width
    double charge = 1.0;  // charge carried per particle
    std::string statistics = "fermion";
};

struct CouplingEntry {
    int n = 0;
    int m = 0;
    int lambda = 0;  // signed reservoir label
    cplx v;
};

// System + reservoirs + bilinear coupling amplitudes, all in one energy
// unit with hbar = kB = 1. Immutable once validated.
class Setup {
public:
    Setup(double temperature, std::vector<double> energies,
          std::vector<std::string> state_labels, std::vector<Reservoir> reservoirs,
          std::vector<CouplingEntry> coupling, Tolerances tol = Tolerances::load());

    int n_states() const { return static_cast<int>(energies_.size()); }
    int n_reservoirs() const { return static_cast<int>(reservoirs_.size()); }
    double temperature() const { return temperature_; }
    double chi(int n) const { return energies_[static_cast<size_t>(n)]; }
    double dchi(int n, int m) const { return chi(n) - chi(m); }
    const std::vector<double>& energies() const { return energies_; }
    const std::vector<std::string>& state_labels() const { return state_labels_; }
    const std::vector<Reservoir>& reservoirs() const { return reservoirs_; }
    const Tolerances& tol() const { return tol_; }

    // Signed labels {+r1, -r1, +r2, ...} in a fixed deterministic order.
    const std::vector<int>& signed_labels() const { return signed_labels_; }

    bool has_label(int lambda) const;
    double mu(int lambda) const;       // mu(-r) = -mu(r)
    double dos(int lambda) const;
    double cutoff(int lambda) const;
    double charge(int lambda) const;

    // Wick sign for a pair of crossing environment contraction lines:
    // -1 for the fermionic reservoirs of this version.
    double crossing_sign() const { return -1.0; }

    // Coupling amplitude V_{nm,lambda}; zero when absent.
    cplx V(int n, int m, int lambda) const;

    // Spectral accessor C_lambda(eps) = n_F(eps - mu_lambda).
    double spectral_C(int lambda, double eps) const;

    // Original (canonically sorted) coupling entries, for serialization.
    const std::vector<CouplingEntry>& coupling_entries() const { return coupling_entries_; }

    // Copy with all reservoir cutoffs scaled. Used for cutoff-drift checks.
    Setup with_scaled_cutoffs(double factor) const;

private:
    void validate();
    int reservoir_index(int lambda) const;  // -1 when unknown
    size_t vindex(int n, int m, int lambda_slot) const;

    double temperature_;
    std::vector<double> energies_;
    std::vector<std::string> state_labels_;
    std::vector<Reservoir> reservoirs_;
    std::vector<CouplingEntry> coupling_entries_;
    std::vector<int> signed_labels_;
    std::vector<cplx> vtable_;  // dense [n][m][signed label slot]
    Tolerances tol_;
};

// Single spinless level at eps0 between two leads at mu_bias/2 and
// -mu_bias/2, each coupled with amplitude J/sqrt(2) such that the total
// width is gamma0 = 2 pi |J|^2 dos (dos = 1 per lead).
Setup resonant_level(double eps0, double gamma0, double mu_bias, double T,
                     double cutoff, Tolerances tol = Tolerances::load());

} // namespace stcl::model
