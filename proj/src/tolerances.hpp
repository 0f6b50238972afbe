#pragma once

#include <cstdlib>
#include <string>

namespace stcl {

// Numerical policy knobs. All *_rel values are relative to the setup
// temperature T. Environment variables STCL_TOL_<NAME> override the
// defaults at load(); the CLI forwards --tol name=value on top of that.
struct Tolerances {
    double pole_rel = 1e-9;          // removable-singularity switch in I
    // Gradient switch: the direct branch loses ~eps*T^2/x^2 digits to
    // cancellation while the midpoint series is accurate to O((x/T)^2);
    // both reach ~1e-7 relative where they meet at 3e-4 T.
    double grad_pole_rel = 3e-4;
    double fallback_rel = 1e-7;      // 0/0 denominator fallback in 4th-order rates
    double degen_rel = 1e-9;         // level-degeneracy rejection threshold
    double cutoff_factor = 1e3;      // bandwidth must exceed every scale by this
    double cutoff_min_ratio = 1e2;   // direct J calls: cutoff vs |delta+mu|
    double cutoff_drift_rel = 1e-8;  // allowed S4 change under cutoff doubling

    static Tolerances load();        // defaults + environment overrides
    bool set(const std::string& name, double value);  // by knob name
};

} // namespace stcl
