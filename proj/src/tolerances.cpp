#include "tolerances.hpp"

#include <cstdlib>
#include <cstring>

namespace stcl {

namespace {

void from_env(const char* name, double& slot) {
    if (const char* s = std::getenv(name)) {
        char* end = nullptr;
        double v = std::strtod(s, &end);
        if (end != s && v > 0.0) slot = v;
    }
}

} // namespace

Tolerances Tolerances::load() {
    Tolerances t;
    from_env("STCL_TOL_POLE", t.pole_rel);
    from_env("STCL_TOL_GRAD_POLE", t.grad_pole_rel);
    from_env("STCL_TOL_FALLBACK", t.fallback_rel);
    from_env("STCL_TOL_DEGEN", t.degen_rel);
    from_env("STCL_TOL_CUTOFF_FACTOR", t.cutoff_factor);
    from_env("STCL_TOL_CUTOFF_MIN_RATIO", t.cutoff_min_ratio);
    from_env("STCL_TOL_CUTOFF_DRIFT", t.cutoff_drift_rel);
    return t;
}

bool Tolerances::set(const std::string& name, double value) {
    if (value <= 0.0) return false;
    if (name == "pole") pole_rel = value;
    else if (name == "grad_pole") grad_pole_rel = value;
    else if (name == "fallback") fallback_rel = value;
    else if (name == "degen") degen_rel = value;
    else if (name == "cutoff_factor") cutoff_factor = value;
    else if (name == "cutoff_min_ratio") cutoff_min_ratio = value;
    else if (name == "cutoff_drift") cutoff_drift_rel = value;
    else return false;
    return true;
}

} // namespace stcl
