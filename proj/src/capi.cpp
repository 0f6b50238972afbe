#include "stcl/stcl.h"

#include <cstring>
#include <string>

#include "bench_exact.hpp"
#include "config.hpp"
#include "currents.hpp"
#include "errors.hpp"
#include "model.hpp"
#include "rates2.hpp"
#include "rates4.hpp"
#include "specfun.hpp"
#include "steady.hpp"
#include "verify.hpp"

struct stcl_setup {
    stcl::model::Setup impl;
};

struct stcl_steady {
    stcl::steady::SteadyStateExpansion impl;
};

namespace {

thread_local std::string g_last_error;

stcl_status fail(stcl_status code, const char* what) {
    g_last_error = what;
    return code;
}

// Runs fn, translating exceptions into status codes.
template <typename Fn>
stcl_status guarded(Fn&& fn) {
    try {
        fn();
        return STCL_OK;
    } catch (const stcl::ValidationError& e) {
        return fail(STCL_ERR_VALIDATION, e.what());
    } catch (const stcl::NumericError& e) {
        return fail(STCL_ERR_NUMERIC, e.what());
    } catch (const std::exception& e) {
        return fail(STCL_ERR_NUMERIC, e.what());
    }
}

char* dup_string(const std::string& s) {
    char* out = new char[s.size() + 1];
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

} // namespace

extern "C" {

const char* stcl_version(void) { return "1.0.0"; }

const char* stcl_last_error(void) { return g_last_error.c_str(); }

stcl_status stcl_setup_from_string(const char* text, stcl_setup** out) {
    if (!text || !out) return fail(STCL_ERR_VALIDATION, "null argument");
    return guarded([&] { *out = new stcl_setup{stcl::config::parse(text)}; });
}

stcl_status stcl_setup_from_file(const char* path, stcl_setup** out) {
    if (!path || !out) return fail(STCL_ERR_VALIDATION, "null argument");
    return guarded([&] { *out = new stcl_setup{stcl::config::parse_file(path)}; });
}

stcl_status stcl_setup_resonant_level(double eps0, double gamma0, double mu_bias,
                                      double temperature, double cutoff,
                                      stcl_setup** out) {
    if (!out) return fail(STCL_ERR_VALIDATION, "null argument");
    return guarded([&] {
        *out = new stcl_setup{
            stcl::model::resonant_level(eps0, gamma0, mu_bias, temperature, cutoff)};
    });
}

void stcl_setup_free(stcl_setup* setup) { delete setup; }

int stcl_setup_num_states(const stcl_setup* setup) {
    return setup ? setup->impl.n_states() : 0;
}

int stcl_setup_num_reservoirs(const stcl_setup* setup) {
    return setup ? setup->impl.n_reservoirs() : 0;
}

double stcl_setup_temperature(const stcl_setup* setup) {
    return setup ? setup->impl.temperature() : 0.0;
}

int stcl_setup_reservoir_label(const stcl_setup* setup, int k) {
    if (!setup || k < 0 || k >= setup->impl.n_reservoirs()) return 0;
    return setup->impl.reservoirs()[static_cast<size_t>(k)].label;
}

stcl_status stcl_setup_to_json(const stcl_setup* setup, char** out_json) {
    if (!setup || !out_json) return fail(STCL_ERR_VALIDATION, "null argument");
    return guarded([&] { *out_json = dup_string(stcl::config::serialize(setup->impl)); });
}

void stcl_string_free(char* s) { delete[] s; }

stcl_status stcl_rate_matrix(const stcl_setup* setup, int order, double* out) {
    if (!setup || !out) return fail(STCL_ERR_VALIDATION, "null argument");
    return guarded([&] {
        if (order == 2) {
            const auto m = stcl::rates2::s2_matrix(setup->impl);
            std::memcpy(out, m.a.data(), m.a.size() * sizeof(double));
        } else if (order == 4) {
            const auto b = stcl::rates4::s4_matrix(setup->impl);
            std::memcpy(out, b.s4.a.data(), b.s4.a.size() * sizeof(double));
        } else {
            throw stcl::ValidationError("order must be 2 or 4");
        }
    });
}

stcl_status stcl_cutoff_drift(const stcl_setup* setup, double* out) {
    if (!setup || !out) return fail(STCL_ERR_VALIDATION, "null argument");
    return guarded([&] { *out = stcl::rates4::cutoff_doubling_drift(setup->impl); });
}

stcl_status stcl_steady_solve(const stcl_setup* setup, stcl_steady** out) {
    if (!setup || !out) return fail(STCL_ERR_VALIDATION, "null argument");
    return guarded([&] {
        const auto s2 = stcl::rates2::s2_matrix(setup->impl);
        const auto b4 = stcl::rates4::s4_matrix(setup->impl);
        auto p0 = stcl::steady::solve_order0(s2);
        auto p2 = stcl::steady::solve_order2(s2, b4.s4, p0);
        *out = new stcl_steady{{std::move(p0), std::move(p2)}};
    });
}

stcl_status stcl_steady_p0(const stcl_steady* steady, double* out) {
    if (!steady || !out) return fail(STCL_ERR_VALIDATION, "null argument");
    std::memcpy(out, steady->impl.p0.data(), steady->impl.p0.size() * sizeof(double));
    return STCL_OK;
}

stcl_status stcl_steady_p2(const stcl_steady* steady, double* out) {
    if (!steady || !out) return fail(STCL_ERR_VALIDATION, "null argument");
    std::memcpy(out, steady->impl.p2.data(), steady->impl.p2.size() * sizeof(double));
    return STCL_OK;
}

void stcl_steady_free(stcl_steady* steady) { delete steady; }

stcl_status stcl_current_rate_matrix(const stcl_setup* setup, int lambda, int order,
                                     double* out) {
    if (!setup || !out) return fail(STCL_ERR_VALIDATION, "null argument");
    return guarded([&] {
        stcl::currents::CurrentRateMatrix m;
        if (order == 2) m = stcl::currents::current_rates_2(setup->impl, lambda);
        else if (order == 4) m = stcl::currents::current_rates_4(setup->impl, lambda);
        else throw stcl::ValidationError("order must be 2 or 4");
        std::memcpy(out, m.a.data(), m.a.size() * sizeof(double));
    });
}

stcl_status stcl_current(const stcl_setup* setup, const stcl_steady* steady,
                         int lambda, double* i2, double* i4, double breakdown[3]) {
    if (!setup || !steady || !i2 || !i4) return fail(STCL_ERR_VALIDATION, "null argument");
    return guarded([&] {
        const auto e = stcl::currents::current(setup->impl, lambda, steady->impl);
        *i2 = e.i2;
        *i4 = e.i4;
        if (breakdown) {
            breakdown[0] = e.i4_sequential;
            breakdown[1] = e.i4_cotunnel;
            breakdown[2] = e.i4_virtual;
        }
    });
}

stcl_status stcl_digamma(double re, double im, double* out_re, double* out_im) {
    if (!out_re || !out_im) return fail(STCL_ERR_VALIDATION, "null argument");
    return guarded([&] {
        const auto v = stcl::specfun::digamma({re, im});
        *out_re = v.real();
        *out_im = v.imag();
    });
}

stcl_status stcl_trigamma(double re, double im, double* out_re, double* out_im) {
    if (!out_re || !out_im) return fail(STCL_ERR_VALIDATION, "null argument");
    return guarded([&] {
        const auto v = stcl::specfun::trigamma({re, im});
        *out_re = v.real();
        *out_im = v.imag();
    });
}

stcl_status stcl_fermi(double eps, double temperature, double* out) {
    if (!out) return fail(STCL_ERR_VALIDATION, "null argument");
    return guarded([&] { *out = stcl::specfun::fermi(eps, temperature); });
}

stcl_status stcl_bose(double eps, double temperature, double* out) {
    if (!out) return fail(STCL_ERR_VALIDATION, "null argument");
    return guarded([&] { *out = stcl::specfun::bose(eps, temperature); });
}

stcl_status stcl_exact_occupation(double eps0, double gamma0, double temperature,
                                  double* out) {
    if (!out) return fail(STCL_ERR_VALIDATION, "null argument");
    return guarded([&] {
        *out = stcl::bench_exact::exact_occupation({eps0, gamma0, 0.0, temperature});
    });
}

stcl_status stcl_exact_current(double eps0, double gamma0, double mu_bias,
                               double temperature, double* out) {
    if (!out) return fail(STCL_ERR_VALIDATION, "null argument");
    return guarded([&] {
        *out = stcl::bench_exact::exact_current({eps0, gamma0, mu_bias, temperature});
    });
}

stcl_status stcl_verify(int criterion, int quick, char** report, int* n_failed) {
    if (!report || !n_failed) return fail(STCL_ERR_VALIDATION, "null argument");
    return guarded([&] {
        const auto results = stcl::verify::run(criterion, quick != 0);
        *report = dup_string(stcl::verify::format_table(results));
        int failed = 0;
        for (const auto& r : results)
            if (!r.pass) ++failed;
        *n_failed = failed;
    });
}

} // extern "C"
