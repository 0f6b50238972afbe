/* C interface to the steady-state transport rate library.
 *
 * All energies are in one arbitrary unit with hbar = kB = 1; rate-matrix
 * entries are rates multiplied by hbar (energy units). Handles are opaque
 * and must be released with the matching *_free call. Functions return
 * STCL_OK on success; on failure stcl_last_error() describes the problem
 * for the calling thread.
 */
#ifndef STCL_H
#define STCL_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum stcl_status {
    STCL_OK = 0,
    STCL_ERR_VALIDATION = 1, /* bad input: config, model invariants, poles */
    STCL_ERR_NUMERIC = 2     /* numerical contract failed */
} stcl_status;

typedef struct stcl_setup stcl_setup;
typedef struct stcl_steady stcl_steady;

const char* stcl_version(void);
const char* stcl_last_error(void);

/* --- setup construction -------------------------------------------- */

stcl_status stcl_setup_from_string(const char* text, stcl_setup** out);
stcl_status stcl_setup_from_file(const char* path, stcl_setup** out);
stcl_status stcl_setup_resonant_level(double eps0, double gamma0, double mu_bias,
                                      double temperature, double cutoff,
                                      stcl_setup** out);
void stcl_setup_free(stcl_setup* setup);

int stcl_setup_num_states(const stcl_setup* setup);
int stcl_setup_num_reservoirs(const stcl_setup* setup);
double stcl_setup_temperature(const stcl_setup* setup);

/* Reservoir label of reservoir index k (0-based), always positive. */
int stcl_setup_reservoir_label(const stcl_setup* setup, int k);

/* Canonical JSON export; free with stcl_string_free. */
stcl_status stcl_setup_to_json(const stcl_setup* setup, char** out_json);
void stcl_string_free(char* s);

/* --- rates and steady state ----------------------------------------- */

/* Rate matrix of the given order (2 or 4) into out[n*n], row-major,
 * row = source state. */
stcl_status stcl_rate_matrix(const stcl_setup* setup, int order, double* out);

/* Relative change of the order-4 matrix under cutoff doubling. */
stcl_status stcl_cutoff_drift(const stcl_setup* setup, double* out);

stcl_status stcl_steady_solve(const stcl_setup* setup, stcl_steady** out);
stcl_status stcl_steady_p0(const stcl_steady* steady, double* out);
stcl_status stcl_steady_p2(const stcl_steady* steady, double* out);
void stcl_steady_free(stcl_steady* steady);

/* --- currents -------------------------------------------------------- */

/* Signed current-rate matrix into reservoir `lambda` (positive label). */
stcl_status stcl_current_rate_matrix(const stcl_setup* setup, int lambda, int order,
                                     double* out);

/* Current into reservoir `lambda`. breakdown (may be NULL) receives
 * {sequential-on-p2, cotunnelling, virtually-assisted} parts of i4. */
stcl_status stcl_current(const stcl_setup* setup, const stcl_steady* steady,
                         int lambda, double* i2, double* i4, double breakdown[3]);

/* --- special functions and exact benchmark --------------------------- */

stcl_status stcl_digamma(double re, double im, double* out_re, double* out_im);
stcl_status stcl_trigamma(double re, double im, double* out_re, double* out_im);
stcl_status stcl_fermi(double eps, double temperature, double* out);
stcl_status stcl_bose(double eps, double temperature, double* out);

stcl_status stcl_exact_occupation(double eps0, double gamma0, double temperature,
                                  double* out);
stcl_status stcl_exact_current(double eps0, double gamma0, double mu_bias,
                               double temperature, double* out);

/* --- verification ----------------------------------------------------- */

/* Run acceptance criterion `criterion` (1..8) or all (0). The pass/fail
 * table is returned in *report (free with stcl_string_free); *n_failed
 * receives the number of failed criteria. */
stcl_status stcl_verify(int criterion, int quick, char** report, int* n_failed);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* STCL_H */
