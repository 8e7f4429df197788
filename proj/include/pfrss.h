/* pfrss.h -- C interface to the stabilized phase-field solvers.
 *
 * The library evolves heat, Allen-Cahn, and Cahn-Hilliard problems with
 * residual-smoothed (RSS) time stepping on compact finite-difference
 * discretizations. All functions return PFRSS_OK (0) or an error code;
 * pfrss_last_error() describes the most recent failure on the calling
 * thread. Objects are opaque handles that must be released with the
 * matching *_free function.
 */
#ifndef PFRSS_H
#define PFRSS_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

#define PFRSS_OK 0
#define PFRSS_EINVAL 1   /* invalid argument */
#define PFRSS_ECONFIG 2  /* malformed configuration */
#define PFRSS_ENUMERIC 3 /* solver failure / non-convergence */
#define PFRSS_EIO 4      /* file input/output failure */
#define PFRSS_ESIZE 5    /* grid too small or diagnostic size cap exceeded */

typedef struct pfrss_experiment pfrss_experiment;
typedef struct pfrss_run_result pfrss_run_result;
typedef struct pfrss_field pfrss_field;
typedef struct pfrss_operator pfrss_operator;

const char* pfrss_version(void);

/* thread-local message for the last failing call */
const char* pfrss_last_error(void);

/* ---- experiment configuration and runs -------------------------------- */

/* parse `key = value` text / load it from a file; NULL on error */
pfrss_experiment* pfrss_experiment_parse(const char* text);
pfrss_experiment* pfrss_experiment_load(const char* path);
void pfrss_experiment_free(pfrss_experiment*);

/* override one key, same syntax as the config file */
int pfrss_experiment_set(pfrss_experiment*, const char* key, const char* value);

/* serialized form of the configuration; caller must not free */
const char* pfrss_experiment_describe(pfrss_experiment*);

/* advance the configured problem to t_max; outputs land in output_dir */
int pfrss_experiment_run(pfrss_experiment*, pfrss_run_result** out);

/* ---- run results ------------------------------------------------------- */

size_t pfrss_run_history_length(const pfrss_run_result*);
/* row layout: t, energy, mass, max_abs, increment_norm */
int pfrss_run_history_row(const pfrss_run_result*, size_t index, double out[5]);
double pfrss_run_median_step_seconds(const pfrss_run_result*);
const char* pfrss_run_history_file(const pfrss_run_result*);
int pfrss_run_final_field(const pfrss_run_result*, pfrss_field** out);
void pfrss_run_result_free(pfrss_run_result*);

/* ---- fields ------------------------------------------------------------ */

/* nodes x_i = i/(n-1); values start at zero */
pfrss_field* pfrss_field_create(int dim, int n);
/* named preset ("zero", "heat2d", "ac1d", "ac2d", "ac3d", "ch3d",
 * "smooth_small", "cross", "two_circles", "random") */
pfrss_field* pfrss_field_preset(const char* name, int dim, int n);
double* pfrss_field_data(pfrss_field*);
size_t pfrss_field_size(const pfrss_field*);
int pfrss_field_dim(const pfrss_field*);
int pfrss_field_n(const pfrss_field*);
/* grayscale PGM of a 2D field (middle slice of a 3D one) */
int pfrss_field_save_pgm(const pfrss_field*, const char* path);
void pfrss_field_free(pfrss_field*);

/* ---- operators --------------------------------------------------------- */

/* kind is "lele4", "cs2" or "second_order" */
pfrss_operator* pfrss_operator_create(const char* kind, int dim, int n, double h);
int pfrss_operator_apply(const pfrss_operator*, const pfrss_field* u, pfrss_field** out);
/* (I + gamma B) x = rhs; only second_order operators carry the fast solver */
int pfrss_solve_shifted(const pfrss_operator* B, double gamma, const pfrss_field* rhs,
                        pfrss_field** out);
void pfrss_operator_free(pfrss_operator*);

/* ---- diagnostics -------------------------------------------------------- */

typedef struct pfrss_stability {
    double alpha, beta, rho_a, lambda_min_a, lambda_min_b;
    double asymmetry_a, asymmetry_b;
    double dt_bound_euler; /* 0 when unconditional */
    double dt_bound_cn;
    double dt_bound_ac;
    double tau_bound_ch;
    int euler_unconditional;
    int cn_unconditional;
    int ch_unconditional;
} pfrss_stability;

/* measured spectral constants and the predicted step-size bounds */
int pfrss_stability_report(const char* operator_kind, int dim, int n, double tau, double epsilon,
                           pfrss_stability* out);

/* interior max error of the second-derivative reconstruction on
 * u(x) = cos(x(1-x)) for each grid size; slope of the log-log fit */
int pfrss_convergence_study(const char* operator_kind, const double* h_values, size_t count,
                            double* errors_out, double* slope_out);

#ifdef __cplusplus
}
#endif

#endif /* PFRSS_H */
