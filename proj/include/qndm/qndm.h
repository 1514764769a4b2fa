// Copyright 2026 The qndm-bench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


/* C interface to the qndm derivative-estimation library. Every function that
 * can fail returns a qndm_status; on failure qndm_last_error() describes the
 * problem until the next call on the same thread. Objects are opaque handles
 * released with the matching *_free function. Strings returned through
 * char** out-parameters are heap-allocated and released with
 * qndm_string_free. */

#ifndef QNDM_QNDM_H
#define QNDM_QNDM_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define QNDM_API __declspec(dllexport)
#else
#define QNDM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum qndm_status {
    QNDM_OK = 0,
    QNDM_ERR_CONFIG = 1,      /* invalid user configuration */
    QNDM_ERR_CONTRACT = 2,    /* dimension or index mismatch */
    QNDM_ERR_CALIBRATION = 3, /* normalization fit did not converge */
    QNDM_ERR_SINGULAR = 4,    /* closed-form variance diverges */
    QNDM_ERR_IO = 5,          /* file read/write failure */
    QNDM_ERR_NULL = 6,        /* required pointer argument was NULL */
    QNDM_ERR_INTERNAL = 7
} qndm_status;

typedef enum qndm_method { QNDM_METHOD_DM = 0, QNDM_METHOD_QNDM = 1 } qndm_method;

typedef enum qndm_sweep_kind {
    QNDM_SWEEP_MSE_VS_J = 0,
    QNDM_SWEEP_COST_VS_K = 1,
    QNDM_SWEEP_COST_VS_NJ = 2,
    QNDM_SWEEP_RATIO_VS_J = 3,
    QNDM_SWEEP_RATIO_VS_K = 4
} qndm_sweep_kind;

typedef struct qndm_observable qndm_observable;
typedef struct qndm_ansatz qndm_ansatz;
typedef struct qndm_key_values qndm_key_values;

QNDM_API const char *qndm_version(void);
QNDM_API const char *qndm_last_error(void);
QNDM_API void qndm_string_free(char *s);

/* ---- observables ---------------------------------------------------------- */

/* Text form: one "<coeff> <letters>" term per line or ';'-separated; '#'
 * starts a comment line. Letter j acts on qubit j. */
QNDM_API qndm_status qndm_observable_parse(const char *text, qndm_observable **out);
QNDM_API qndm_status qndm_observable_load(const char *path, qndm_observable **out);
/* J distinct non-identity strings on n qubits, coefficients ~ N(0, coeff_std). */
QNDM_API qndm_status qndm_observable_random(size_t n, size_t J, double coeff_std, uint64_t seed,
                                            qndm_observable **out);
QNDM_API void qndm_observable_free(qndm_observable *obs);
QNDM_API size_t qndm_observable_num_qubits(const qndm_observable *obs);
QNDM_API size_t qndm_observable_num_terms(const qndm_observable *obs);
/* Terms joined by "; ", coefficients printed to round-trip precision. */
QNDM_API qndm_status qndm_observable_to_text(const qndm_observable *obs, char **out);
/* 1 / sqrt(sum |h_i|). */
QNDM_API qndm_status qndm_observable_lambda(const qndm_observable *obs, double *out);

/* ---- ansatz --------------------------------------------------------------- */

/* `axes` holds m * n letters from {X, Y, Z}, layer-major; NULL means all X. */
QNDM_API qndm_status qndm_ansatz_create(size_t n, size_t m, const char *axes, qndm_ansatz **out);
/* Random axes; if theta_out is non-NULL it receives n * m angles in [0, 2 pi). */
QNDM_API qndm_status qndm_ansatz_random(size_t n, size_t m, uint64_t seed, double *theta_out, qndm_ansatz **out);
QNDM_API void qndm_ansatz_free(qndm_ansatz *ansatz);
QNDM_API size_t qndm_ansatz_num_qubits(const qndm_ansatz *ansatz);
QNDM_API size_t qndm_ansatz_num_params(const qndm_ansatz *ansatz);
/* `count` angles uniform in [0, 2 pi) from `seed`. */
QNDM_API qndm_status qndm_random_angles(size_t count, uint64_t seed, double *out);
/* k = m (2n - 1). */
QNDM_API uint64_t qndm_ansatz_gate_count(const qndm_ansatz *ansatz);
/* m * n axis letters, layer-major. */
QNDM_API qndm_status qndm_ansatz_axes(const qndm_ansatz *ansatz, char **out);

/* ---- derivatives ---------------------------------------------------------- */

typedef struct qndm_derivative_request {
    qndm_method method;
    int order;          /* 1 or 2 */
    size_t dir;         /* l */
    size_t dir2;        /* w, order 2 only */
    double s;           /* shift, default pi/2 */
    uint64_t shots;     /* N >= 1 */
    double lambda;      /* <= 0: 1 / sqrt(sum |h_i|) */
    double c1;
    double c2;
    uint64_t seed;
    int exact;          /* nonzero: exact probabilities instead of shots */
    size_t repeats;     /* R for the empirical MSE; 0 skips it */
} qndm_derivative_request;

typedef struct qndm_derivative_result {
    double value;
    double oracle;
    double lambda;          /* NaN for DM */
    uint64_t shots;
    double mse_emp;         /* NaN when repeats == 0 */
    double mse_formula;     /* NaN when the closed form is singular */
    uint64_t cost_formula;
    uint64_t cost_measured;
    uint64_t raw_gate_count;
    double p0;              /* exact detector P0 (QNDM), NaN for DM */
} qndm_derivative_result;

/* Fills the defaults: order 1, s = pi/2, 500 shots, lambda rule, calibrated
 * c1 = 4, c2 = 8, seed 0, sampled mode, no repeats. */
QNDM_API void qndm_derivative_request_init(qndm_derivative_request *req);

QNDM_API qndm_status qndm_derivative(const qndm_ansatz *ansatz, const double *theta, size_t num_theta,
                                     const qndm_observable *obs, const qndm_derivative_request *req,
                                     qndm_derivative_result *out);

/* Exact parameter-shift derivative. */
QNDM_API qndm_status qndm_exact_derivative(const qndm_ansatz *ansatz, const double *theta, size_t num_theta,
                                           const qndm_observable *obs, int order, size_t dir, size_t dir2,
                                           double s, double *out);

/* Fits c1, c2 on the built-in one-qubit family. `report` may be NULL. */
QNDM_API qndm_status qndm_calibrate(double *c1, double *c2, double *residual1, double *residual2, char **report);

/* ---- sweeps --------------------------------------------------------------- */

#define QNDM_MAX_GRID 64

typedef struct qndm_sweep_config {
    size_t n;
    int order;
    double s;
    uint64_t shots;
    size_t L;
    size_t R;
    double coeff_std;
    double lambda;         /* <= 0: lambda rule */
    double c1;
    double c2;
    uint64_t seed;
    int sigma_uniform;     /* nonzero: uniform sigma_s mode */
    uint64_t pilot_shots;
    int match_formula;     /* nonzero: match DM to the closed-form QNDM MSE */
    size_t threads;        /* 0: hardware concurrency */
    size_t J_grid[QNDM_MAX_GRID];
    size_t J_len;
    size_t m_grid[QNDM_MAX_GRID];
    size_t m_len;
    size_t lines[QNDM_MAX_GRID];
    size_t lines_len;
} qndm_sweep_config;

/* `preset` is "ci" or "full". */
QNDM_API qndm_status qndm_sweep_preset(const char *preset, qndm_sweep_kind kind, int order, qndm_sweep_config *out);

/* Runs the sweep and writes its CSVs and runcard.txt into out_dir. `extra`
 * (may be NULL) is prepended to the runcard. */
QNDM_API qndm_status qndm_run_sweep(const qndm_sweep_config *config, qndm_sweep_kind kind, const char *out_dir,
                                    const qndm_key_values *extra);

typedef struct qndm_realization {
    size_t J, m, k, n, l, w;
    double lambda;
    double oracle;
    double value[2];          /* indexed by qndm_method */
    double mse_emp[2];
    double mse_formula[2];
    uint64_t shots[2];
    uint64_t cost_formula[2];
    uint64_t cost_measured[2];
    double ratio;
} qndm_realization;

/* One realization at (J, m) with DM shots matched to the QNDM MSE. */
QNDM_API qndm_status qndm_run_realization(const qndm_sweep_config *config, size_t J, size_t m, size_t index,
                                          qndm_realization *out);

/* ---- key = value files ---------------------------------------------------- */

QNDM_API qndm_key_values *qndm_kv_new(void);
QNDM_API qndm_status qndm_kv_parse(const char *text, qndm_key_values **out);
QNDM_API qndm_status qndm_kv_load(const char *path, qndm_key_values **out);
QNDM_API void qndm_kv_free(qndm_key_values *kv);
QNDM_API qndm_status qndm_kv_add(qndm_key_values *kv, const char *key, const char *value);
QNDM_API size_t qndm_kv_size(const qndm_key_values *kv);
QNDM_API const char *qndm_kv_key(const qndm_key_values *kv, size_t i);
QNDM_API const char *qndm_kv_value(const qndm_key_values *kv, size_t i);
/* Writes `kv` plus a timestamp entry as runcard text. */
QNDM_API qndm_status qndm_kv_write_runcard(const qndm_key_values *kv, const char *path);

/* Writes through a temporary file and rename. Creates parent directories. */
QNDM_API qndm_status qndm_write_file_atomic(const char *path, const char *data, size_t len);

#ifdef __cplusplus
}
#endif

#endif
