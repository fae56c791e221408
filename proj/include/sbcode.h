/* C API for the sbcode gradient-coding library.
 *
 * All functions return sbcode_status; SBCODE_OK is 0. On failure the output
 * parameters are untouched and sbcode_last_error() returns a thread-local
 * message describing what went wrong. Handles are opaque and freed with the
 * matching _destroy function; strings returned through char** are freed with
 * sbcode_string_free. All indices are 0-based.
 */
#ifndef SBCODE_H
#define SBCODE_H

#include <stdint.h>
#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sbcode_status {
  SBCODE_OK = 0,
  SBCODE_ERROR_INVALID_ARGUMENT = 1,
  SBCODE_ERROR_IO = 2,
  SBCODE_ERROR_RESOURCE_LIMIT = 3,
  SBCODE_ERROR_INTERNAL = 4
} sbcode_status;

const char* sbcode_version(void);
const char* sbcode_status_name(sbcode_status status);
/* Thread-local message from the most recent failing call. */
const char* sbcode_last_error(void);
void sbcode_string_free(char* s);

/* ---- codes ---- */

typedef struct sbcode_code sbcode_code; /* a realized assignment matrix */

sbcode_status sbcode_code_create_frc(int64_t k, int64_t s, sbcode_code** out);
sbcode_status sbcode_code_create_bgc(int64_t k, int64_t s, double p,
                                     uint64_t seed, sbcode_code** out);
sbcode_status sbcode_code_create_sbc(int64_t k, int64_t s, double p, double q,
                                     uint64_t seed, sbcode_code** out);
void sbcode_code_destroy(sbcode_code* code);
sbcode_status sbcode_code_dims(const sbcode_code* code, int64_t* k,
                               int64_t* s);
sbcode_status sbcode_code_entry(const sbcode_code* code, int64_t row,
                                int64_t col, double* out);
/* Dense CSV of 0/1 integers, one row per line. */
sbcode_status sbcode_code_csv(const sbcode_code* code, char** out);

sbcode_status sbcode_matched_q(int64_t k, int64_t s, double p, double* out);
sbcode_status sbcode_expected_column_weight(int64_t k, int64_t s, double p,
                                            double q, double* out);
/* r = round((1 - epsilon) k), half away from zero. */
sbcode_status sbcode_r_from_epsilon(int64_t k, double epsilon, int64_t* out);

/* ---- straggler patterns ---- */

typedef struct sbcode_pattern sbcode_pattern; /* non-straggler index set T */

sbcode_status sbcode_pattern_random(int64_t k, int64_t r, uint64_t seed,
                                    sbcode_pattern** out);
sbcode_status sbcode_pattern_blocks(int64_t k, int64_t s, int64_t r,
                                    sbcode_pattern** out);
sbcode_status sbcode_pattern_greedy(const sbcode_code* code, int64_t r,
                                    sbcode_pattern** out);
/* Guarded: fails with SBCODE_ERROR_RESOURCE_LIMIT when C(k, r) > 10^6. */
sbcode_status sbcode_pattern_bruteforce(const sbcode_code* code, int64_t r,
                                        sbcode_pattern** out);
/* Attacks a permuted view of the code built from perm_seed; the returned
 * pattern is mapped back to the code's own column indices. */
sbcode_status sbcode_pattern_spectral(const sbcode_code* code,
                                      uint64_t perm_seed, int64_t r,
                                      sbcode_pattern** out);
void sbcode_pattern_destroy(sbcode_pattern* pattern);
sbcode_status sbcode_pattern_size(const sbcode_pattern* pattern, int64_t* r);
/* Copies the sorted indices into buf (capacity entries); requires
 * capacity >= r. */
sbcode_status sbcode_pattern_indices(const sbcode_pattern* pattern,
                                     int64_t* buf, int64_t capacity);
/* JSON array of the non-straggler indices. */
sbcode_status sbcode_pattern_json(const sbcode_pattern* pattern, char** out);

/* ---- decoding ---- */

typedef struct sbcode_decoding sbcode_decoding;

/* decoder is one of STOCHASTIC_BLOCK | AVERAGED_BLOCK | BGC_UNIFORM |
 * OPTIMAL. The seed is only consumed by STOCHASTIC_BLOCK. */
sbcode_status sbcode_decode(const sbcode_code* code,
                            const sbcode_pattern* pattern, const char* decoder,
                            uint64_t seed, sbcode_decoding** out);
void sbcode_decoding_destroy(sbcode_decoding* decoding);
sbcode_status sbcode_decoding_beta(const sbcode_decoding* decoding,
                                   double* out);
/* err(v) = ||G v - 1||^2 */
sbcode_status sbcode_decoding_err(const sbcode_code* code,
                                  const sbcode_decoding* decoding,
                                  double* out);
/* {decoder, beta, entries: [[index, value], ...]} */
sbcode_status sbcode_decoding_json(const sbcode_decoding* decoding,
                                   char** out);

/* ---- bounds ---- */

/* JSON object with every closed-form bound report and threshold predicate
 * for the given parameters. Pass r < 0 when no straggler count applies. */
sbcode_status sbcode_bounds_json(int64_t k, int64_t s, double p, double q,
                                 int64_t r, char** out);

/* ---- experiment commands ---- */

/* config_json mirrors the sweep config schema (see README). trials_override
 * replaces the configured trial count when > 0; threads = 0 defers to the
 * SBCODE_THREADS environment variable. Returns the results CSV. */
sbcode_status sbcode_sweep_csv(const char* config_json,
                               int64_t trials_override, int threads,
                               char** out_csv);
/* Renders a results CSV as an SVG chart. */
sbcode_status sbcode_plot_svg(const char* results_csv, char** out_svg);
/* Monte Carlo statistics for a single (spec, r, decoder) cell. */
sbcode_status sbcode_simulate_json(int64_t k, int64_t s, double p, double q,
                                   const char* decoder, int64_t r,
                                   int64_t trials, uint64_t seed, char** out);
/* Per-method attack statistics; method is one of
 * random|blocks|greedy|bruteforce|spectral. out_csv may be NULL; when given
 * it receives one line per trial. */
sbcode_status sbcode_attack_json(int64_t k, int64_t s, double p, double q,
                                 int64_t r, const char* method, int64_t trials,
                                 uint64_t seed, char** out_json,
                                 char** out_csv);
/* Coded gradient-descent demo against full-gradient and uncoded baselines. */
sbcode_status sbcode_gd_demo_json(int64_t k, int64_t s, double p, double q,
                                  double epsilon, int64_t steps, uint64_t seed,
                                  char** out);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* SBCODE_H */
