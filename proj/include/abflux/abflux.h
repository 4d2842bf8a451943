/* C interface of the abflux library. All functions return a status code;
 * on failure abf_last_error() holds a message for the calling thread.
 * Handles are opaque and owned by the caller once created. */
#ifndef ABFLUX_H
#define ABFLUX_H

#include <stddef.h>
#include <stdint.h>

#if defined(ABF_BUILDING_LIBRARY)
#define ABF_API __attribute__((visibility("default")))
#else
#define ABF_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum {
  ABF_OK = 0,
  ABF_INVALID_ARGUMENT = 1,
  ABF_OUT_OF_RANGE = 2,
  ABF_NOT_CONVERGED = 3,
  ABF_DEGENERATE = 4,
  ABF_IO = 5,
  ABF_INTERNAL = 6
} abf_status;

typedef enum { ABF_HOLDS = 0, ABF_SATURATED = 1, ABF_VIOLATED = 2 } abf_verdict;

typedef struct abf_config abf_config;
typedef struct abf_table abf_table;

ABF_API const char* abf_version(void);
ABF_API const char* abf_status_name(abf_status s);
/* Empty string when the last call on this thread succeeded. */
ABF_API const char* abf_last_error(void);

/* Configuration: `key = value` pairs, see the README for keys. */
ABF_API abf_status abf_config_new(abf_config** out);
ABF_API void abf_config_free(abf_config* cfg);
ABF_API abf_status abf_config_parse(abf_config* cfg, const char* text);
ABF_API abf_status abf_config_load(abf_config* cfg, const char* path);
ABF_API abf_status abf_config_set(abf_config* cfg, const char* key, const char* value);
/* Writes at most cap bytes including the terminator; *needed gets the full
 * size including the terminator. buf may be NULL when cap is 0. */
ABF_API abf_status abf_config_serialize(const abf_config* cfg, char* buf, size_t cap,
                                        size_t* needed);

/* Runs the configured subcommand. Grid-point failures do not fail the call;
 * they appear as error rows. */
ABF_API abf_status abf_run(const abf_config* cfg, abf_table** out);
ABF_API void abf_table_free(abf_table* t);
ABF_API size_t abf_table_rows(const abf_table* t);
ABF_API size_t abf_table_columns(const abf_table* t);
ABF_API const char* abf_table_column_name(const abf_table* t, size_t j);
/* Cell text as printed in CSV. The pointer lives as long as the table. */
ABF_API const char* abf_table_cell(const abf_table* t, size_t i, size_t j);
ABF_API int abf_table_error_rows(const abf_table* t);
ABF_API int abf_table_violated(const abf_table* t);
ABF_API size_t abf_table_diagnostic_count(const abf_table* t);
ABF_API const char* abf_table_diagnostic(const abf_table* t, size_t i);
/* format "csv" or "json"; path "-" is stdout. */
ABF_API abf_status abf_table_write(const abf_table* t, const char* format, const char* path);

/* Scalars. Flux arguments are raw and normalized internally. */
ABF_API abf_status abf_normalize_flux(double a_raw, double* out);
ABF_API abf_status abf_ring_threshold(double a_raw, double p, double* out);
ABF_API abf_status abf_sphere2_ground(double a_raw, double* out);
ABF_API abf_status abf_planar_thresholds(double a_raw, double p, double* lambda_star,
                                         double* lambda_bullet);
ABF_API abf_status abf_planar_mu(double a_raw, double p, double lambda, double* value,
                                 double* printed_value);
/* n = 0 selects the default resolution. */
ABF_API abf_status abf_ring_optimum(double a_raw, double p, double param, int n,
                                    double* value, int* symmetric);

typedef struct {
  double a, p, q;
  double lhs, rhs, margin, quad_error;
  abf_verdict verdict;
  char constant_source[32];
} abf_certificate;

/* Randomized case (id, seed), the same one the certify subcommand runs. */
ABF_API abf_status abf_certify_case(const char* id, uint64_t seed, abf_certificate* out);
/* Equality cases: KLT_S1_SUB, HS_R2, RING_INV_NORM. */
ABF_API abf_status abf_certify_saturation(const char* id, double a_raw, double p, double param,
                                          abf_certificate* out);

#ifdef __cplusplus
}
#endif

#endif
