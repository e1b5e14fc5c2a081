/* C interface to the minimax solver library.
 *
 * Every function returning mmx_status reports failures through the status code; the message of the most recent
 * failure on the calling thread is available from mmx_last_error(). Strings handed out by the library are
 * heap-allocated and released with mmx_string_free(). Handles are released with their *_free function; passing
 * NULL to a *_free function is a no-op. */
#ifndef MINIMAX_MINIMAX_H
#define MINIMAX_MINIMAX_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define MMX_API __declspec(dllexport)
#else
#define MMX_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum mmx_status {
  MMX_OK = 0,
  MMX_ERR_SINGULAR_SYSTEM = 1,
  MMX_ERR_DIMENSION_MISMATCH = 2,
  MMX_ERR_NON_FINITE_VALUE = 3,
  MMX_ERR_BAD_PARAMS = 4,
  MMX_ERR_NO_CONVERGENCE = 5,
  MMX_ERR_BAD_STEP_SIZE = 6,
  MMX_ERR_NO_PROGRESS = 7,
  MMX_ERR_BUDGET_EXHAUSTED = 8,
  MMX_ERR_CONFIG = 9,
  MMX_ERR_DEGENERATE_FIT = 10,
  MMX_ERR_SLOPE_NEEDS_THREE_POINTS = 11,
  MMX_ERR_IO = 12,
  MMX_ERR_INVALID_ARGUMENT = 100, /* NULL handle or output pointer */
  MMX_ERR_INTERNAL = 101
} mmx_status;

typedef enum mmx_run_status { MMX_RUN_CONVERGED = 0, MMX_RUN_BUDGET_EXHAUSTED = 1, MMX_RUN_STATIONARY = 2 } mmx_run_status;

typedef struct mmx_config mmx_config;
typedef struct mmx_result mmx_result;
typedef struct mmx_sweep mmx_sweep;

typedef struct mmx_summary {
  mmx_run_status status;
  double final_gap;
  int gap_certified;
  double wall_ms;
  uint64_t n_value, n_grad, n_hess, n_crn, n_eg, n_schedule_starts;
} mmx_summary;

MMX_API const char* mmx_version(void);
MMX_API const char* mmx_status_name(mmx_status status);
/* Message of the last failure on this thread; empty if none. Valid until the next failing call on this thread. */
MMX_API const char* mmx_last_error(void);
MMX_API void mmx_string_free(char* s);

/* Run configuration. Keys are "section.key" as in the text format, e.g. "run.eps" or "method.name". */
MMX_API mmx_status mmx_config_new(mmx_config** out);
MMX_API mmx_status mmx_config_parse(const char* text, mmx_config** out);
MMX_API mmx_status mmx_config_load(const char* path, mmx_config** out);
MMX_API mmx_status mmx_config_set(mmx_config* cfg, const char* key, const char* value);
MMX_API mmx_status mmx_config_to_text(const mmx_config* cfg, char** out);
MMX_API void mmx_config_free(mmx_config* cfg);

/* One solve. The result exists even when the run stopped on its budget. */
MMX_API mmx_status mmx_solve(const mmx_config* cfg, mmx_result** out);
MMX_API mmx_status mmx_result_summary(const mmx_result* result, mmx_summary* out);
MMX_API mmx_status mmx_result_json(const mmx_result* result, char** out);
/* 0 for a finished run, 2 when the CRN budget ran out. */
MMX_API int mmx_result_exit_code(const mmx_result* result);
MMX_API void mmx_result_free(mmx_result* result);

/* Sweep over an eps grid such as "1e-3:1e-7:log5" or "1e-2,1e-3,1e-4". */
MMX_API mmx_status mmx_sweep_run(const mmx_config* cfg, const char* eps_grid, int threads, mmx_sweep** out);
MMX_API mmx_status mmx_sweep_csv(const mmx_sweep* sweep, char** out);
MMX_API mmx_status mmx_sweep_json(const mmx_sweep* sweep, char** out);
/* Number of rows that failed with an error. */
MMX_API size_t mmx_sweep_failed_rows(const mmx_sweep* sweep);
/* MMX_OK with the fit, or the status explaining why there is none. */
MMX_API mmx_status mmx_sweep_fit(const mmx_sweep* sweep, double* slope, double* intercept, double* ci_halfwidth);
MMX_API void mmx_sweep_free(mmx_sweep* sweep);

/* Ordinary least squares with a 95% half-width from 1.96 standard errors. */
MMX_API mmx_status mmx_fit_slope(const double* x, const double* y, size_t n, double* slope, double* intercept,
                                 double* ci_halfwidth);

/* Acceptance suites. mmx_suite_criteria writes up to cap ids and the total count. */
MMX_API mmx_status mmx_suite_criteria(const char* suite, int* ids, size_t cap, size_t* count);
/* Runs one criterion; *passed is 1 or 0 and *report holds its formatted lines. */
MMX_API mmx_status mmx_verify_criterion(int id, int* passed, char** report);

#ifdef __cplusplus
}
#endif

#endif
