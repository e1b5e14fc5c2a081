/* Exercises the shared library through its C header only. */
#include <math.h>
#include <stdio.h>
#include <string.h>

#include "minimax/minimax.h"

static int failures = 0;

#define EXPECT(cond)                                              \
  do {                                                            \
    if (!(cond)) {                                                \
      fprintf(stderr, "%s:%d: expected %s\n", __FILE__, __LINE__, #cond); \
      ++failures;                                                 \
    }                                                             \
  } while (0)

int main(void) {
  mmx_config* cfg = NULL;
  EXPECT(mmx_config_new(&cfg) == MMX_OK);
  EXPECT(mmx_config_set(cfg, "problem.family", "bilinear") == MMX_OK);
  EXPECT(mmx_config_set(cfg, "method.name", "npe") == MMX_OK);
  EXPECT(mmx_config_set(cfg, "run.eps", "1e-4") == MMX_OK);
  EXPECT(mmx_config_set(cfg, "run.record_wall_time", "false") == MMX_OK);

  EXPECT(mmx_config_set(cfg, "run.nope", "1") == MMX_ERR_CONFIG);
  EXPECT(strstr(mmx_last_error(), "run.nope") != NULL);
  EXPECT(mmx_config_set(NULL, "run.eps", "1") == MMX_ERR_INVALID_ARGUMENT);
  EXPECT(strcmp(mmx_status_name(MMX_ERR_CONFIG), "ConfigError") == 0);

  char* text = NULL;
  EXPECT(mmx_config_to_text(cfg, &text) == MMX_OK);
  mmx_config* copy = NULL;
  EXPECT(mmx_config_parse(text, &copy) == MMX_OK);
  char* text2 = NULL;
  EXPECT(mmx_config_to_text(copy, &text2) == MMX_OK);
  EXPECT(text && text2 && strcmp(text, text2) == 0);
  mmx_string_free(text);
  mmx_string_free(text2);
  mmx_config_free(copy);

  mmx_result* res = NULL;
  EXPECT(mmx_solve(cfg, &res) == MMX_OK);
  mmx_summary s;
  EXPECT(mmx_result_summary(res, &s) == MMX_OK);
  EXPECT(s.status == MMX_RUN_CONVERGED);
  EXPECT(s.final_gap <= 1e-4);
  EXPECT(s.n_crn > 0 && s.wall_ms == 0.0);
  EXPECT(mmx_result_exit_code(res) == 0);
  char* json = NULL;
  EXPECT(mmx_result_json(res, &json) == MMX_OK);
  EXPECT(json && strstr(json, "\"schema_version\": 1") != NULL);
  mmx_string_free(json);
  mmx_result_free(res);

  EXPECT(mmx_config_set(cfg, "run.budget", "0") == MMX_OK);
  EXPECT(mmx_solve(cfg, &res) == MMX_OK);
  EXPECT(mmx_result_exit_code(res) == 2);
  mmx_result_free(res);

  mmx_sweep* sw = NULL;
  EXPECT(mmx_sweep_run(cfg, "1e-2,1e-3", 1, &sw) == MMX_ERR_SLOPE_NEEDS_THREE_POINTS);
  EXPECT(mmx_config_set(cfg, "run.budget", "1000000") == MMX_OK);
  EXPECT(mmx_sweep_run(cfg, "1e-2:1e-4:log3", 1, &sw) == MMX_OK);
  EXPECT(mmx_sweep_failed_rows(sw) == 0);
  double slope = NAN;
  EXPECT(mmx_sweep_fit(sw, &slope, NULL, NULL) == MMX_OK);
  EXPECT(isfinite(slope));
  mmx_sweep_free(sw);
  mmx_config_free(cfg);

  const double x[] = {0, 1, 2, 3}, y[] = {1, 3, 4, 7};
  double b = 0, a = 0, ci = 0;
  EXPECT(mmx_fit_slope(x, y, 4, &b, &a, &ci) == MMX_OK);
  EXPECT(fabs(b - 1.9) < 1e-12 && fabs(a - 0.9) < 1e-12);
  const double same[] = {1, 1, 1};
  EXPECT(mmx_fit_slope(same, y, 3, &b, &a, &ci) == MMX_ERR_DEGENERATE_FIT);

  mmx_config* bad = NULL;
  EXPECT(mmx_config_parse("[run\n", &bad) == MMX_ERR_CONFIG && bad == NULL);
  EXPECT(mmx_config_load("/nonexistent.ini", &bad) == MMX_ERR_CONFIG);

  int ids[16];
  size_t n = 0;
  EXPECT(mmx_suite_criteria("aipe", ids, 16, &n) == MMX_OK && n == 2 && ids[0] == 5 && ids[1] == 8);
  int passed = 0;
  char* report = NULL;
  EXPECT(mmx_verify_criterion(9, &passed, &report) == MMX_OK && passed == 1);
  mmx_string_free(report);
  EXPECT(mmx_verify_criterion(42, &passed, NULL) == MMX_ERR_BAD_PARAMS);

  mmx_config_free(NULL);
  mmx_result_free(NULL);
  mmx_sweep_free(NULL);
  printf("%d failures\n", failures);
  return failures ? 1 : 0;
}
