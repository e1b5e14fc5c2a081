#include <cstdlib>
#include <cstring>
#include <exception>
#include <string>

#include "bench.hpp"
#include "error.hpp"
#include "minimax/minimax.h"
#include "verify.hpp"

struct mmx_config {
  mmx::RunConfig cfg;
};
struct mmx_result {
  mmx::RunOutcome outcome;
};
struct mmx_sweep {
  mmx::SweepResult sweep;
};

namespace {

thread_local std::string g_last_error;

mmx_status record(mmx_status s, const std::string& msg) {
  g_last_error = msg;
  return s;
}

// Runs body, translating exceptions into status codes.
template <class Body>
mmx_status guarded(Body&& body) {
  try {
    body();
    return MMX_OK;
  } catch (const mmx::Error& e) {
    return record(static_cast<mmx_status>(static_cast<int>(e.code())), e.what());
  } catch (const std::bad_alloc&) {
    return record(MMX_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return record(MMX_ERR_INTERNAL, e.what());
  } catch (...) {
    return record(MMX_ERR_INTERNAL, "unknown error");
  }
}

mmx_status null_arg(const char* what) { return record(MMX_ERR_INVALID_ARGUMENT, std::string(what) + " is NULL"); }

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

}  // namespace

extern "C" {

const char* mmx_version(void) { return "1.0.0"; }

const char* mmx_status_name(mmx_status status) {
  switch (status) {
    case MMX_OK: return "Ok";
    case MMX_ERR_INVALID_ARGUMENT: return "InvalidArgument";
    case MMX_ERR_INTERNAL: return "Internal";
    default: break;
  }
  const int v = static_cast<int>(status);
  if (v >= 1 && v <= static_cast<int>(mmx::ErrorCode::IoError)) return mmx::error_code_name(static_cast<mmx::ErrorCode>(v));
  return "Unknown";
}

const char* mmx_last_error(void) { return g_last_error.c_str(); }

void mmx_string_free(char* s) { std::free(s); }

mmx_status mmx_config_new(mmx_config** out) {
  if (!out) return null_arg("out");
  return guarded([&] { *out = new mmx_config{}; });
}

mmx_status mmx_config_parse(const char* text, mmx_config** out) {
  if (!text) return null_arg("text");
  if (!out) return null_arg("out");
  return guarded([&] { *out = new mmx_config{mmx::config_from_text(text)}; });
}

mmx_status mmx_config_load(const char* path, mmx_config** out) {
  if (!path) return null_arg("path");
  if (!out) return null_arg("out");
  return guarded([&] { *out = new mmx_config{mmx::load_config(path)}; });
}

mmx_status mmx_config_set(mmx_config* cfg, const char* key, const char* value) {
  if (!cfg) return null_arg("cfg");
  if (!key || !value) return null_arg("key or value");
  return guarded([&] { mmx::set_config_value(cfg->cfg, key, value); });
}

mmx_status mmx_config_to_text(const mmx_config* cfg, char** out) {
  if (!cfg) return null_arg("cfg");
  if (!out) return null_arg("out");
  return guarded([&] { *out = dup_string(mmx::config_to_text(cfg->cfg)); });
}

void mmx_config_free(mmx_config* cfg) { delete cfg; }

mmx_status mmx_solve(const mmx_config* cfg, mmx_result** out) {
  if (!cfg) return null_arg("cfg");
  if (!out) return null_arg("out");
  return guarded([&] { *out = new mmx_result{mmx::run_solve(cfg->cfg)}; });
}

mmx_status mmx_result_summary(const mmx_result* result, mmx_summary* out) {
  if (!result) return null_arg("result");
  if (!out) return null_arg("out");
  const mmx::RunOutcome& o = result->outcome;
  const mmx::OracleLedger& l = o.report.ledger;
  out->status = static_cast<mmx_run_status>(static_cast<int>(o.report.status));
  out->final_gap = o.final_gap;
  out->gap_certified = o.gap_certified ? 1 : 0;
  out->wall_ms = o.wall_ms;
  out->n_value = l.n_value;
  out->n_grad = l.n_grad;
  out->n_hess = l.n_hess;
  out->n_crn = l.n_crn;
  out->n_eg = l.n_eg;
  out->n_schedule_starts = l.n_schedule_starts;
  return MMX_OK;
}

mmx_status mmx_result_json(const mmx_result* result, char** out) {
  if (!result) return null_arg("result");
  if (!out) return null_arg("out");
  return guarded([&] { *out = dup_string(mmx::report_json(result->outcome)); });
}

int mmx_result_exit_code(const mmx_result* result) { return result ? mmx::outcome_exit_code(result->outcome) : 1; }

void mmx_result_free(mmx_result* result) { delete result; }

mmx_status mmx_sweep_run(const mmx_config* cfg, const char* eps_grid, int threads, mmx_sweep** out) {
  if (!cfg) return null_arg("cfg");
  if (!eps_grid) return null_arg("eps_grid");
  if (!out) return null_arg("out");
  return guarded([&] { *out = new mmx_sweep{mmx::run_sweep(cfg->cfg, mmx::parse_eps_grid(eps_grid), threads)}; });
}

mmx_status mmx_sweep_csv(const mmx_sweep* sweep, char** out) {
  if (!sweep) return null_arg("sweep");
  if (!out) return null_arg("out");
  return guarded([&] { *out = dup_string(mmx::sweep_csv(sweep->sweep)); });
}

mmx_status mmx_sweep_json(const mmx_sweep* sweep, char** out) {
  if (!sweep) return null_arg("sweep");
  if (!out) return null_arg("out");
  return guarded([&] { *out = dup_string(mmx::sweep_json(sweep->sweep)); });
}

size_t mmx_sweep_failed_rows(const mmx_sweep* sweep) {
  if (!sweep) return 0;
  size_t n = 0;
  for (const auto& r : sweep->sweep.rows) n += r.status == "Failed";
  return n;
}

mmx_status mmx_sweep_fit(const mmx_sweep* sweep, double* slope, double* intercept, double* ci_halfwidth) {
  if (!sweep) return null_arg("sweep");
  const auto& s = sweep->sweep;
  if (!s.fit) {
    const bool few = s.fit_error.find(mmx::error_code_name(mmx::ErrorCode::SlopeNeedsThreePoints)) == 0;
    return record(few ? MMX_ERR_SLOPE_NEEDS_THREE_POINTS : MMX_ERR_DEGENERATE_FIT, s.fit_error);
  }
  if (slope) *slope = s.fit->slope;
  if (intercept) *intercept = s.fit->intercept;
  if (ci_halfwidth) *ci_halfwidth = s.fit->ci_halfwidth;
  return MMX_OK;
}

void mmx_sweep_free(mmx_sweep* sweep) { delete sweep; }

mmx_status mmx_fit_slope(const double* x, const double* y, size_t n, double* slope, double* intercept,
                         double* ci_halfwidth) {
  if ((!x || !y) && n > 0) return null_arg("x or y");
  return guarded([&] {
    std::vector<std::pair<double, double>> pts;
    for (size_t i = 0; i < n; ++i) pts.emplace_back(x[i], y[i]);
    const mmx::SlopeFit f = mmx::fit_slope(pts);
    if (slope) *slope = f.slope;
    if (intercept) *intercept = f.intercept;
    if (ci_halfwidth) *ci_halfwidth = f.ci_halfwidth;
  });
}

mmx_status mmx_suite_criteria(const char* suite, int* ids, size_t cap, size_t* count) {
  if (!suite) return null_arg("suite");
  if (!ids && cap > 0) return null_arg("ids");
  return guarded([&] {
    const std::vector<int> v = mmx::suite_criteria(suite);
    for (size_t i = 0; i < v.size() && i < cap; ++i) ids[i] = v[i];
    if (count) *count = v.size();
  });
}

mmx_status mmx_verify_criterion(int id, int* passed, char** report) {
  if (!passed) return null_arg("passed");
  return guarded([&] {
    const mmx::CriterionResult r = mmx::run_criterion(id);
    *passed = r.pass ? 1 : 0;
    if (report) *report = dup_string(mmx::format_result(r));
  });
}

}  // extern "C"
