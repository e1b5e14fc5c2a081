#ifndef MMX_BENCH_HPP
#define MMX_BENCH_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "framework.hpp"

namespace mmx {

enum class Method { Npe, NpeRestart, Len, LenRestart, AipeRestart, MinimaxAipe };
const char* method_name(Method m);
Method parse_method(const std::string& s);

struct RunConfig {
  Family family = Family::CubicCoupled;
  int dx = 3;
  int dy = 3;
  std::uint64_t seed = 1;
  FamilyParams params;
  bool regularize = false;  // solve f + cubic regularizer to eps/3 and report the gap of f

  Method method = Method::NpeRestart;
  SaddleEngine engine = SaddleEngine::NpeRestart;  // inner engine of the AIPE methods
  DeltaMode mode = DeltaMode::Practical;
  int m = 1;

  double eps = 1e-4;
  std::uint64_t budget = 1000000;  // CRN calls
  std::vector<int> checkpoints;    // iteration counts tried in turn by npe and len; empty: 8, 16, ...
  std::string output;
  bool record_wall_time = true;    // false writes wall_ms = 0 so reports are reproducible byte for byte

  bool operator==(const RunConfig&) const = default;
};

// Sectioned key = value text; unknown keys and malformed values raise ConfigError.
std::string config_to_text(const RunConfig& cfg);
RunConfig config_from_text(const std::string& text);
RunConfig load_config(const std::string& path);
void save_config(const RunConfig& cfg, const std::string& path);
// Applies one "section.key" override, e.g. run.eps = 1e-5.
void set_config_value(RunConfig& cfg, const std::string& dotted_key, const std::string& value);

struct Checkpoint {
  int T = 0;
  double gap = 0.0;
  std::uint64_t n_crn = 0;
};

struct RunOutcome {
  RunConfig config;
  SolverReport report;
  std::optional<FrameworkStats> framework;
  std::vector<Checkpoint> checkpoints;
  double final_gap = 0.0;
  bool gap_certified = false;
  double wall_ms = 0.0;
};

RunOutcome run_solve(const RunConfig& cfg);
// Process exit code for an outcome: 2 when the budget ran out, otherwise 0.
int outcome_exit_code(const RunOutcome& out);

inline constexpr int kReportSchemaVersion = 1;
std::string report_json(const RunOutcome& out);

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  double ci_halfwidth = 0.0;  // 1.96 standard errors
};

// Ordinary least squares of y on x.
SlopeFit fit_slope(const std::vector<std::pair<double, double>>& points);

struct SweepRow {
  double eps = 0.0;
  std::uint64_t n_crn = 0, n_hess = 0, n_grad = 0, n_eg = 0;
  double wall_ms = 0.0;
  double final_gap = 0.0;
  std::string status;  // a RunStatus name, or "Failed"
  std::string error;
};

struct SweepResult {
  RunConfig config;
  std::vector<SweepRow> rows;  // eps descending
  std::optional<SlopeFit> fit; // log10 n_crn against log10(1/eps) over successful rows
  std::string fit_error;
};

// "a:b:logN" gives N log-spaced values from a to b inclusive; a comma list is taken as is.
std::vector<double> parse_eps_grid(const std::string& spec);
SweepResult run_sweep(const RunConfig& base, const std::vector<double>& eps_grid, int threads = 1);
std::string sweep_csv(const SweepResult& s);
std::string sweep_json(const SweepResult& s);

}  // namespace mmx

#endif
