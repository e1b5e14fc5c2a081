#ifndef MMX_NPE_HPP
#define MMX_NPE_HPP

#include <cstdint>
#include <limits>
#include <vector>

#include "oracle.hpp"

namespace mmx {

enum class RunStatus { Converged, BudgetExhausted, Stationary };
const char* status_name(RunStatus s);

struct TraceRow {
  std::int64_t iteration = 0;
  double dist = std::numeric_limits<double>::quiet_NaN();  // distance to the known solution
  double gap = std::numeric_limits<double>::quiet_NaN();
  double lambda = 0.0;
  double eta = 0.0;
  std::uint64_t n_crn = 0;  // cumulative CRN count after this row
  Vector z;       // z_t (only when points are recorded)
  Vector z_half;  // z_{t+1/2}
};

struct SolverReport {
  Vector z_out;
  RunStatus status = RunStatus::Converged;
  OracleLedger ledger;
  std::vector<TraceRow> trace;
  int epochs = 0;
};

struct NpeConfig {
  int T = 1;
  double gamma = 1.0;
  int m = 1;  // Hessian reuse period for the lazy variants
  int S = 1;
  double stationarity_tol = -1.0;  // negative: 1e-13 * diameter
  double crn_tol = kDefaultCrnTol;
  bool record_points = false;
  bool record_trace = true;
  bool stop_on_budget = false;  // report BudgetExhausted instead of throwing
};

// Epoch lengths for the restart schemes. c is the calibrated constant.
int npe_epoch_length(double gamma, double mu, double c);
int len_epoch_length(double gamma, double mu, int m, double c);

// Frozen calibration results (see tools/calibrate.cpp).
extern const double kNpeRestartC;
extern const double kLenRestartC;

SolverReport npe(ViOperator& op, const Vector& z0, const NpeConfig& cfg);
SolverReport len(ViOperator& op, const Vector& z0, const NpeConfig& cfg);
SolverReport npe_restart(ViOperator& op, const Vector& z0, const NpeConfig& cfg);
SolverReport len_restart(ViOperator& op, const Vector& z0, const NpeConfig& cfg);

}  // namespace mmx

#endif
