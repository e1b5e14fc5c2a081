#include "npe.hpp"

#include <cmath>

#include "error.hpp"

namespace mmx {

const double kNpeRestartC = 2.0;
const double kLenRestartC = 2.0;

const char* status_name(RunStatus s) {
  switch (s) {
    case RunStatus::Converged: return "Converged";
    case RunStatus::BudgetExhausted: return "BudgetExhausted";
    case RunStatus::Stationary: return "Stationary";
  }
  return "Unknown";
}

int npe_epoch_length(double gamma, double mu, double c) {
  if (!(gamma > 0.0) || !(mu > 0.0) || !(c > 0.0)) fail(ErrorCode::BadParams, "epoch length needs gamma, mu, c > 0");
  const double t = std::ceil(c * std::pow(gamma / mu, 2.0 / 3.0));
  if (t > 1e9) fail(ErrorCode::BadParams, "epoch length overflow");
  return std::max(1, static_cast<int>(t));
}

int len_epoch_length(double gamma, double mu, int m, double c) {
  if (!(gamma > 0.0) || !(mu > 0.0) || !(c > 0.0) || m < 1) fail(ErrorCode::BadParams, "epoch length parameters");
  const double t = std::ceil(c * (m + std::pow(gamma / mu, 2.0 / 3.0)));
  if (t > 1e9) fail(ErrorCode::BadParams, "epoch length overflow");
  return std::max(1, static_cast<int>(t));
}

namespace {

void check_config(const ViOperator& op, const Vector& z0, const NpeConfig& cfg) {
  if (z0.size() != op.dim()) fail(ErrorCode::DimensionMismatch, "start point has wrong size");
  if (!(cfg.gamma > 0.0) || !std::isfinite(cfg.gamma)) fail(ErrorCode::BadParams, "gamma must be > 0");
  if (cfg.T < 0 || cfg.S < 0 || cfg.m < 1) fail(ErrorCode::BadParams, "T, S >= 0 and m >= 1 required");
  if (!op.domain().contains(z0, 1e-12)) fail(ErrorCode::BadParams, "start point is not feasible");
}

double stationarity_threshold(const ViOperator& op, const NpeConfig& cfg) {
  return cfg.stationarity_tol >= 0.0 ? cfg.stationarity_tol : 1e-13 * op.domain().diameter();
}

// One run of T extra-Newton iterations. lazy selects the snapshot oracle.
SolverReport extra_newton(ViOperator& op, const Vector& z0, const NpeConfig& cfg, bool lazy,
                          std::int64_t iteration_offset) {
  SolverReport rep;
  rep.z_out = z0;
  rep.status = RunStatus::Converged;
  const double stol = stationarity_threshold(op, cfg);
  const Vector* sol = op.known_solution();
  const auto& dom = op.domain();

  JacobianSnapshot cache;
  Vector snapshot;
  if (lazy && cfg.T > 0) ++op.ledger().n_schedule_starts;

  Vector z = z0;
  Vector weighted = Vector::Zero(z0.size());
  double eta_sum = 0.0;
  for (int t = 0; t < cfg.T; ++t) {
    ProxCertificate cert;
    if (lazy) {
      if (t % cfg.m == 0) {
        snapshot = z;
        cache.invalidate();
      }
      cert = lazy_crn_step(op, z, snapshot, cache, cfg.gamma, cfg.crn_tol);
    } else {
      cert = crn_step(op, z, cfg.gamma, cfg.crn_tol);
    }
    const double step = (cert.z - z).norm();
    TraceRow row;
    row.iteration = iteration_offset + t;
    row.lambda = cert.lambda;
    if (sol) row.dist = (cert.z - *sol).norm();
    if (cfg.record_points) {
      row.z = z;
      row.z_half = cert.z;
    }
    if (step <= stol) {
      row.n_crn = op.ledger().n_crn;
      if (cfg.record_trace) rep.trace.push_back(std::move(row));
      rep.z_out = cert.z;
      rep.status = RunStatus::Stationary;
      rep.ledger = op.ledger();
      return rep;
    }
    const double eta = 1.0 / (2.0 * cfg.gamma * step);
    const Vector Fh = op.F(cert.z);
    weighted += eta * cert.z;
    eta_sum += eta;
    z = dom.project(z - eta * Fh);
    row.eta = eta;
    row.n_crn = op.ledger().n_crn;
    if (cfg.record_trace) rep.trace.push_back(std::move(row));
  }
  if (eta_sum > 0.0) rep.z_out = weighted / eta_sum;
  rep.ledger = op.ledger();
  return rep;
}

SolverReport restarted(ViOperator& op, const Vector& z0, const NpeConfig& cfg, bool lazy) {
  SolverReport rep;
  rep.z_out = z0;
  rep.ledger = op.ledger();
  Vector z = z0;
  std::int64_t offset = 0;
  for (int s = 0; s < cfg.S; ++s) {
    SolverReport epoch = extra_newton(op, z, cfg, lazy, offset);
    offset += cfg.T;
    ++rep.epochs;
    for (auto& row : epoch.trace) rep.trace.push_back(std::move(row));
    z = epoch.z_out;
    rep.z_out = z;
    rep.ledger = epoch.ledger;
    if (epoch.status == RunStatus::Stationary) {
      rep.status = RunStatus::Stationary;
      break;
    }
  }
  return rep;
}

template <typename Fn>
SolverReport guarded(ViOperator& op, const Vector& z0, const NpeConfig& cfg, Fn&& body) {
  check_config(op, z0, cfg);
  if (!cfg.stop_on_budget) return body();
  try {
    return body();
  } catch (const Error& e) {
    if (e.code() != ErrorCode::BudgetExhausted) throw;
    SolverReport rep;
    rep.z_out = z0;
    rep.status = RunStatus::BudgetExhausted;
    rep.ledger = op.ledger();
    return rep;
  }
}

}  // namespace

SolverReport npe(ViOperator& op, const Vector& z0, const NpeConfig& cfg) {
  return guarded(op, z0, cfg, [&] { return extra_newton(op, z0, cfg, false, 0); });
}

SolverReport len(ViOperator& op, const Vector& z0, const NpeConfig& cfg) {
  return guarded(op, z0, cfg, [&] { return extra_newton(op, z0, cfg, true, 0); });
}

SolverReport npe_restart(ViOperator& op, const Vector& z0, const NpeConfig& cfg) {
  return guarded(op, z0, cfg, [&] { return restarted(op, z0, cfg, false); });
}

SolverReport len_restart(ViOperator& op, const Vector& z0, const NpeConfig& cfg) {
  return guarded(op, z0, cfg, [&] { return restarted(op, z0, cfg, true); });
}

}  // namespace mmx
