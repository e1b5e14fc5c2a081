#include "aipe.hpp"

#include <cmath>
#include <cstring>
#include <memory>

#include "error.hpp"

namespace mmx {

const double kAipeRestartC = 1.0;

double solve_coefficient(double A, double lambda_prime) {
  if (!(lambda_prime > 0.0) || !std::isfinite(lambda_prime)) fail(ErrorCode::BadParams, "lambda' must be > 0");
  if (!(A >= 0.0)) fail(ErrorCode::BadParams, "A must be >= 0");
  return (1.0 + std::sqrt(1.0 + 8.0 * lambda_prime * A)) / (4.0 * lambda_prime);
}

int aipe_epoch_length(double gamma, double mu, double c) {
  if (!(gamma > 0.0) || !(mu > 0.0) || !(c > 0.0)) fail(ErrorCode::BadParams, "epoch length needs gamma, mu, c > 0");
  const double t = std::ceil(c * std::pow(gamma / mu, 2.0 / 7.0));
  if (t > 1e9) fail(ErrorCode::BadParams, "epoch length overflow");
  return std::max(1, static_cast<int>(t));
}

InexactOracleBundle exact_bundle(ViOperator& op, double crn_tol) {
  if (!op.has_value()) fail(ErrorCode::BadParams, "AIPE needs an operator with a value oracle");
  InexactOracleBundle b;
  b.domain = op.domain();
  b.prox = [&op, crn_tol](const Vector& zbar, double gamma) { return crn_step(op, zbar, 2.0 * gamma, crn_tol); };
  b.value = [&op](const Vector& z) { return op.value(z); };
  b.grad = [&op](const Vector& z) { return op.F(z); };
  return b;
}

InexactOracleBundle lazy_bundle(ViOperator& op, int m, double crn_tol) {
  if (m < 1) fail(ErrorCode::BadParams, "m must be >= 1");
  InexactOracleBundle b = exact_bundle(op, crn_tol);
  struct State {
    JacobianSnapshot cache;
    Vector snapshot;
    long calls = 0;
  };
  auto st = std::make_shared<State>();
  b.prox = [&op, m, crn_tol, st](const Vector& zbar, double gamma) {
    if (st->calls % m == 0) {
      st->snapshot = zbar;
      st->cache.invalidate();
      if (st->calls == 0) ++op.ledger().n_schedule_starts;
    }
    ++st->calls;
    return lazy_crn_step(op, zbar, st->snapshot, st->cache, 2.0 * gamma, crn_tol);
  };
  return b;
}

namespace {

bool bitwise_equal(const Vector& a, const Vector& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), sizeof(double) * a.size()) == 0;
}

void check_lambda(double l) {
  if (!(l > 0.0) || !std::isfinite(l) || l < 1e-300 || l > 1e300) fail(ErrorCode::NoProgress, "lambda' left machine range");
}

AipeResult run_stage(const InexactOracleBundle& o, const Vector& z0, const AipeConfig& cfg, int stage) {
  AipeResult res;
  res.stages = 1;
  const ProductDomain& dom = o.domain;
  const double gamma = cfg.gamma;
  const double floor = cfg.lambda_floor > 0.0 ? cfg.lambda_floor : 1e-12 * gamma * dom.diameter();

  Vector v = z0, z = z0;
  double A = 0.0;
  std::vector<Vector> candidates{z0};

  ProxCertificate cert = o.prox(z0, gamma);
  Vector zbar = z0;
  double lambda = gamma * (cert.z - zbar).norm();
  double lambda_prime = lambda;
  const double step0 = (cert.z - zbar).norm();
  if (lambda <= floor || (cfg.stop_step > 0.0 && step0 <= cfg.stop_step)) {
    res.z_out = cert.z;
    res.stationary = true;
    return res;
  }

  for (int t = 0; t < cfg.T; ++t) {
    check_lambda(lambda_prime);
    const double a_prime = solve_coefficient(A, lambda_prime);
    const double A_prime = A + a_prime;
    zbar = (A / A_prime) * z + (a_prime / A_prime) * v;
    if (t > 0) {
      cert = o.prox(zbar, gamma);
      const double step = (cert.z - zbar).norm();
      lambda = gamma * step;
      if (lambda <= floor || (cfg.stop_step > 0.0 && step <= cfg.stop_step)) {
        res.z_out = cert.z;
        res.stationary = true;
        return res;
      }
    }

    AipeTraceRow row;
    row.stage = stage;
    row.t = t;
    row.A_prev = A;
    row.a_prime = a_prime;
    row.A_prime = A_prime;
    row.lambda = lambda;
    row.lambda_prime = lambda_prime;
    if (cfg.record_trace) {
      row.z_prev = z;
      row.zbar = zbar;
      row.z_tilde = cert.z;
    }

    double a;
    if (lambda <= lambda_prime) {
      a = a_prime;
      A = A_prime;
      z = cert.z;
      lambda_prime *= 0.5;
    } else {
      const double g = lambda_prime / lambda;
      a = g * a_prime;
      const double A_next = A + a;
      z = ((1.0 - g) * A / A_next) * z + (g * A_prime / A_next) * cert.z;
      A = A_next;
      lambda_prime *= 2.0;
      row.accepted = false;
      row.interp = g;
    }
    const Vector g_next = o.grad(cert.z);
    v = dom.project(v - a * (g_next + cert.u));

    candidates.push_back(cert.z);
    if (!bitwise_equal(z, cert.z)) candidates.push_back(z);

    row.a = a;
    row.A = A;
    row.lambda_prime_next = lambda_prime;
    if (cfg.record_trace) {
      row.z_next = z;
      row.v_next = v;
      res.trace.push_back(std::move(row));
    }
  }

  // Best candidate by the zeroth-order oracle; the first minimum wins.
  double best = std::numeric_limits<double>::infinity();
  for (const Vector& c : candidates) {
    const double h = o.value(c);
    if (h < best) {
      best = h;
      res.z_out = c;
    }
  }
  return res;
}

void check_inputs(const InexactOracleBundle& o, const Vector& z0, const AipeConfig& cfg) {
  if (!o.prox || !o.value || !o.grad) fail(ErrorCode::BadParams, "incomplete oracle bundle");
  if (z0.size() != o.domain.dim()) fail(ErrorCode::DimensionMismatch, "start point has wrong size");
  if (!(cfg.gamma > 0.0) || !std::isfinite(cfg.gamma)) fail(ErrorCode::BadParams, "gamma must be > 0");
  if (cfg.T < 0 || cfg.S < 0 || cfg.delta < 0.0) fail(ErrorCode::BadParams, "T, S, delta must be >= 0");
  if (!o.domain.contains(z0, 1e-12)) fail(ErrorCode::BadParams, "start point is not feasible");
}

}  // namespace

AipeResult aipe(const InexactOracleBundle& oracles, const Vector& z0, const AipeConfig& cfg) {
  check_inputs(oracles, z0, cfg);
  if (cfg.T == 0) {
    AipeResult r;
    r.z_out = z0;
    return r;
  }
  return run_stage(oracles, z0, cfg, 0);
}

AipeResult aipe_restart(const InexactOracleBundle& oracles, const Vector& z0, const AipeConfig& cfg) {
  check_inputs(oracles, z0, cfg);
  AipeResult res;
  res.z_out = z0;
  if (cfg.T == 0) return res;
  for (int s = 0; s < cfg.S; ++s) {
    AipeResult stage = run_stage(oracles, res.z_out, cfg, s);
    ++res.stages;
    res.z_out = stage.z_out;
    res.stage_outputs.push_back(stage.z_out);
    for (auto& row : stage.trace) res.trace.push_back(std::move(row));
    if (stage.stationary) {
      res.stationary = true;
      break;
    }
  }
  return res;
}

}  // namespace mmx
