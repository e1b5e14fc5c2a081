#include "gap.hpp"

#include <cmath>

#include "error.hpp"

namespace mmx {

double default_gap_tol(const SaddleProblem& p) { return 1e-10 * std::max(1.0, p.L * p.diameter()); }

namespace {

BestResponseOptions gap_options(double tol, const Vector& start) {
  if (!(tol > 0.0)) fail(ErrorCode::BadParams, "gap tolerance must be > 0");
  BestResponseOptions opt;
  opt.value_tol = tol;
  opt.start = start;
  opt.max_epochs = 2000;
  opt.require_certificate = true;
  return opt;
}

}  // namespace

Vector best_response_y(const SaddleProblem& p, const Vector& xhat, double tol) {
  OracleLedger led;
  return best_response(p, Side::MaxOverY, xhat, gap_options(tol, p.dom_y.center()), led).point;
}

Vector best_response_x(const SaddleProblem& p, const Vector& yhat, double tol) {
  OracleLedger led;
  return best_response(p, Side::MinOverX, yhat, gap_options(tol, p.dom_x.center()), led).point;
}

GapMeasurement duality_gap(const SaddleProblem& p, const PairPoint& zhat, double tol) {
  if (zhat.x.size() != p.dx() || zhat.y.size() != p.dy()) fail(ErrorCode::DimensionMismatch, "gap point has wrong size");
  GapMeasurement m;
  m.inner_tol = tol;
  const BestResponse by = best_response(p, Side::MaxOverY, zhat.x, gap_options(tol, zhat.y), m.eval_ledger);
  const BestResponse bx = best_response(p, Side::MinOverX, zhat.y, gap_options(tol, zhat.x), m.eval_ledger);
  m.y_best = by.point;
  m.x_best = bx.point;
  m.raw_gap = by.value - bx.value;
  m.gap = std::max(0.0, m.raw_gap);
  m.certified = by.certified && bx.certified;
  return m;
}

}  // namespace mmx
