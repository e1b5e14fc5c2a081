#ifndef MMX_GAP_HPP
#define MMX_GAP_HPP

#include "inexact.hpp"

namespace mmx {

struct GapMeasurement {
  double gap = 0.0;      // clamped at 0
  double raw_gap = 0.0;
  Vector y_best;
  Vector x_best;
  double inner_tol = 0.0;
  bool certified = false;
  OracleLedger eval_ledger;
};

// 1e-10 times the natural value scale L * D.
double default_gap_tol(const SaddleProblem& p);

Vector best_response_y(const SaddleProblem& p, const Vector& xhat, double tol);
Vector best_response_x(const SaddleProblem& p, const Vector& yhat, double tol);
GapMeasurement duality_gap(const SaddleProblem& p, const PairPoint& zhat, double tol);

}  // namespace mmx

#endif
