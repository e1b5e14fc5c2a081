#ifndef MMX_INEXACT_HPP
#define MMX_INEXACT_HPP

#include <limits>
#include <optional>

#include "oracle.hpp"

namespace mmx {

enum class Side { MinOverX, MaxOverY };

struct BestResponseOptions {
  double value_tol = 1e-10;  // bound on |f(., best) - optimal value|
  double dist_tol = std::numeric_limits<double>::infinity();  // bound on distance to the best-response set
  std::optional<Vector> start;
  int max_epochs = 400;
  bool require_certificate = false;  // throw NoConvergence instead of returning an uncertified point
  int hessian_period = 1;            // > 1 runs lazy epochs that refresh the Hessian every that many steps
};

struct BestResponse {
  Vector point;
  double value = 0.0;           // f at (fixed, point) in the original orientation
  double value_bound = 0.0;     // certified optimality gap of value
  double dist_bound = 0.0;      // certified distance bound (infinite when no growth is known)
  bool certified = false;       // both requested tolerances were met
};

// Optimizes one block of f with the other held fixed. Affine slices over balls and boxes are solved in
// closed form; otherwise restarted NPE epochs run on the slice until the certificate meets the tolerances.
BestResponse best_response(const SaddleProblem& p, Side side, const Vector& fixed, const BestResponseOptions& opt,
                           OracleLedger& ledger);

// sup over the domain of <v, q>
double support(const Domain& d, const Vector& v);
// argmax over the domain of <v, q>; ties resolve to the projection of tie_point
Vector linear_maximizer(const Domain& d, const Vector& v, const Vector& tie_point);

// Phi(x) = max_y f(x, y) and its Danskin gradient, both to accuracy delta. Without certify_grad only the value
// accuracy is certified and the gradient is taken at the returned best response.
struct PhiEstimate {
  double value = 0.0;
  Vector grad;
  Vector y;
  bool certified = false;
};

double inexact_value_Phi(const SaddleProblem& p, const Vector& x, double delta, OracleLedger& ledger);
Vector inexact_grad_Phi(const SaddleProblem& p, const Vector& x, double delta, OracleLedger& ledger);
PhiEstimate estimate_Phi(const SaddleProblem& p, const Vector& x, double delta, bool want_grad, OracleLedger& ledger,
                         const std::optional<Vector>& warm = std::nullopt, bool certify_grad = true,
                         int hessian_period = 1);

}  // namespace mmx

#endif
