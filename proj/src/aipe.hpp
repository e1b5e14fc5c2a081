#ifndef MMX_AIPE_HPP
#define MMX_AIPE_HPP

#include <functional>
#include <vector>

#include "oracle.hpp"

namespace mmx {

// Oracles for minimizing a convex h over a domain, each accurate to delta.
struct InexactOracleBundle {
  // Approximate cubic prox at zbar with weight gamma: lambda = gamma |z - zbar|.
  std::function<ProxCertificate(const Vector& zbar, double gamma)> prox;
  std::function<double(const Vector& z)> value;
  std::function<Vector(const Vector& z)> grad;
  double delta = 0.0;
  ProductDomain domain;
};

// Exact bundle backed by CRN(zbar, 2 gamma) on the operator's own gradient field.
InexactOracleBundle exact_bundle(ViOperator& op, double crn_tol = kDefaultCrnTol);

// Same, but the Jacobian snapshot is refreshed only every m prox calls.
InexactOracleBundle lazy_bundle(ViOperator& op, int m, double crn_tol = kDefaultCrnTol);

struct AipeConfig {
  int T = 1;
  int S = 1;
  double gamma = 1.0;
  double delta = 0.0;
  double lambda_floor = -1.0;  // negative: 1e-12 * gamma * diameter
  double stop_step = 0.0;      // > 0 enables the early exit on |z~ - zbar| <= stop_step
  bool record_trace = false;
};

struct AipeTraceRow {
  int stage = 0;
  int t = 0;
  bool accepted = true;
  double A_prev = 0.0;     // A_t
  double a_prime = 0.0;    // a'_{t+1}
  double A_prime = 0.0;    // A'_{t+1}
  double a = 0.0;          // a_{t+1}
  double A = 0.0;          // A_{t+1}
  double lambda = 0.0;     // lambda_{t+1}
  double lambda_prime = 0.0;       // lambda'_{t+1}
  double lambda_prime_next = 0.0;  // lambda'_{t+2}
  double interp = 1.0;     // gamma_{t+1} on the reject branch
  Vector z_prev, zbar, z_tilde, z_next, v_next;
};

struct AipeResult {
  Vector z_out;
  bool stationary = false;  // some stage stopped on a (near) fixed point of the prox
  int stages = 0;
  std::vector<AipeTraceRow> trace;
  std::vector<Vector> stage_outputs;
};

// Positive root of A + a = 2 lambda' a^2.
double solve_coefficient(double A, double lambda_prime);

// Epoch length ceil(c (gamma/mu)^(2/7)) for the restarted scheme.
int aipe_epoch_length(double gamma, double mu, double c);
extern const double kAipeRestartC;

AipeResult aipe(const InexactOracleBundle& oracles, const Vector& z0, const AipeConfig& cfg);
AipeResult aipe_restart(const InexactOracleBundle& oracles, const Vector& z0, const AipeConfig& cfg);

}  // namespace mmx

#endif
