#ifndef MMX_FRAMEWORK_HPP
#define MMX_FRAMEWORK_HPP

#include <cstdint>

#include "aipe.hpp"
#include "npe.hpp"

namespace mmx {

enum class DeltaMode { Theory, Practical };
enum class SaddleEngine { NpeRestart, LenRestart };
enum class MinEngine { AipeRestartExact, AipeRestartLazy };

const char* delta_mode_name(DeltaMode m);
DeltaMode parse_delta_mode(const std::string& s);

struct FrameworkConfig {
  double gamma = 1.0;  // outer regularization weight, distinct from the inner engines' own weights
  int m = 1;
  double zeta1 = 1e-3, zeta2 = 1e-5, zeta3 = 1e-7;
  DeltaMode delta_mode = DeltaMode::Practical;
  SaddleEngine saddle_engine = SaddleEngine::NpeRestart;
  MinEngine min_engine = MinEngine::AipeRestartExact;
  double oracle_delta = 1e-12;  // accuracy of the inexact value and gradient oracles
  double crn_tol = kDefaultCrnTol;
  bool theory_clamped = false;  // a theory-mode precision underflowed and was clamped
  std::uint64_t crn_budget = 1000000;
};

// Parameters for a problem already treated as uniformly convex-concave with its declared mu.
FrameworkConfig schedule_params(const SaddleProblem& p, double eps, DeltaMode mode, SaddleEngine engine, int m = 1);

// ---- surrogates -----------------------------------------------------------

struct SurrogateProblem {
  enum class Kind { RegularizedF, GFixedXbar, HFixedXbarYbar };
  Kind kind = Kind::RegularizedF;
  const SaddleProblem* base = nullptr;
  Vector center_x, center_y;
  double weight_x = 0.0, weight_y = 0.0;  // cubic coefficients
  SaddleProblem problem;                  // the realized objective with derived constants
};

// f + (mu_x/3)|x - x0|^3 - (mu_y/3)|y - y0|^3 with mu = eps/(2 D^3) per block.
SurrogateProblem regularize(const SaddleProblem& p, const PairPoint& z0, double eps);
// f + (gamma/3)|x - xbar|^3
SurrogateProblem surrogate_g(const SaddleProblem& p, const Vector& xbar, double gamma);
// f + (gamma/3)|x - xbar|^3 - (gamma/3)|y - ybar|^3
SurrogateProblem surrogate_h(const SaddleProblem& p, const Vector& xbar, const Vector& ybar, double gamma);

// ---- the triple loop ------------------------------------------------------

// Per-component CRN usage of a framework run; the parts sum to the ledger total.
struct FrameworkStats {
  std::uint64_t crn_saddle = 0;         // inner saddle engine
  std::uint64_t crn_min = 0;            // minimization engine runs
  std::uint64_t crn_best_response = 0;  // inexact value and gradient oracles
  std::uint64_t outer_prox_calls = 0;
  std::uint64_t middle_prox_calls = 0;
};

// Warm-start memory carried between nested calls.
struct FrameworkState {
  std::optional<Vector> last_inner_x;
  std::optional<Vector> last_middle_y;
  std::optional<Vector> last_best_y;
};

ProxCertificate iprox_psi(const SaddleProblem& p, const Vector& xbar, const Vector& ybar, double gamma,
                          const FrameworkConfig& cfg, OracleLedger& ledger, FrameworkStats* stats = nullptr,
                          FrameworkState* state = nullptr);
ProxCertificate iprox_phi(const SaddleProblem& p, const Vector& xbar, double gamma, const FrameworkConfig& cfg,
                          OracleLedger& ledger, FrameworkStats* stats = nullptr, FrameworkState* state = nullptr);

struct FrameworkReport {
  SolverReport report;
  FrameworkStats stats;
  PairPoint before_polish;  // (x^, y^) ahead of the final extragradient step
};

FrameworkReport minimax_aipe(const SaddleProblem& p, const PairPoint& z0, const FrameworkConfig& cfg);

// Two-loop ablation: AIPE-restart in x with each prox of Phi computed by the saddle engine on g directly.
FrameworkReport aipe_outer_only(const SaddleProblem& p, const PairPoint& z0, const FrameworkConfig& cfg);

// Practical exits stop a loop once a prox step is shorter than its precision zeta. Below about 1e-8 D the
// extra-Newton step size amplifies rounding in F and steps stop shrinking, hence the floor.
inline constexpr double kStepNoiseFloor = 1e-8;
double practical_step_tol(double zeta, double diameter);

// Stage count ceil(log2(D / zeta)), at least 1.
int restart_stages(double diameter, double zeta);

}  // namespace mmx

#endif
