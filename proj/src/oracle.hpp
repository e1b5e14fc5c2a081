#ifndef MMX_ORACLE_HPP
#define MMX_ORACLE_HPP

#include <cstdint>
#include <limits>
#include <memory>
#include <optional>

#include "problem.hpp"

namespace mmx {

struct OracleLedger {
  std::uint64_t n_value = 0;
  std::uint64_t n_grad = 0;
  std::uint64_t n_hess = 0;
  std::uint64_t n_crn = 0;
  std::uint64_t n_eg = 0;
  // Number of lazy schedules started from a fresh snapshot.
  std::uint64_t n_schedule_starts = 0;
  // CRN calls beyond this raise BudgetExhausted.
  std::uint64_t crn_budget = std::numeric_limits<std::uint64_t>::max();

  bool same_counts(const OracleLedger& o) const {
    return n_value == o.n_value && n_grad == o.n_grad && n_hess == o.n_hess && n_crn == o.n_crn &&
           n_eg == o.n_eg && n_schedule_starts == o.n_schedule_starts;
  }
};

// A monotone operator on a product domain whose oracle calls are charged to a ledger.
// For gradient fields of a convex function the value oracle is also available.
class ViOperator {
 public:
  ViOperator(ProductDomain domain, OracleLedger& ledger) : domain_(std::move(domain)), ledger_(&ledger) {}
  virtual ~ViOperator() = default;

  Index dim() const { return domain_.dim(); }
  const ProductDomain& domain() const { return domain_; }
  OracleLedger& ledger() const { return *ledger_; }

  Vector F(const Vector& z);
  Matrix jacobian(const Vector& z);
  double value(const Vector& z);

  virtual bool has_value() const { return false; }
  virtual double ell() const = 0;  // Lipschitz constant of F
  virtual double rho() const = 0;  // Lipschitz constant of the Jacobian
  virtual double mu() const = 0;   // cubic growth coefficient (0 if merely monotone)
  virtual const Vector* known_solution() const { return nullptr; }

 protected:
  virtual Vector F_impl(const Vector& z) const = 0;
  virtual Matrix jacobian_impl(const Vector& z) const = 0;
  virtual double value_impl(const Vector& z) const;

 private:
  ProductDomain domain_;
  OracleLedger* ledger_;
};

// F = (grad_x f, -grad_y f) over X x Y.
class SaddleVi final : public ViOperator {
 public:
  SaddleVi(const SaddleProblem& p, OracleLedger& ledger);
  double ell() const override { return p_->ell; }
  double rho() const override { return p_->rho; }
  double mu() const override { return std::min(p_->mu_x, p_->mu_y); }
  const Vector* known_solution() const override { return saddle_ ? &*saddle_ : nullptr; }
  const SaddleProblem& problem() const { return *p_; }

 protected:
  Vector F_impl(const Vector& z) const override;
  Matrix jacobian_impl(const Vector& z) const override;

 private:
  const SaddleProblem* p_;
  MonotoneOperatorView view_;
  std::optional<Vector> saddle_;
};

// Minimizing x -> f(x, y0) over X, or maximizing y -> f(x0, y) over Y (as minimization of -f).
class SliceVi final : public ViOperator {
 public:
  enum class Block { MinOverX, MaxOverY };
  SliceVi(const SaddleProblem& p, Block block, Vector fixed, OracleLedger& ledger);
  bool has_value() const override { return true; }
  double ell() const override { return p_->ell; }
  double rho() const override { return p_->rho; }
  double mu() const override { return block_ == Block::MinOverX ? p_->mu_x : p_->mu_y; }

 protected:
  Vector F_impl(const Vector& z) const override;
  Matrix jacobian_impl(const Vector& z) const override;
  double value_impl(const Vector& z) const override;

 private:
  const SaddleProblem* p_;
  Block block_;
  Vector fixed_;
};

class SmoothFunction {
 public:
  virtual ~SmoothFunction() = default;
  virtual Index dim() const = 0;
  virtual double value(const Vector& z) const = 0;
  virtual Vector gradient(const Vector& z) const = 0;
  virtual Matrix hessian(const Vector& z) const = 0;
};

// (1/2)(z-c)'P(z-c) + (mu/3)|z-c|^3 + (1/4) sum_i (q_i'(z-c))^4
class CubicQuarticFunction final : public SmoothFunction {
 public:
  CubicQuarticFunction(Vector c, double mu, Matrix P = Matrix(), Matrix quartic_rows = Matrix());
  Index dim() const override { return c_.size(); }
  double value(const Vector& z) const override;
  Vector gradient(const Vector& z) const override;
  Matrix hessian(const Vector& z) const override;
  const Vector& minimizer() const { return c_; }

 private:
  Vector c_;
  double mu_;
  Matrix P_, q_;
};

// Gradient field of an explicit convex function.
class FunctionVi final : public ViOperator {
 public:
  FunctionVi(std::shared_ptr<const SmoothFunction> h, const Domain& dom, double ell, double rho, double mu,
             OracleLedger& ledger, std::optional<Vector> minimizer = std::nullopt);
  bool has_value() const override { return true; }
  double ell() const override { return ell_; }
  double rho() const override { return rho_; }
  double mu() const override { return mu_; }
  const Vector* known_solution() const override { return minimizer_ ? &*minimizer_ : nullptr; }

 protected:
  Vector F_impl(const Vector& z) const override { return h_->gradient(z); }
  Matrix jacobian_impl(const Vector& z) const override { return h_->hessian(z); }
  double value_impl(const Vector& z) const override { return h_->value(z); }

 private:
  std::shared_ptr<const SmoothFunction> h_;
  double ell_, rho_, mu_;
  std::optional<Vector> minimizer_;
};

// ---- CRN oracle -----------------------------------------------------------

struct ProxCertificate {
  Vector z;
  Vector u;              // normal-cone element at z (zero in the interior)
  double lambda = 0.0;   // regularization weight at z
  double residual = 0.0; // self-reported residual of the subproblem solve
};

inline constexpr double kDefaultCrnTol = 1e-10;
inline constexpr int kModelEgCap = 100000;

// Solves the cubic-regularized linearized VI at zbar. lambda = (gamma/2)|z - zbar|.
ProxCertificate crn_step(ViOperator& op, const Vector& zbar, double gamma, double tol = kDefaultCrnTol);

// Caches the Jacobian at the most recent snapshot point (bitwise identity).
class JacobianSnapshot {
 public:
  const Matrix& at(ViOperator& op, const Vector& zss);
  bool holds(const Vector& zss) const;
  // Forces the next lookup to evaluate, even at a bitwise-equal point (new schedule slot).
  void invalidate() { point_.reset(); }

 private:
  std::optional<Vector> point_;
  Matrix J_;
};

ProxCertificate lazy_crn_step(ViOperator& op, const Vector& zbar, const Vector& zsnapshot, JacobianSnapshot& cache,
                              double gamma, double tol = kDefaultCrnTol);

// Model solve shared by both oracles; exposed for tests.
ProxCertificate solve_cubic_model(const Vector& zbar, const Vector& Fbar, const Matrix& J, double gamma,
                                  const ProductDomain& domain, double tol);

// ---- extragradient --------------------------------------------------------

struct EgResult {
  Vector z_half;
  Vector z1;
  Vector c1;  // (z0 - z1)/eta - F(z_half), a normal-cone element at z1
};

EgResult eg_step(ViOperator& op, const Vector& z0, double eta);

// The constant multiplying |z0 - z*| in the extragradient certificate bound.
double eg_bound_factor(double eta, double ell);

}  // namespace mmx

#endif
