#include "oracle.hpp"

#include <cmath>
#include <cstring>

#include "error.hpp"

namespace mmx {

// ---- counted operators ----------------------------------------------------

Vector ViOperator::F(const Vector& z) {
  if (z.size() != dim()) fail(ErrorCode::DimensionMismatch, "operator argument has wrong size");
  ++ledger_->n_grad;
  Vector out = F_impl(z);
  require_finite(out, "operator value");
  return out;
}

Matrix ViOperator::jacobian(const Vector& z) {
  if (z.size() != dim()) fail(ErrorCode::DimensionMismatch, "operator argument has wrong size");
  ++ledger_->n_hess;
  Matrix J = jacobian_impl(z);
  require_finite(J, "operator jacobian");
  return J;
}

double ViOperator::value(const Vector& z) {
  if (z.size() != dim()) fail(ErrorCode::DimensionMismatch, "operator argument has wrong size");
  ++ledger_->n_value;
  const double v = value_impl(z);
  if (!std::isfinite(v)) fail(ErrorCode::NonFiniteValue, "function value is not finite");
  return v;
}

double ViOperator::value_impl(const Vector&) const {
  fail(ErrorCode::BadParams, "this operator has no value oracle");
}

SaddleVi::SaddleVi(const SaddleProblem& p, OracleLedger& ledger)
    : ViOperator(p.joint_domain(), ledger), p_(&p), view_(p) {
  if (p.known_saddle) saddle_ = p.known_saddle->joined();
}

Vector SaddleVi::F_impl(const Vector& z) const { return view_.F(z); }
Matrix SaddleVi::jacobian_impl(const Vector& z) const { return view_.jacobian(z); }

SliceVi::SliceVi(const SaddleProblem& p, Block block, Vector fixed, OracleLedger& ledger)
    : ViOperator(ProductDomain({block == Block::MinOverX ? p.dom_x : p.dom_y}), ledger),
      p_(&p), block_(block), fixed_(std::move(fixed)) {
  const Index want = block == Block::MinOverX ? p.dy() : p.dx();
  if (fixed_.size() != want) fail(ErrorCode::DimensionMismatch, "fixed block has wrong size");
}

Vector SliceVi::F_impl(const Vector& z) const {
  if (block_ == Block::MinOverX) return p_->grad(z, fixed_).x;
  return -p_->grad(fixed_, z).y;
}

Matrix SliceVi::jacobian_impl(const Vector& z) const {
  if (block_ == Block::MinOverX) return p_->hess(z, fixed_).xx;
  return -p_->hess(fixed_, z).yy;
}

double SliceVi::value_impl(const Vector& z) const {
  if (block_ == Block::MinOverX) return p_->value(z, fixed_);
  return -p_->value(fixed_, z);
}

CubicQuarticFunction::CubicQuarticFunction(Vector c, double mu, Matrix P, Matrix quartic_rows)
    : c_(std::move(c)), mu_(mu), P_(std::move(P)), q_(std::move(quartic_rows)) {
  const Index n = c_.size();
  if (P_.size() == 0) P_ = Matrix::Zero(n, n);
  if (q_.size() == 0) q_ = Matrix::Zero(0, n);
  if (P_.rows() != n || P_.cols() != n || q_.cols() != n) fail(ErrorCode::DimensionMismatch, "function data sizes");
  if (mu_ < 0.0) fail(ErrorCode::BadParams, "mu must be >= 0");
}

double CubicQuarticFunction::value(const Vector& z) const {
  const Vector u = z - c_;
  double v = 0.5 * u.dot(P_ * u) + cubic_value(u, mu_);
  if (q_.rows() > 0) v += 0.25 * (q_ * u).array().pow(4).sum();
  return v;
}

Vector CubicQuarticFunction::gradient(const Vector& z) const {
  const Vector u = z - c_;
  Vector g = P_ * u + cubic_gradient(u, mu_);
  if (q_.rows() > 0) g.noalias() += q_.transpose() * (q_ * u).array().cube().matrix();
  return g;
}

Matrix CubicQuarticFunction::hessian(const Vector& z) const {
  const Vector u = z - c_;
  Matrix H = P_ + cubic_hessian(u, mu_);
  if (q_.rows() > 0) {
    const Vector t = q_ * u;
    H.noalias() += q_.transpose() * (3.0 * t.array().square()).matrix().asDiagonal() * q_;
  }
  return H;
}

FunctionVi::FunctionVi(std::shared_ptr<const SmoothFunction> h, const Domain& dom, double ell, double rho, double mu,
                       OracleLedger& ledger, std::optional<Vector> minimizer)
    : ViOperator(ProductDomain({dom}), ledger), h_(std::move(h)), ell_(ell), rho_(rho), mu_(mu),
      minimizer_(std::move(minimizer)) {
  if (h_->dim() != dom.dim()) fail(ErrorCode::DimensionMismatch, "function and domain sizes differ");
}

// ---- CRN model solve ------------------------------------------------------

namespace {

struct ShiftedStep {
  Vector s;
  double norm = 0.0;
  double phi = 0.0;  // (gamma/2)|s| - lambda
  double lambda = 0.0;
};

// The shift must also be accurate relative to itself: near a solution |s| is tiny and an absolute
// model tolerance alone would leave lambda (and any step size built from it) wrong by tol/|s|.
constexpr double kCrnRelTol = 1e-8;

bool crn_accurate(const ShiftedStep& st, double tol) {
  const double r = std::abs(st.phi);
  return r * st.norm <= tol && r <= kCrnRelTol * st.lambda;
}

ShiftedStep shifted_step(const Matrix& J, double lambda, const Vector& Fbar, double gamma) {
  ShiftedStep out;
  out.s = solve_shifted(J, lambda, -Fbar);
  out.norm = out.s.norm();
  out.phi = 0.5 * gamma * out.norm - lambda;
  out.lambda = lambda;
  return out;
}

// Model operator M(z) = Fbar + J(z - zbar) + (gamma/2)|z - zbar|(z - zbar).
Vector model_operator(const Vector& z, const Vector& zbar, const Vector& Fbar, const Matrix& J, double gamma) {
  const Vector s = z - zbar;
  return Fbar + J * s + (0.5 * gamma * s.norm()) * s;
}

// Projected extragradient with a backtracking step on the model operator.
ProxCertificate solve_model_constrained(const Vector& zbar, const Vector& Fbar, const Matrix& J, double gamma,
                                        const ProductDomain& dom, double tol, const Vector& start) {
  const double lip = J.norm() + gamma * dom.diameter();
  double eta = lip > 0.0 ? 1.0 / lip : 1.0;
  Vector z = dom.project(start);
  for (int k = 0; k < kModelEgCap; ++k) {
    const Vector Mz = model_operator(z, zbar, Fbar, J, gamma);
    Vector zh, Mh;
    for (int shrink = 0;; ++shrink) {
      zh = dom.project(z - eta * Mz);
      Mh = model_operator(zh, zbar, Fbar, J, gamma);
      if (eta * (Mh - Mz).norm() <= 0.9 * (zh - z).norm() || shrink > 60) break;
      eta *= 0.5;
    }
    const Vector z1 = dom.project(z - eta * Mh);
    const Vector c1 = (z - z1) / eta - Mh;
    const double r = (model_operator(z1, zbar, Fbar, J, gamma) + c1).norm();
    if (r <= tol) {
      ProxCertificate cert;
      cert.lambda = 0.5 * gamma * (z1 - zbar).norm();
      cert.z = z1;
      cert.u = c1;
      cert.residual = r;
      return cert;
    }
    z = z1;
    eta *= 1.2;
  }
  fail(ErrorCode::NoConvergence, "constrained CRN subproblem did not reach tolerance");
}

}  // namespace

ProxCertificate solve_cubic_model(const Vector& zbar, const Vector& Fbar, const Matrix& J, double gamma,
                                  const ProductDomain& dom, double tol) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) fail(ErrorCode::BadParams, "CRN needs gamma > 0");
  if (!(tol > 0.0)) fail(ErrorCode::BadParams, "CRN needs tol > 0");
  const Index n = zbar.size();
  if (Fbar.size() != n || J.rows() != n || J.cols() != n || dom.dim() != n) {
    fail(ErrorCode::DimensionMismatch, "CRN model sizes");
  }

  ProxCertificate cert;
  if (Fbar.isZero(0.0)) {
    cert.z = zbar;
    cert.u = Vector::Zero(n);
    return cert;
  }

  // Interior candidate: root of phi(lambda) = (gamma/2)|s(lambda)| - lambda.
  std::optional<ShiftedStep> root;
  bool bracket_ok = true;
  double lo = 0.0;
  double hi = std::sqrt(0.5 * gamma * Fbar.norm());
  // A singular shift means the step is unbounded there, so it behaves like phi > 0.
  auto try_step = [&](double lam) -> std::optional<ShiftedStep> {
    try {
      return shifted_step(J, lam, Fbar, gamma);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::SingularSystem) throw;
      return std::nullopt;
    }
  };
  std::optional<ShiftedStep> at_hi = try_step(hi);
  for (int k = 0; !at_hi || at_hi->phi > 0.0; ++k) {
    if (k > 200) {
      bracket_ok = false;
      break;
    }
    lo = hi;
    hi *= 2.0;
    at_hi = try_step(hi);
  }
  if (bracket_ok) {
    const int cap = 10 * static_cast<int>(std::ceil(std::log2(1.0 / std::min(tol, 0.5))));
    ShiftedStep best = *at_hi;
    for (int it = 0; it < cap; ++it) {
      if (crn_accurate(best, tol)) {
        root = best;
        break;
      }
      const double mid = 0.5 * (lo + hi);
      if (!(mid > lo && mid < hi)) {  // bracket at floating-point resolution
        root = best;
        break;
      }
      ShiftedStep at_mid;
      try {
        at_mid = shifted_step(J, mid, Fbar, gamma);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::SingularSystem) throw;
        lo = mid;
        continue;
      }
      if (at_mid.phi > 0.0) {
        lo = mid;
      } else {
        hi = mid;
      }
      if (std::abs(at_mid.phi) * at_mid.norm <= std::abs(best.phi) * best.norm) best = at_mid;
    }
    if (!root) fail(ErrorCode::NoConvergence, "CRN bisection hit its iteration cap");
  }

  if (root) {
    const Vector z = zbar + root->s;
    if (dom.contains(z)) {
      cert.z = z;
      cert.u = Vector::Zero(n);
      cert.lambda = 0.5 * gamma * root->norm;
      cert.residual = std::abs(root->phi) * root->norm;
      return cert;
    }
    return solve_model_constrained(zbar, Fbar, J, gamma, dom, tol, z);
  }
  return solve_model_constrained(zbar, Fbar, J, gamma, dom, tol, zbar);
}

ProxCertificate crn_step(ViOperator& op, const Vector& zbar, double gamma, double tol) {
  OracleLedger& led = op.ledger();
  if (led.n_crn >= led.crn_budget) fail(ErrorCode::BudgetExhausted, "CRN budget exhausted");
  ++led.n_crn;
  const Vector Fbar = op.F(zbar);
  const Matrix J = op.jacobian(zbar);
  return solve_cubic_model(zbar, Fbar, J, gamma, op.domain(), tol);
}

bool JacobianSnapshot::holds(const Vector& zss) const {
  return point_ && point_->size() == zss.size() && std::memcmp(point_->data(), zss.data(), sizeof(double) * zss.size()) == 0;
}

const Matrix& JacobianSnapshot::at(ViOperator& op, const Vector& zss) {
  if (!holds(zss)) {
    J_ = op.jacobian(zss);
    point_ = zss;
  }
  return J_;
}

ProxCertificate lazy_crn_step(ViOperator& op, const Vector& zbar, const Vector& zsnapshot, JacobianSnapshot& cache,
                              double gamma, double tol) {
  OracleLedger& led = op.ledger();
  if (led.n_crn >= led.crn_budget) fail(ErrorCode::BudgetExhausted, "CRN budget exhausted");
  ++led.n_crn;
  const Vector Fbar = op.F(zbar);
  const Matrix& J = cache.at(op, zsnapshot);
  return solve_cubic_model(zbar, Fbar, J, gamma, op.domain(), tol);
}

// ---- extragradient --------------------------------------------------------

EgResult eg_step(ViOperator& op, const Vector& z0, double eta) {
  const double ell = op.ell();
  if (!(eta > 0.0) || (ell > 0.0 && eta >= 1.0 / ell)) fail(ErrorCode::BadStepSize, "EG step must lie in (0, 1/ell)");
  ++op.ledger().n_eg;
  const auto& dom = op.domain();
  EgResult r;
  r.z_half = dom.project(z0 - eta * op.F(z0));
  const Vector Fh = op.F(r.z_half);
  r.z1 = dom.project(z0 - eta * Fh);
  r.c1 = (z0 - r.z1) / eta - Fh;
  return r;
}

double eg_bound_factor(double eta, double ell) {
  const double q = eta * ell;
  if (!(q < 1.0)) fail(ErrorCode::BadStepSize, "EG bound needs eta*ell < 1");
  return (1.0 + q + q * q) / (eta * std::sqrt(1.0 - q * q));
}

}  // namespace mmx
