#include "inexact.hpp"

#include <cmath>

#include "error.hpp"
#include "npe.hpp"

namespace mmx {

double support(const Domain& d, const Vector& v) {
  if (v.size() != d.dim()) fail(ErrorCode::DimensionMismatch, "support dimension mismatch");
  if (d.kind() == Domain::Kind::Box) {
    return (v.array().max(0.0) * d.upper().array() + v.array().min(0.0) * d.lower().array()).sum();
  }
  return d.center().dot(v) + d.radius() * v.norm();
}

Vector linear_maximizer(const Domain& d, const Vector& v, const Vector& tie_point) {
  if (v.size() != d.dim()) fail(ErrorCode::DimensionMismatch, "maximizer dimension mismatch");
  if (d.kind() == Domain::Kind::Box) {
    Vector q = d.project(tie_point);
    for (Index i = 0; i < q.size(); ++i) {
      if (v[i] > 0.0) q[i] = d.upper()[i];
      if (v[i] < 0.0) q[i] = d.lower()[i];
    }
    return q;
  }
  const double n = v.norm();
  if (n == 0.0) return Domain::ball(d.center(), d.radius()).project(tie_point);
  return d.center() + (d.radius() / n) * v;
}

namespace {

const Domain& block_domain(const SaddleProblem& p, Side side) { return side == Side::MinOverX ? p.dom_x : p.dom_y; }

double eval_f(const SaddleProblem& p, Side side, const Vector& fixed, const Vector& q) {
  return side == Side::MinOverX ? p.value(q, fixed) : p.value(fixed, q);
}

BestResponse closed_form(const SaddleProblem& p, Side side, const Vector& fixed, const Vector& slope,
                         const Vector& start, OracleLedger& ledger) {
  const Domain& d = block_domain(p, side);
  BestResponse br;
  br.point = linear_maximizer(d, side == Side::MinOverX ? Vector(-slope) : slope, start);
  ++ledger.n_value;
  br.value = eval_f(p, side, fixed, br.point);
  br.certified = true;
  return br;
}

}  // namespace

BestResponse best_response(const SaddleProblem& p, Side side, const Vector& fixed, const BestResponseOptions& opt,
                           OracleLedger& ledger) {
  if (!(opt.value_tol > 0.0)) fail(ErrorCode::BadParams, "best response needs value_tol > 0");
  const Domain& dom = block_domain(p, side);
  const Vector start = dom.project(opt.start ? *opt.start : dom.center());
  if (start.size() != dom.dim()) fail(ErrorCode::DimensionMismatch, "start point has wrong size");

  const std::optional<Vector> slope = side == Side::MinOverX ? p.f->affine_slope_in_x(fixed) : p.f->affine_slope_in_y(fixed);
  if (slope) return closed_form(p, side, fixed, *slope, start, ledger);

  SliceVi op(p, side == Side::MinOverX ? SliceVi::Block::MinOverX : SliceVi::Block::MaxOverY, fixed, ledger);
  const double mu = op.mu();
  const double diam = std::max(dom.diameter(), 1e-300);
  if (opt.hessian_period < 1) fail(ErrorCode::BadParams, "hessian_period must be >= 1");
  const bool lazy = opt.hessian_period > 1;
  NpeConfig cfg;
  cfg.m = opt.hessian_period;
  cfg.gamma = std::max(2, cfg.m) * (p.rho > 0.0 ? p.rho : std::max(1e-6, 1e-3 * p.ell / diam));
  // Epochs grow geometrically up to the restart length so easy slices certify after a few steps.
  int t_full = 16;
  if (mu > 0.0) {
    t_full = std::min(1000, lazy ? len_epoch_length(cfg.gamma, mu, cfg.m, kLenRestartC)
                                 : npe_epoch_length(cfg.gamma, mu, kNpeRestartC));
  }
  cfg.T = std::min(4, t_full);
  cfg.S = 1;
  cfg.record_trace = false;

  BestResponse best;
  best.value_bound = std::numeric_limits<double>::infinity();
  best.dist_bound = std::numeric_limits<double>::infinity();
  Vector q = start;
  int stalls = 0;
  for (int epoch = 0; epoch < opt.max_epochs; ++epoch) {
    const SolverReport rep = lazy ? len(op, q, cfg) : npe(op, q, cfg);
    q = rep.z_out;
    // phi(q) - phi* <= <F(q), q> + support(-F(q)) where F is the slice gradient in minimization form.
    const Vector Fq = op.F(q);
    const double fw = std::max(0.0, Fq.dot(q) + support(dom, -Fq));
    const double dist = mu > 0.0 ? std::cbrt(6.0 * fw / mu) : std::numeric_limits<double>::infinity();
    if (fw < best.value_bound) {
      best.point = q;
      best.value_bound = fw;
      best.dist_bound = dist;
    }
    if (fw <= opt.value_tol && dist <= opt.dist_tol) {
      best.certified = true;
      break;
    }
    if (rep.status == RunStatus::Stationary && ++stalls >= 2) break;
    cfg.T = std::min(2 * cfg.T, t_full);
  }
  if (!best.certified && opt.require_certificate) {
    fail(ErrorCode::NoConvergence, "best response did not reach the requested accuracy");
  }
  ++ledger.n_value;
  best.value = eval_f(p, side, fixed, best.point);
  return best;
}

PhiEstimate estimate_Phi(const SaddleProblem& p, const Vector& x, double delta, bool want_grad, OracleLedger& ledger,
                         const std::optional<Vector>& warm, bool certify_grad, int hessian_period) {
  if (!(delta > 0.0)) fail(ErrorCode::BadParams, "inexact oracle needs delta > 0");
  BestResponseOptions opt;
  opt.value_tol = delta;
  if (want_grad && certify_grad && p.ell > 0.0) opt.dist_tol = delta / p.ell;
  opt.start = warm;
  opt.hessian_period = hessian_period;
  const BestResponse br = best_response(p, Side::MaxOverY, x, opt, ledger);
  PhiEstimate est;
  est.value = br.value;
  est.y = br.point;
  est.certified = br.certified;
  if (want_grad) {
    ++ledger.n_grad;
    est.grad = p.grad(x, br.point).x;
  }
  return est;
}

double inexact_value_Phi(const SaddleProblem& p, const Vector& x, double delta, OracleLedger& ledger) {
  return estimate_Phi(p, x, delta, false, ledger).value;
}

Vector inexact_grad_Phi(const SaddleProblem& p, const Vector& x, double delta, OracleLedger& ledger) {
  return estimate_Phi(p, x, delta, true, ledger).grad;
}

}  // namespace mmx
