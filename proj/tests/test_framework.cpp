#include <cmath>
#include <random>

#include "doctest.h"
#include "error.hpp"
#include "framework.hpp"
#include "gap.hpp"
#include "helpers.hpp"

using namespace mmx;
using namespace mmx::testing;

namespace {

FamilyParams half_mu(double coupling = 1.0) {
  FamilyParams fp;
  fp.mu_x = fp.mu_y = 0.5;
  fp.radius_x = fp.radius_y = 0.5;
  fp.coupling = coupling;
  return fp;
}

PairPoint centers(const SaddleProblem& p) { return {p.dom_x.center(), p.dom_y.center()}; }

// Minimizer of (mu/3)|v - a|^3 + (w/3)|v - b|^3; it lies on the segment [a, b], where the derivative in the
// segment parameter t is mu t^2 - w (1 - t)^2 up to a positive factor.
Vector two_cubic_prox(const Vector& a, double mu, const Vector& b, double w) {
  double lo = 0.0, hi = 1.0;
  for (int i = 0; i < 200; ++i) {
    const double t = 0.5 * (lo + hi);
    (mu * t * t - w * (1 - t) * (1 - t) > 0 ? hi : lo) = t;
  }
  return a + 0.5 * (lo + hi) * (b - a);
}

Matrix joint_hessian(const SaddleProblem& p, const Vector& x, const Vector& y) {
  const HessianBlocks h = p.hess(x, y);
  Matrix H(p.dx() + p.dy(), p.dx() + p.dy());
  H << h.xx, h.xy, h.yx, h.yy;
  return H;
}

SaddleProblem scaled_cubic(double alpha, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Matrix A(2, 2);
  for (Index i = 0; i < 4; ++i) A(i / 2, i % 2) = gaussian(1, rng)[0] * 0.5;
  const Vector xs = vec({0.1, -0.2}), ys = vec({-0.15, 0.05});
  return make_cubic_coupled(alpha * 0.5, alpha * 0.5, alpha * A, xs, ys, Domain::ball(Vector::Zero(2), 0.5),
                            Domain::ball(Vector::Zero(2), 0.5));
}

}  // namespace

TEST_CASE("regularize examples") {
  const SaddleProblem p = make_test_problem(Family::Bilinear, 2, 2, 3);  // unit balls, D = 2
  const PairPoint z0 = centers(p);
  const SurrogateProblem s = regularize(p, z0, 0.6 * 8.0);
  CHECK(s.kind == SurrogateProblem::Kind::RegularizedF);
  CHECK(s.weight_x == doctest::Approx(0.3));
  CHECK(s.weight_y == doctest::Approx(0.3));
  CHECK(s.problem.mu_x == doctest::Approx(0.3));
  CHECK(s.problem.rho == doctest::Approx(p.rho + 2 * 0.3));

  FamilyParams half;
  half.radius_x = half.radius_y = 0.5;  // D = 1
  const SaddleProblem q = make_test_problem(Family::Bilinear, 2, 2, 4, half);
  CHECK(regularize(q, centers(q), 0.6).weight_x == doctest::Approx(0.3));
  CHECK_THROWS_AS(regularize(q, centers(q), 0.0), Error);
  CHECK_THROWS_AS(regularize(q, centers(q), -1.0), Error);
}

TEST_CASE("regularize of the zero function stays within eps/3") {
  const Domain dom = Domain::ball(Vector::Zero(2), 0.5);
  const SaddleProblem zero = make_bilinear(Matrix::Zero(2, 2), Vector::Zero(2), Vector::Zero(2), dom, dom);
  const SurrogateProblem s = regularize(zero, centers(zero), 1.0);
  CHECK(s.weight_x == doctest::Approx(0.5));
  std::mt19937_64 rng(11);
  double worst = 0.0;
  for (int i = 0; i < 2000; ++i) {
    const Vector x = in_ball(dom.center(), 0.5, rng), y = in_ball(dom.center(), 0.5, rng);
    const double expect = (0.5 / 3.0) * (std::pow(x.norm(), 3) - std::pow(y.norm(), 3));
    CHECK(s.problem.value(x, y) == doctest::Approx(expect).epsilon(1e-12));
    worst = std::max(worst, std::abs(s.problem.value(x, y)));
  }
  CHECK(worst <= 1.0 / 3.0);
}

TEST_CASE("schedule_params examples") {
  FamilyParams fp;
  fp.mu_x = fp.mu_y = 1.0;  // rho = 2
  fp.radius_x = fp.radius_y = 0.5;
  const SaddleProblem p = make_test_problem(Family::CubicCoupled, 2, 2, 1, fp);
  REQUIRE(p.rho == doctest::Approx(2.0));
  CHECK(schedule_params(p, 1e-3, DeltaMode::Practical, SaddleEngine::NpeRestart).gamma == doctest::Approx(2.0));
  const FrameworkConfig lazy = schedule_params(p, 1e-3, DeltaMode::Practical, SaddleEngine::LenRestart, 4);
  CHECK(lazy.gamma == doctest::Approx(1.0));
  CHECK(lazy.min_engine == MinEngine::AipeRestartLazy);
  CHECK(lazy.zeta1 == doctest::Approx(1e-5));
  CHECK(lazy.zeta2 == doctest::Approx(1e-7));
  CHECK(lazy.zeta3 == doctest::Approx(1e-9));

  SaddleProblem unit = p;
  unit.ell = 1.0;
  unit.mu_y = 1.0;
  REQUIRE(unit.diameter() == doctest::Approx(1.0));
  const FrameworkConfig th = schedule_params(unit, 0.1, DeltaMode::Theory, SaddleEngine::NpeRestart);
  CHECK(th.zeta1 == doctest::Approx(0.01 / 147.0).epsilon(1e-12));
  CHECK(th.zeta1 == doctest::Approx(6.803e-5).epsilon(1e-3));
  CHECK(th.zeta2 < th.zeta1);
  CHECK(th.zeta3 < th.zeta2);

  CHECK_THROWS_AS(schedule_params(p, 0.0, DeltaMode::Practical, SaddleEngine::NpeRestart), Error);
  const SaddleProblem bil = make_test_problem(Family::Bilinear, 2, 2, 1);
  CHECK_THROWS_AS(schedule_params(bil, 1e-3, DeltaMode::Practical, SaddleEngine::NpeRestart), Error);
}

TEST_CASE("restart_stages and practical_step_tol") {
  CHECK(restart_stages(1.0, 0.25) == 2);
  CHECK(restart_stages(1.0, 0.3) == 2);
  CHECK(restart_stages(1.0, 2.0) == 1);
  CHECK(practical_step_tol(1e-3, 1.0) == 1e-3);
  CHECK(practical_step_tol(1e-12, 2.0) == 2e-8);
}

TEST_CASE("iprox_psi on a decoupled instance matches the one-dimensional prox") {
  const SaddleProblem p = make_test_problem(Family::CubicCoupled, 2, 2, 5, half_mu(0.0));
  const PairPoint star = *p.known_saddle;
  const FrameworkConfig cfg = schedule_params(p, 1e-6, DeltaMode::Practical, SaddleEngine::NpeRestart);
  std::mt19937_64 rng(21);
  for (int i = 0; i < 4; ++i) {
    const Vector xbar = in_ball(p.dom_x.center(), 0.5, rng), ybar = in_ball(p.dom_y.center(), 0.5, rng);
    OracleLedger ledger;
    const ProxCertificate c = iprox_psi(p, xbar, ybar, cfg.gamma, cfg, ledger);
    const Vector expect = two_cubic_prox(star.y, p.mu_y, ybar, cfg.gamma);
    CHECK((c.z - expect).norm() <= 1e-7);
    CHECK(c.lambda == doctest::Approx(cfg.gamma * (c.z - ybar).norm()));
  }
  OracleLedger ledger;
  const ProxCertificate at = iprox_psi(p, star.x, star.y, cfg.gamma, cfg, ledger);
  CHECK((at.z - star.y).norm() <= 1e-9);
  CHECK(at.lambda <= 1e-8);
}

TEST_CASE("iprox_phi on a decoupled instance matches the one-dimensional prox") {
  const SaddleProblem p = make_test_problem(Family::CubicCoupled, 2, 2, 6, half_mu(0.0));
  const PairPoint star = *p.known_saddle;
  const FrameworkConfig cfg = schedule_params(p, 1e-6, DeltaMode::Practical, SaddleEngine::NpeRestart);
  std::mt19937_64 rng(22);
  for (int i = 0; i < 3; ++i) {
    const Vector xbar = in_ball(p.dom_x.center(), 0.5, rng);
    OracleLedger ledger;
    const ProxCertificate c = iprox_phi(p, xbar, cfg.gamma, cfg, ledger);
    CHECK((c.z - two_cubic_prox(star.x, p.mu_x, xbar, cfg.gamma)).norm() <= 1e-7);
    CHECK(c.lambda == doctest::Approx(cfg.gamma * (c.z - xbar).norm()));
  }
  OracleLedger ledger;
  const ProxCertificate fixed = iprox_phi(p, star.x, cfg.gamma, cfg, ledger);
  CHECK((fixed.z - star.x).norm() <= 1e-9);
  CHECK(fixed.lambda <= 1e-8);
  CHECK_THROWS_AS(iprox_phi(p, Vector::Constant(2, 5.0), cfg.gamma, cfg, ledger), Error);
}

// Residual re-measured with a 1e-14 best response. The allowance is twice (lambda/2)|x - xbar| + delta with
// delta = 1e-8; steps stay above 1e-3 D so the prox term dominates the best-response noise floor.
TEST_CASE("property: prox certificates are sound under independent re-measurement") {
  const double eps = 1e-5, delta = 1e-8;
  for (std::uint64_t seed : {1, 2, 3}) {
    const SaddleProblem p = make_test_problem(Family::CubicCoupled, 3, 3, seed, half_mu());
    const FrameworkConfig cfg = schedule_params(p, eps, DeltaMode::Practical, SaddleEngine::NpeRestart);
    std::mt19937_64 rng(100 + seed);
    for (int i = 0; i < 3; ++i) {
      const double scale = std::pow(10.0, -1.0 - i);
      const Vector dir = gaussian(3, rng).normalized();
      const Vector xbar = p.dom_x.project(p.known_saddle->x + scale * dir);
      OracleLedger ledger;
      const ProxCertificate c = iprox_phi(p, xbar, cfg.gamma, cfg, ledger);
      const Vector y = best_response_y(p, c.z, 1e-14);
      const double res = (p.grad(c.z, y).x + c.u + c.lambda * (c.z - xbar)).norm();
      CHECK(res <= 2.0 * (0.5 * c.lambda * (c.z - xbar).norm() + delta));

      const Vector ybar = p.dom_y.project(p.known_saddle->y + scale * gaussian(3, rng).normalized());
      const ProxCertificate d = iprox_psi(p, xbar, ybar, cfg.gamma, cfg, ledger);
      const SurrogateProblem g = surrogate_g(p, xbar, cfg.gamma);
      const Vector x = best_response_x(g.problem, d.z, 1e-14);
      // The certificate is for -Psi, whose gradient is -grad_y g at the best response.
      const double res_y = (-g.problem.grad(x, d.z).y + d.u + d.lambda * (d.z - ybar)).norm();
      CHECK(res_y <= 2.0 * (0.5 * d.lambda * (d.z - ybar).norm() + delta));
    }
  }
}

TEST_CASE("property: surrogate Hessian quotients stay below rho + 2 gamma") {
  for (std::uint64_t seed : {1, 2, 3, 4}) {
    const SaddleProblem p = make_test_problem(Family::CubicCoupled, 3, 2, seed, half_mu());
    std::mt19937_64 rng(seed);
    const double gamma = std::uniform_real_distribution<double>(0.1, 3.0)(rng);
    const Vector xbar = in_ball(p.dom_x.center(), 0.5, rng), ybar = in_ball(p.dom_y.center(), 0.5, rng);
    const SurrogateProblem h = surrogate_h(p, xbar, ybar, gamma);
    CHECK(h.problem.rho == doctest::Approx(p.rho + 2 * gamma));
    double worst = 0.0;
    for (int i = 0; i < 300; ++i) {
      const Vector x1 = in_ball(p.dom_x.center(), 0.5, rng), y1 = in_ball(p.dom_y.center(), 0.5, rng);
      // Short pairs near the centers are where the cubic Hessians bend the most.
      const double r = std::pow(10.0, std::uniform_real_distribution<double>(-6, 0)(rng));
      const Vector x2 = (i % 2 ? xbar : x1) + r * gaussian(3, rng).normalized();
      const Vector y2 = (i % 2 ? ybar : y1) + r * gaussian(2, rng).normalized();
      const double dz = std::hypot((x1 - x2).norm(), (y1 - y2).norm());
      const double q = operator_norm(joint_hessian(h.problem, x1, y1) - joint_hessian(h.problem, x2, y2)) / dz;
      worst = std::max(worst, q);
    }
    CHECK(worst <= p.rho + 2 * gamma + 1e-6);
  }
}

TEST_CASE("minimax_aipe examples") {
  const SaddleProblem p = make_test_problem(Family::CubicCoupled, 3, 3, 1, half_mu());
  REQUIRE(p.rho == doctest::Approx(1.0));
  const double eps = 1e-5;

  SUBCASE("start at the saddle") {
    const FrameworkConfig cfg = schedule_params(p, eps, DeltaMode::Practical, SaddleEngine::NpeRestart);
    const FrameworkReport r = minimax_aipe(p, *p.known_saddle, cfg);
    CHECK(r.stats.outer_prox_calls <= 2);
    CHECK(duality_gap(p, PairPoint::split(r.report.z_out, 3), default_gap_tol(p)).gap <= eps);
  }

  SUBCASE("npe and len engines reach eps, len with fewer Hessians") {
    const FrameworkConfig npe_cfg = schedule_params(p, eps, DeltaMode::Practical, SaddleEngine::NpeRestart);
    CHECK(npe_cfg.gamma == doctest::Approx(1.0));
    const FrameworkReport a = minimax_aipe(p, centers(p), npe_cfg);
    CHECK(a.report.status != RunStatus::BudgetExhausted);
    CHECK(duality_gap(p, PairPoint::split(a.report.z_out, 3), default_gap_tol(p)).gap <= eps);

    const FrameworkConfig len_cfg = schedule_params(p, eps, DeltaMode::Practical, SaddleEngine::LenRestart, 4);
    CHECK(len_cfg.gamma == doctest::Approx(0.5));
    const FrameworkReport b = minimax_aipe(p, centers(p), len_cfg);
    CHECK(duality_gap(p, PairPoint::split(b.report.z_out, 3), default_gap_tol(p)).gap <= eps);
    CHECK(b.report.ledger.n_hess < a.report.ledger.n_hess);
  }

  SUBCASE("budget") {
    FrameworkConfig cfg = schedule_params(p, eps, DeltaMode::Practical, SaddleEngine::NpeRestart);
    cfg.crn_budget = 50;
    const FrameworkReport r = minimax_aipe(p, centers(p), cfg);
    CHECK(r.report.status == RunStatus::BudgetExhausted);
    CHECK(r.report.ledger.n_crn <= 50);
  }

  SUBCASE("rejects plain convex-concave input") {
    const SaddleProblem bil = make_test_problem(Family::Bilinear, 2, 2, 1);
    FrameworkConfig cfg;
    CHECK_THROWS_AS(minimax_aipe(bil, centers(bil), cfg), Error);
  }
}

TEST_CASE("property: nested CRN calls are attributed exactly once") {
  for (std::uint64_t seed : {1, 2, 3}) {
    const SaddleProblem p = make_test_problem(Family::CubicCoupled, 2, 3, seed, half_mu());
    for (SaddleEngine e : {SaddleEngine::NpeRestart, SaddleEngine::LenRestart}) {
      const FrameworkConfig cfg = schedule_params(p, 1e-4, DeltaMode::Practical, e, 2);
      const FrameworkReport r = minimax_aipe(p, centers(p), cfg);
      const FrameworkStats& s = r.stats;
      CHECK(s.crn_saddle + s.crn_min + s.crn_best_response == r.report.ledger.n_crn);
      CHECK(s.crn_saddle > 0);
      CHECK(s.middle_prox_calls >= s.outer_prox_calls);
      if (!r.report.trace.empty()) CHECK(r.report.trace.back().n_crn <= r.report.ledger.n_crn);
    }
  }
}

TEST_CASE("property: rescaling f leaves the run unchanged") {
  for (std::uint64_t seed : {7, 8}) {
    const SaddleProblem base = scaled_cubic(1.0, seed);
    const double eps = 1e-5;
    const FrameworkReport ref =
        minimax_aipe(base, centers(base), schedule_params(base, eps, DeltaMode::Practical, SaddleEngine::NpeRestart));
    for (double alpha : {0.5, 2.0}) {
      const SaddleProblem p = scaled_cubic(alpha, seed);
      const FrameworkConfig cfg = schedule_params(p, alpha * eps, DeltaMode::Practical, SaddleEngine::NpeRestart);
      CHECK(cfg.gamma == doctest::Approx(alpha * base.rho));
      const FrameworkReport r = minimax_aipe(p, centers(p), cfg);
      CHECK(r.stats.outer_prox_calls == ref.stats.outer_prox_calls);
      // Absolute floors in the CRN and best-response tolerances shift a handful of inner calls.
      CHECK(std::abs(double(r.report.ledger.n_crn) - double(ref.report.ledger.n_crn)) <= 0.02 * ref.report.ledger.n_crn);
      CHECK((r.report.z_out - ref.report.z_out).norm() <= 1e-8);
    }
  }
}
