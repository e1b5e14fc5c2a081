#include <random>

#include "doctest.h"
#include "error.hpp"
#include "helpers.hpp"
#include "oracle.hpp"

using namespace mmx;
using namespace mmx::testing;

TEST_CASE("crn_step at a zero of F returns the query") {
  const Domain unit = Domain::ball(Vector::Zero(1), 1.0);
  const SaddleProblem p = scalar_quadratic(1.0, 1.0, 0.0, unit, unit);
  OracleLedger led;
  SaddleVi op(p, led);
  for (double gamma : {0.1, 1.0, 50.0}) {
    const ProxCertificate c = crn_step(op, Vector::Zero(2), gamma);
    CHECK(c.z.isZero(0.0));
    CHECK(c.lambda == 0.0);
    CHECK(c.u.isZero(0.0));
  }
}

TEST_CASE("crn_step on f = xy unconstrained") {
  const SaddleProblem p = xy_problem(10.0, true);
  OracleLedger led;
  SaddleVi op(p, led);
  const Vector zbar = vec({1, 1});
  const double gamma = 2.0;
  const ProxCertificate c = crn_step(op, zbar, gamma);
  const Vector s = c.z - zbar;
  const Matrix J = MonotoneOperatorView(p).jacobian(zbar);
  const Vector Fbar = vec({1, -1});
  CHECK((Fbar + J * s + 0.5 * gamma * s.norm() * s).norm() <= 1e-8);

  // Grid search over lambda using the hand inverse of [[l, 1], [-1, l]].
  double best_l = 0.0, best_err = 1e300;
  for (int k = 0; k <= 1000000; ++k) {
    const double l = 10.0 * k / 1e6;
    const double ns = std::sqrt(2.0) / std::sqrt(1.0 + l * l);
    const double err = std::abs(0.5 * gamma * ns - l);
    if (err < best_err) {
      best_err = err;
      best_l = l;
    }
  }
  CHECK(c.lambda == doctest::Approx(best_l).epsilon(1e-4));
  // Frozen from the grid: lambda = 1, s = (-1, 0).
  CHECK(c.lambda == doctest::Approx(1.0).epsilon(1e-9));
  CHECK((c.z - vec({0, 1})).norm() <= 1e-9);
  CHECK(led.n_crn == 1);
  CHECK(led.n_hess == 1);
  CHECK(led.n_grad == 1);
}

TEST_CASE("crn_step is exact on a quadratic saddle") {
  std::mt19937_64 rng(4);
  const Domain dx = Domain::ball(Vector::Zero(2), 1.0);
  const SaddleProblem p = make_quadratic(Matrix::Identity(2, 2), Matrix::Identity(2, 2), Matrix::Identity(2, 2),
                                         Vector::Zero(2), Vector::Zero(2), dx, dx);
  OracleLedger led;
  SaddleVi op(p, led);
  const MonotoneOperatorView view(p);
  for (int k = 0; k < 50; ++k) {
    const Vector zbar = (Vector(4) << in_ball(Vector::Zero(2), 1.0, rng), in_ball(Vector::Zero(2), 1.0, rng)).finished();
    const double tol = 1e-10;
    const ProxCertificate c = crn_step(op, zbar, 1.0, tol);
    REQUIRE(op.domain().contains(c.z, 1e-12));
    const double res = (view.F(c.z) + c.u + c.lambda * (c.z - zbar)).norm();
    REQUIRE(res <= 10 * tol);
  }
}

TEST_CASE("property: CRN implements an (0, rho)-proximal oracle at gamma = 2 rho") {
  std::mt19937_64 rng(11);
  const double tol = 1e-10;
  int constrained = 0;
  for (int k = 0; k < 200; ++k) {
    FamilyParams fp;
    fp.mu_x = 0.3 + 0.1 * (k % 7);
    fp.mu_y = 0.2 + 0.15 * (k % 5);
    fp.box = (k % 3 == 0);
    const Family fam = k % 2 ? Family::CubicCoupled : Family::QuarticCoupled;
    const Index dx = 1 + k % 4, dy = 1 + (k / 4) % 4;
    const SaddleProblem p = make_test_problem(fam, dx, dy, 7000 + k, fp);
    OracleLedger led;
    SaddleVi op(p, led);
    const Vector zbar = (Vector(dx + dy) << in_domain(p.dom_x, rng), in_domain(p.dom_y, rng)).finished();
    const ProxCertificate c = crn_step(op, zbar, 2.0 * p.rho, tol);
    const double dist = (c.z - zbar).norm();
    REQUIRE(op.domain().contains(c.z, 1e-12));
    REQUIRE(c.lambda == doctest::Approx(p.rho * dist).epsilon(1e-12));
    const double res = (MonotoneOperatorView(p).F(c.z) + c.u + c.lambda * (c.z - zbar)).norm();
    REQUIRE(res <= 0.5 * p.rho * dist * dist + 10 * tol);
    if (c.u.norm() > 0.0) ++constrained;
  }
  MESSAGE("constrained CRN solves: " << constrained);
}

TEST_CASE("lazy_crn_step agrees with crn_step when the snapshot is the query") {
  FamilyParams fp;
  const SaddleProblem p = make_test_problem(Family::CubicCoupled, 3, 2, 42, fp);
  std::mt19937_64 rng(1);
  OracleLedger l1, l2;
  SaddleVi a(p, l1), b(p, l2);
  const Vector zbar = (Vector(5) << in_domain(p.dom_x, rng), in_domain(p.dom_y, rng)).finished();
  const ProxCertificate e = crn_step(a, zbar, 3.0);
  JacobianSnapshot cache;
  const ProxCertificate l = lazy_crn_step(b, zbar, zbar, cache, 3.0);
  CHECK(e.z == l.z);
  CHECK(e.u == l.u);
  CHECK(e.lambda == l.lambda);
}

TEST_CASE("lazy_crn_step ignores the snapshot on a bilinear problem") {
  FamilyParams fp;
  const SaddleProblem p = make_test_problem(Family::Bilinear, 2, 2, 5, fp);
  std::mt19937_64 rng(2);
  OracleLedger l1, l2;
  SaddleVi a(p, l1), b(p, l2);
  for (int k = 0; k < 10; ++k) {
    const Vector zbar = (Vector(4) << in_domain(p.dom_x, rng), in_domain(p.dom_y, rng)).finished();
    const Vector zss = (Vector(4) << in_domain(p.dom_x, rng), in_domain(p.dom_y, rng)).finished();
    JacobianSnapshot cache;
    const ProxCertificate e = crn_step(a, zbar, 1.0);
    const ProxCertificate l = lazy_crn_step(b, zbar, zss, cache, 1.0);
    REQUIRE(e.z == l.z);
    REQUIRE(e.lambda == l.lambda);
  }
}

TEST_CASE("lazy_crn_step with a stale snapshot obeys the perturbed bound") {
  std::mt19937_64 rng(6);
  const double tol = 1e-10;
  for (int k = 0; k < 50; ++k) {
    FamilyParams fp;
    const SaddleProblem p = make_test_problem(Family::CubicCoupled, 2, 2, 300 + k, fp);
    OracleLedger led;
    SaddleVi op(p, led);
    const Vector zbar = (Vector(4) << in_domain(p.dom_x, rng), in_domain(p.dom_y, rng)).finished();
    const Vector zss = (Vector(4) << in_domain(p.dom_x, rng), in_domain(p.dom_y, rng)).finished();
    JacobianSnapshot cache;
    const double gamma = 2.0 * p.rho;
    const ProxCertificate c = lazy_crn_step(op, zbar, zss, cache, gamma, tol);
    const double d = (c.z - zbar).norm();
    const double res = (MonotoneOperatorView(p).F(c.z) + c.u + c.lambda * (c.z - zbar)).norm();
    REQUIRE(res <= 0.5 * p.rho * d * d + p.rho * (zbar - zss).norm() * d + 10 * tol);
  }
}

TEST_CASE("ledger counts for eager and lazy CRN") {
  FamilyParams fp;
  const SaddleProblem p = make_test_problem(Family::CubicCoupled, 2, 2, 9, fp);
  std::mt19937_64 rng(3);
  OracleLedger eager, lazy;
  SaddleVi a(p, eager), b(p, lazy);
  JacobianSnapshot cache;
  const Vector zss = p.known_saddle->joined();
  const int k = 7;
  for (int i = 0; i < k; ++i) {
    const Vector zbar = (Vector(4) << in_domain(p.dom_x, rng), in_domain(p.dom_y, rng)).finished();
    crn_step(a, zbar, 4.0);
    lazy_crn_step(b, zbar, zss, cache, 4.0);
  }
  CHECK(eager.n_hess == k);
  CHECK(eager.n_crn == k);
  CHECK(lazy.n_hess == 1);
  CHECK(lazy.n_crn == k);
  CHECK(lazy.n_grad == k);

  OracleLedger capped;
  capped.crn_budget = 2;
  SaddleVi c(p, capped);
  crn_step(c, zss, 1.0);
  crn_step(c, zss, 1.0);
  try {
    crn_step(c, zss, 1.0);
    FAIL("expected BudgetExhausted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::BudgetExhausted);
  }
  CHECK(capped.n_crn == 2);
}

TEST_CASE("eg_step examples") {
  {
    const SaddleProblem p = xy_problem(10.0, true);
    OracleLedger led;
    SaddleVi op(p, led);
    const EgResult r = eg_step(op, vec({1, 1}), 0.5);
    CHECK((r.z_half - vec({0.5, 1.5})).norm() <= 1e-15);
    CHECK((r.z1 - vec({0.25, 1.25})).norm() <= 1e-15);
    CHECK(r.c1.norm() <= 1e-15);
    CHECK(led.n_eg == 1);
    CHECK(led.n_grad == 2);
    CHECK_THROWS_AS(eg_step(op, vec({1, 1}), 1.0), Error);

    const EgResult fixed = eg_step(op, vec({0, 0}), 0.5);
    CHECK(fixed.z1.isZero(0.0));
    CHECK(fixed.c1.isZero(0.0));
  }
  {
    const Domain big = Domain::free_ball(Vector::Zero(1), 10.0);
    const SaddleProblem p = scalar_quadratic(1.0, 1.0, 0.0, big, big);
    OracleLedger led;
    SaddleVi op(p, led);
    const double eta = 0.5;
    const EgResult r = eg_step(op, vec({1, 0}), eta);
    const double bound = eg_bound_factor(eta, 1.0);
    CHECK(bound == doctest::Approx(1.75 / (0.5 * std::sqrt(0.75))));
    CHECK(bound == doctest::Approx(4.0415).epsilon(1e-4));
    const double lhs = (MonotoneOperatorView(p).F(r.z1) + r.c1).norm();
    CHECK(lhs <= bound * 1.0);
    MESSAGE("|F(z1)+c1| = " << lhs);
  }
}

TEST_CASE("property: EG certified-norm bound on strongly monotone quadratics") {
  std::mt19937_64 rng(12);
  for (int k = 0; k < 100; ++k) {
    FamilyParams fp;
    fp.mu_x = 0.1 + 0.05 * (k % 9);
    fp.mu_y = 0.2 + 0.05 * (k % 4);
    fp.box = (k % 2 == 0);
    const SaddleProblem p = make_test_problem(Family::Quadratic, 3, 3, 2000 + k, fp);
    OracleLedger led;
    SaddleVi op(p, led);
    const Vector z0 = (Vector(6) << in_domain(p.dom_x, rng), in_domain(p.dom_y, rng)).finished();
    const double eta = (0.1 + 0.8 * (k % 10) / 10.0) / p.ell;
    const EgResult r = eg_step(op, z0, eta);
    const double lhs = (MonotoneOperatorView(p).F(r.z1) + r.c1).norm();
    REQUIRE(lhs <= eg_bound_factor(eta, p.ell) * (z0 - p.known_saddle->joined()).norm() * (1 + 1e-9));
  }
}

TEST_CASE("property: c1 vanishes at interior points") {
  std::mt19937_64 rng(13);
  FamilyParams fp;
  fp.radius_x = fp.radius_y = 50.0;
  int interior = 0;
  for (int k = 0; k < 100; ++k) {
    const SaddleProblem p = make_test_problem(Family::CubicCoupled, 2, 3, 3000 + k, fp);
    OracleLedger led;
    SaddleVi op(p, led);
    const Vector z0 = p.known_saddle->joined() + gaussian(5, rng, 0.5);
    const EgResult r = eg_step(op, z0, 0.5 / p.ell);
    if (p.dom_x.contains(r.z1.head(2), -1e-9) && p.dom_y.contains(r.z1.tail(3), -1e-9)) {
      ++interior;
      REQUIRE(r.c1.norm() <= 1e-10 * std::max(1.0, r.z1.norm()));
    }
  }
  CHECK(interior > 90);
}

TEST_CASE("constrained CRN solve certifies a normal-cone element") {
  std::mt19937_64 rng(14);
  // f = xy + 2x pushes x through the boundary at -1.
  const Domain unit = Domain::ball(Vector::Zero(1), 1.0);
  const SaddleProblem p = make_bilinear(mat1(1.0), vec({2}), vec({0}), unit, unit);
  OracleLedger led;
  SaddleVi op(p, led);
  const Vector zbar = vec({-0.9, 0});
  const double gamma = 0.1, tol = 1e-10;
  const ProxCertificate c = crn_step(op, zbar, gamma, tol);
  REQUIRE(c.u.norm() > 0.0);
  const Vector s = c.z - zbar;
  const Matrix J = MonotoneOperatorView(p).jacobian(zbar);
  const Vector model = vec({2, 0.9}) + J * s + 0.5 * gamma * s.norm() * s;
  CHECK((model + c.u).norm() <= tol);
  for (int k = 0; k < 2000; ++k) {
    const Vector zp = (Vector(2) << in_domain(p.dom_x, rng), in_domain(p.dom_y, rng)).finished();
    REQUIRE(c.u.dot(zp - c.z) <= 1e-9 * (zp - c.z).norm());
  }
}
