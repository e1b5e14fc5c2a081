#include <random>

#include "doctest.h"
#include "error.hpp"
#include "gap.hpp"
#include "helpers.hpp"
#include "npe.hpp"

using namespace mmx;
using namespace mmx::testing;

namespace {

NpeConfig traced(int T, double gamma, int m = 1, int S = 1) {
  NpeConfig c;
  c.T = T;
  c.gamma = gamma;
  c.m = m;
  c.S = S;
  c.record_points = true;
  return c;
}

void check_trace_identities(const SolverReport& rep, const ViOperator& op, double gamma) {
  Vector weighted = Vector::Zero(rep.z_out.size());
  double eta_sum = 0.0;
  for (const TraceRow& row : rep.trace) {
    REQUIRE(op.domain().contains(row.z, 1e-12));
    REQUIRE(op.domain().contains(row.z_half, 1e-12));
    if (row.eta == 0.0) continue;
    REQUIRE(row.eta * 2.0 * gamma * (row.z - row.z_half).norm() == doctest::Approx(1.0).epsilon(1e-12));
    weighted += row.eta * row.z_half;
    eta_sum += row.eta;
  }
  REQUIRE((weighted / eta_sum - rep.z_out).norm() <= 1e-12 * std::max(1.0, rep.z_out.norm()));
}

}  // namespace

TEST_CASE("npe starting at the saddle is stationary") {
  FamilyParams fp;
  const SaddleProblem p = make_test_problem(Family::CubicCoupled, 2, 2, 1, fp);
  OracleLedger led;
  SaddleVi op(p, led);
  const Vector zs = p.known_saddle->joined();
  const SolverReport r = npe(op, zs, traced(10, 4.0));
  CHECK(r.status == RunStatus::Stationary);
  CHECK(r.z_out == zs);
  CHECK(r.trace.size() == 1);
  CHECK(npe_restart(op, zs, traced(10, 4.0, 1, 5)).status == RunStatus::Stationary);
  CHECK(len_restart(op, zs, traced(10, 4.0, 4, 5)).status == RunStatus::Stationary);
}

TEST_CASE("npe first iteration composes CRN and the eta rule") {
  const SaddleProblem p = xy_problem(10.0, true);
  OracleLedger led;
  SaddleVi op(p, led);
  const SolverReport r = npe(op, vec({1, 1}), traced(1, 2.0));
  REQUIRE(r.trace.size() == 1);
  // z_{1/2} = (0, 1) from the CRN example, so eta = 1/(2 * 2 * 1).
  CHECK((r.trace[0].z_half - vec({0, 1})).norm() <= 1e-9);
  CHECK(r.trace[0].eta == doctest::Approx(0.25).epsilon(1e-9));
  CHECK((r.z_out - r.trace[0].z_half).norm() <= 1e-15);
}

TEST_CASE("npe on bilinear over unit balls improves at the sublinear rate") {
  const SaddleProblem p = xy_problem();
  auto gap_at = [&](int T) {
    OracleLedger led;
    SaddleVi op(p, led);
    const SolverReport r = npe(op, vec({1, 1}) / std::sqrt(2.0), traced(T, 1.0));
    check_trace_identities(r, op, 1.0);
    return duality_gap(p, PairPoint::split(r.z_out, 1), 1e-12).gap;
  };
  const double g8 = gap_at(8), g64 = gap_at(64);
  MESSAGE("gap(8) = " << g8 << ", gap(64) = " << g64);
  CHECK(g64 < g8 / 8.0);
}

TEST_CASE("restart with S = 0 is the identity") {
  FamilyParams fp;
  const SaddleProblem p = make_test_problem(Family::CubicCoupled, 2, 2, 2, fp);
  OracleLedger led;
  SaddleVi op(p, led);
  const Vector z0 = p.joint_domain().project(Vector::Zero(4));
  const OracleLedger before = led;
  const SolverReport r = npe_restart(op, z0, traced(5, 4.0, 1, 0));
  CHECK(r.z_out == z0);
  CHECK(led.same_counts(before));
}

TEST_CASE("len with m = 1 matches npe bit for bit") {
  FamilyParams fp;
  const SaddleProblem p = make_test_problem(Family::QuarticCoupled, 3, 2, 3, fp);
  std::mt19937_64 rng(1);
  const Vector z0 = start_at_distance(p, 1.0, rng);
  OracleLedger l1, l2;
  SaddleVi a(p, l1), b(p, l2);
  const SolverReport e = npe_restart(a, z0, traced(6, 2 * p.rho, 1, 3));
  const SolverReport l = len_restart(b, z0, traced(6, 2 * p.rho, 1, 3));
  REQUIRE(e.trace.size() == l.trace.size());
  for (std::size_t i = 0; i < e.trace.size(); ++i) {
    REQUIRE(e.trace[i].z_half == l.trace[i].z_half);
    REQUIRE(e.trace[i].eta == l.trace[i].eta);
  }
  CHECK(e.z_out == l.z_out);
  CHECK(l1.n_hess == l2.n_hess);
}

TEST_CASE("len on a bilinear problem matches npe for any m") {
  FamilyParams fp;
  const SaddleProblem p = make_test_problem(Family::Bilinear, 2, 3, 4, fp);
  const Vector z0 = p.joint_domain().project(Vector::Constant(5, 0.7));
  for (int m : {2, 3, 5}) {
    OracleLedger l1, l2;
    SaddleVi a(p, l1), b(p, l2);
    const SolverReport e = npe(a, z0, traced(10, 1.0));
    const SolverReport l = len(b, z0, traced(10, 1.0, m));
    CHECK(e.z_out == l.z_out);
    CHECK(l2.n_hess == static_cast<std::uint64_t>((10 + m - 1) / m));
  }
}

TEST_CASE("len Hessian ledger") {
  FamilyParams fp;
  const SaddleProblem p = make_test_problem(Family::CubicCoupled, 2, 2, 5, fp);
  std::mt19937_64 rng(2);
  const Vector z0 = start_at_distance(p, 1.0, rng);
  OracleLedger led;
  SaddleVi op(p, led);
  NpeConfig cfg = traced(12, 8.0, 4);
  cfg.stationarity_tol = 0.0;
  const SolverReport r = len(op, z0, cfg);
  CHECK(r.trace.size() == 12);
  CHECK(led.n_hess == 3);
  CHECK(led.n_crn == 12);
  check_trace_identities(r, op, 8.0);

  OracleLedger led2;
  SaddleVi op2(p, led2);
  NpeConfig rc = traced(7, 8.0, 3, 4);
  rc.stationarity_tol = 0.0;
  len_restart(op2, z0, rc);
  CHECK(led2.n_hess == 4u * 3u);  // ceil(7/3) per epoch
}

TEST_CASE("property: trace identities and feasibility") {
  std::mt19937_64 rng(5);
  for (int k = 0; k < 20; ++k) {
    FamilyParams fp;
    fp.box = k % 2;
    const SaddleProblem p = make_test_problem(k % 3 ? Family::CubicCoupled : Family::QuarticCoupled, 2, 3, 600 + k, fp);
    OracleLedger led;
    SaddleVi op(p, led);
    const Vector z0 = (Vector(5) << in_domain(p.dom_x, rng), in_domain(p.dom_y, rng)).finished();
    const double gamma = 2 * p.rho;
    const SolverReport r = (k % 2) ? npe(op, z0, traced(15, gamma)) : len(op, z0, traced(15, gamma, 3));
    check_trace_identities(r, op, gamma);
  }
}

TEST_CASE("property: restart epochs halve the distance with calibrated lengths") {
  for (int m : {1, 4}) {
    for (int inst = 0; inst < 5; ++inst) {
      FamilyParams fp;
      const SaddleProblem p = make_test_problem(Family::CubicCoupled, 3, 3, 100 + inst, fp);
      REQUIRE(p.rho == 2.0);
      std::mt19937_64 rng(inst);
      Vector z = start_at_distance(p, 1.0, rng);
      const Vector zs = p.known_saddle->joined();
      OracleLedger led;
      SaddleVi op(p, led);
      NpeConfig cfg;
      cfg.m = m;
      cfg.gamma = m == 1 ? 4.0 : 8.0;
      cfg.T = m == 1 ? npe_epoch_length(cfg.gamma, 1.0, kNpeRestartC) : len_epoch_length(cfg.gamma, 1.0, m, kLenRestartC);
      for (int s = 0; s < 10; ++s) {
        const double d0 = (z - zs).norm();
        const std::uint64_t h0 = led.n_hess;
        const SolverReport r = m == 1 ? npe(op, z, cfg) : len(op, z, cfg);
        z = r.z_out;
        REQUIRE((z - zs).norm() <= 0.5 * d0);
        if (r.status == RunStatus::Stationary) break;
        if (m > 1) REQUIRE(led.n_hess - h0 == static_cast<std::uint64_t>((cfg.T + m - 1) / m));
      }
    }
  }
}

TEST_CASE("npe_restart reaches 2^-10 in 10 epochs") {
  FamilyParams fp;
  const SaddleProblem p = make_test_problem(Family::CubicCoupled, 3, 3, 100, fp);
  std::mt19937_64 rng(0);
  const Vector z0 = start_at_distance(p, 1.0, rng);
  OracleLedger led;
  SaddleVi op(p, led);
  NpeConfig cfg;
  cfg.gamma = 4.0;
  cfg.T = npe_epoch_length(4.0, 1.0, kNpeRestartC);
  cfg.S = 10;
  const SolverReport r = npe_restart(op, z0, cfg);
  CHECK((r.z_out - p.known_saddle->joined()).norm() <= std::pow(2.0, -10));
}

TEST_CASE("config validation and budget stop") {
  FamilyParams fp;
  const SaddleProblem p = make_test_problem(Family::CubicCoupled, 2, 2, 6, fp);
  OracleLedger led;
  SaddleVi op(p, led);
  const Vector z0 = p.known_saddle->joined();
  NpeConfig bad;
  bad.gamma = 0.0;
  CHECK_THROWS_AS(npe(op, z0, bad), Error);
  CHECK_THROWS_AS(npe(op, Vector::Constant(4, 10.0), NpeConfig{}), Error);

  OracleLedger capped;
  capped.crn_budget = 3;
  SaddleVi c(p, capped);
  NpeConfig cfg;
  cfg.T = 10;
  cfg.gamma = 4.0;
  cfg.stop_on_budget = true;
  std::mt19937_64 rng(3);
  const SolverReport r = npe(c, start_at_distance(p, 1.0, rng), cfg);
  CHECK(r.status == RunStatus::BudgetExhausted);
  CHECK(capped.n_crn == 3);
}
