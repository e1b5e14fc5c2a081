// Re-derives the frozen epoch-length constants: for each scheme, c starts at 1/4 and doubles until the worst
// per-epoch contraction on the calibration instances is at most 1/2. Exits 1 if a result differs from the
// constant compiled into the library.
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>

#include "aipe.hpp"
#include "npe.hpp"

using namespace mmx;

namespace {

Vector start_at_distance(const SaddleProblem& p, double d, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  auto push = [&](const Vector& s, const Domain& dom) {
    Vector dir = s - dom.center();
    if (dir.norm() == 0.0) {
      for (Index i = 0; i < dir.size(); ++i) dir[i] = g(rng);
    }
    return Vector(s - (d / std::sqrt(2.0)) * dir.normalized());
  };
  Vector z(p.dx() + p.dy());
  z << push(p.known_saddle->x, p.dom_x), push(p.known_saddle->y, p.dom_y);
  return z;
}

// Five CubicCoupled instances with mu = 1, rho = 2, ten epochs each from distance 1.
double restart_worst(int m, double c) {
  double worst = 0.0;
  for (int inst = 0; inst < 5; ++inst) {
    const SaddleProblem p = make_test_problem(Family::CubicCoupled, 3, 3, 100 + inst);
    std::mt19937_64 rng(inst);
    Vector z = start_at_distance(p, 1.0, rng);
    const Vector zs = p.known_saddle->joined();
    OracleLedger ledger;
    SaddleVi op(p, ledger);
    NpeConfig cfg;
    cfg.m = m;
    cfg.record_trace = false;
    cfg.gamma = std::max(2, m) * p.rho;
    cfg.T = m == 1 ? npe_epoch_length(cfg.gamma, 1.0, c) : len_epoch_length(cfg.gamma, 1.0, m, c);
    for (int s = 0; s < 10; ++s) {
      const double d0 = (z - zs).norm();
      if (d0 < 1e-12) break;
      const SolverReport rep = m == 1 ? npe(op, z, cfg) : len(op, z, cfg);
      z = rep.z_out;
      worst = std::max(worst, (z - zs).norm() / d0);
      if (rep.status == RunStatus::Stationary) break;
    }
  }
  return worst;
}

// (1/3)|z - c|^3 in three dimensions, twenty stages from distance 1 along (1, 1, 1).
double aipe_worst(double cc) {
  const Vector c = (Vector(3) << 0.3, -0.2, 0.1).finished();
  auto h = std::make_shared<CubicQuarticFunction>(c, 1.0);
  OracleLedger ledger;
  FunctionVi op(h, Domain::ball(c, 2.0), 8.0, 2.0, 1.0, ledger, c);
  const InexactOracleBundle b = exact_bundle(op);
  AipeConfig cfg;
  cfg.gamma = 2.0;
  cfg.T = aipe_epoch_length(2.0, 1.0, cc);
  Vector z = c + Vector::Ones(3).normalized();
  double worst = 0.0;
  for (int s = 0; s < 20; ++s) {
    const double d0 = (z - c).norm();
    const AipeResult r = aipe(b, z, cfg);
    z = r.z_out;
    worst = std::max(worst, (z - c).norm() / d0);
    if (r.stationary) break;
  }
  return worst;
}

bool calibrate(const char* name, double frozen, const std::function<double(double)>& worst_for) {
  double c = 0.25;
  double w = worst_for(c);
  std::printf("%s:", name);
  while (w > 0.5 && c < 1024.0) {
    std::printf(" c=%g worst %.3f;", c, w);
    c *= 2.0;
    w = worst_for(c);
  }
  const bool same = c == frozen;
  std::printf(" c=%g worst %.3f -> %g (frozen %g) %s\n", c, w, c, frozen, same ? "ok" : "MISMATCH");
  return same;
}

}  // namespace

int main() {
  bool ok = calibrate("npe-restart", kNpeRestartC, [](double c) { return restart_worst(1, c); });
  ok = calibrate("len-restart m=4", kLenRestartC, [](double c) { return restart_worst(4, c); }) && ok;
  ok = calibrate("aipe-restart", kAipeRestartC, aipe_worst) && ok;
  return ok ? 0 : 1;
}
