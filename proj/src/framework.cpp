#include "framework.hpp"

#include <cmath>
#include <limits>

#include "error.hpp"
#include "inexact.hpp"

namespace mmx {

const char* delta_mode_name(DeltaMode m) { return m == DeltaMode::Theory ? "theory" : "practical"; }

DeltaMode parse_delta_mode(const std::string& s) {
  if (s == "theory") return DeltaMode::Theory;
  if (s == "practical") return DeltaMode::Practical;
  fail(ErrorCode::ConfigError, "unknown delta mode '" + s + "'");
}

int restart_stages(double diameter, double zeta) {
  if (!(zeta > 0.0)) fail(ErrorCode::BadParams, "precision must be > 0");
  const double s = std::ceil(std::log2(std::max(diameter, zeta) / zeta));
  return std::max(1, static_cast<int>(std::min(s, 1e6)));
}

namespace {

constexpr double kLogFloor = -690.0;  // about log(1e-300)

struct LogClamp {
  bool clamped = false;
  double operator()(double log_value) {
    if (log_value < kLogFloor || !std::isfinite(log_value)) {
      clamped = true;
      return std::exp(kLogFloor);
    }
    return std::exp(log_value);
  }
};

// log of mu z^4 / (144 D^2), the oracle accuracy that keeps an AIPE level at precision z
double log_delta_for(double mu, double log_zeta, double D) {
  return std::log(mu) + 4.0 * log_zeta - std::log(144.0) - 2.0 * std::log(D);
}

}  // namespace

FrameworkConfig schedule_params(const SaddleProblem& p, double eps, DeltaMode mode, SaddleEngine engine, int m) {
  if (!(eps > 0.0) || !std::isfinite(eps)) fail(ErrorCode::BadParams, "eps must be > 0");
  if (m < 1) fail(ErrorCode::BadParams, "m must be >= 1");
  if (!(p.rho > 0.0)) fail(ErrorCode::BadParams, "the framework needs rho > 0");
  FrameworkConfig cfg;
  cfg.m = m;
  cfg.delta_mode = mode;
  cfg.saddle_engine = engine;
  cfg.min_engine = engine == SaddleEngine::LenRestart ? MinEngine::AipeRestartLazy : MinEngine::AipeRestartExact;
  cfg.gamma = engine == SaddleEngine::LenRestart ? p.rho / std::sqrt(static_cast<double>(m)) : p.rho;

  const double D = p.diameter();
  if (mode == DeltaMode::Practical) {
    cfg.zeta1 = eps * 1e-2;
    cfg.zeta2 = cfg.zeta1 * 1e-2;
    cfg.zeta3 = cfg.zeta2 * 1e-2;
    cfg.oracle_delta = 1e-12 * std::max(1.0, p.L * D);
    cfg.crn_tol = std::clamp(1e-2 * cfg.zeta3, 1e-14, kDefaultCrnTol);
    return cfg;
  }

  if (!(p.mu_x > 0.0) || !(p.mu_y > 0.0) || !(p.ell > 0.0) || !(D > 0.0)) {
    fail(ErrorCode::BadParams, "theory mode needs mu_x, mu_y, ell, D > 0");
  }
  const double ell = p.ell, rho = p.rho, g = cfg.gamma;
  const double a = ell + 2.0 * g * D;  // gradient Lipschitz constant of the surrogates
  const double b = ell + 2.0 * rho * D;
  LogClamp clamp;

  const double log_z1 = std::log(p.mu_y) + 2.0 * std::log(eps) - std::log(147.0) - 3.0 * std::log(ell) - 2.0 * std::log(D);
  cfg.zeta1 = clamp(log_z1);

  // Invert the middle residual chain with each of its four terms at delta/4.
  const double log_d1 = log_delta_for(p.mu_x, std::log(cfg.zeta1), D);
  const double q1 = log_d1 - std::log(4.0);
  const double logK = std::log(b) + 0.5 * std::log(ell) - 0.5 * std::log(p.mu_y) - 0.25 * std::log(g / 2.0);
  const double log_6a = std::log(6.0 * a);
  double log_z2 = q1 - log_6a;
  log_z2 = std::min(log_z2, 4.0 * (q1 - logK) - log_6a);
  log_z2 = std::min(log_z2, q1 - std::log(b));
  log_z2 = std::min(log_z2, 2.0 * (q1 - logK - 0.25 * std::log(a)));
  cfg.zeta2 = clamp(log_z2);

  // Inner chain: three terms at delta/3.
  const double log_d2 = log_delta_for(p.mu_y, std::log(cfg.zeta2), D);
  const double q2 = log_d2 - std::log(3.0);
  const double lg = std::log(g / 2.0);
  double log_z3 = q2 - log_6a;
  log_z3 = std::min(log_z3, 2.0 * (q2 - std::log(a) + 0.5 * lg) - log_6a);
  log_z3 = std::min(log_z3, 4.0 * (q2 - 1.5 * std::log(a) + 0.75 * lg) - log_6a);
  cfg.zeta3 = clamp(log_z3);

  cfg.oracle_delta = clamp(log_d1);
  cfg.crn_tol = std::clamp(1e-2 * cfg.zeta3, 1e-14, kDefaultCrnTol);
  cfg.theory_clamped = clamp.clamped;
  return cfg;
}

// ---- surrogates -----------------------------------------------------------

namespace {

SurrogateProblem make_shifted(SurrogateProblem::Kind kind, const SaddleProblem& p, Vector cx, double wx, Vector cy,
                              double wy) {
  if (cx.size() != p.dx() || cy.size() != p.dy()) fail(ErrorCode::DimensionMismatch, "surrogate center has wrong size");
  SurrogateProblem s;
  s.kind = kind;
  s.base = &p;
  s.center_x = cx;
  s.center_y = cy;
  s.weight_x = wx;
  s.weight_y = wy;
  SaddleProblem& q = s.problem;
  q.f = std::make_shared<CubicShiftObjective>(p.f, std::move(cx), wx, std::move(cy), wy);
  const double rx = p.dom_x.max_distance_from(s.center_x), ry = p.dom_y.max_distance_from(s.center_y);
  q.L = p.L + std::hypot(wx * rx * rx, wy * ry * ry);
  q.ell = p.ell + 2.0 * std::max(wx * rx, wy * ry);
  q.rho = p.rho + 2.0 * std::max(wx, wy);
  q.dom_x = p.dom_x;
  q.dom_y = p.dom_y;
  q.family = p.family;
  return s;
}

}  // namespace

SurrogateProblem regularize(const SaddleProblem& p, const PairPoint& z0, double eps) {
  if (!(eps > 0.0) || !std::isfinite(eps)) fail(ErrorCode::BadParams, "eps must be > 0");
  const double Dx = p.dom_x.diameter(), Dy = p.dom_y.diameter();
  if (!(Dx > 0.0) || !(Dy > 0.0) || !std::isfinite(Dx) || !std::isfinite(Dy)) {
    fail(ErrorCode::BadParams, "regularization needs bounded domains");
  }
  const double mx = eps / (2.0 * Dx * Dx * Dx), my = eps / (2.0 * Dy * Dy * Dy);
  SurrogateProblem s = make_shifted(SurrogateProblem::Kind::RegularizedF, p, z0.x, mx, z0.y, my);
  // The input is treated as merely convex-concave; the regularizer alone supplies the growth.
  s.problem.mu_x = mx;
  s.problem.mu_y = my;
  return s;
}

SurrogateProblem surrogate_g(const SaddleProblem& p, const Vector& xbar, double gamma) {
  if (!(gamma > 0.0)) fail(ErrorCode::BadParams, "gamma must be > 0");
  SurrogateProblem s =
      make_shifted(SurrogateProblem::Kind::GFixedXbar, p, xbar, gamma, p.dom_y.project(p.dom_y.center()), 0.0);
  s.problem.mu_x = p.mu_x + gamma;
  s.problem.mu_y = p.mu_y;
  return s;
}

SurrogateProblem surrogate_h(const SaddleProblem& p, const Vector& xbar, const Vector& ybar, double gamma) {
  if (!(gamma > 0.0)) fail(ErrorCode::BadParams, "gamma must be > 0");
  SurrogateProblem s = make_shifted(SurrogateProblem::Kind::HFixedXbarYbar, p, xbar, gamma, ybar, gamma);
  s.problem.mu_x = p.mu_x + gamma;
  s.problem.mu_y = p.mu_y + gamma;
  return s;
}

// ---- nested solvers -------------------------------------------------------

namespace {

bool practical(const FrameworkConfig& cfg) { return cfg.delta_mode == DeltaMode::Practical; }

}  // namespace

double practical_step_tol(double zeta, double diameter) {
  if (!(zeta > 0.0)) fail(ErrorCode::BadParams, "step tolerance needs zeta > 0");
  return std::max(zeta, kStepNoiseFloor * std::max(diameter, 0.0));
}

namespace {

// Charges the CRN calls made inside body to one stats bucket.
template <typename Fn>
auto charged(OracleLedger& ledger, std::uint64_t* bucket, Fn&& body) {
  const std::uint64_t before = ledger.n_crn;
  struct Guard {
    OracleLedger& l;
    std::uint64_t b;
    std::uint64_t* out;
    ~Guard() {
      if (out) *out += l.n_crn - b;
    }
  } guard{ledger, before, bucket};
  return body();
}

std::uint64_t* bucket(FrameworkStats* stats, std::uint64_t FrameworkStats::*field) {
  return stats ? &(stats->*field) : nullptr;
}

// Best responses behind the inexact oracles follow the engine's Hessian schedule.
int oracle_hessian_period(const FrameworkConfig& cfg) {
  return cfg.saddle_engine == SaddleEngine::LenRestart ? cfg.m : 1;
}

// M_min: AIPE-restart on one slice of p with a CRN prox at weight rho.
Vector minimize_slice(const SaddleProblem& p, SliceVi::Block block, const Vector& fixed, const Vector& start,
                      double zeta, const FrameworkConfig& cfg, OracleLedger& ledger) {
  SliceVi op(p, block, fixed, ledger);
  const double mu = op.mu();
  const Domain& dom = block == SliceVi::Block::MinOverX ? p.dom_x : p.dom_y;
  const double weight = p.rho > 0.0 ? p.rho : std::max(1e-12, 1e-3 * p.ell / std::max(dom.diameter(), 1e-300));
  const InexactOracleBundle b = cfg.min_engine == MinEngine::AipeRestartLazy ? lazy_bundle(op, cfg.m, cfg.crn_tol)
                                                                             : exact_bundle(op, cfg.crn_tol);
  AipeConfig ac;
  ac.gamma = weight;
  ac.T = mu > 0.0 ? aipe_epoch_length(weight, mu, kAipeRestartC) : 16;
  ac.S = restart_stages(dom.diameter(), zeta);
  if (practical(cfg)) ac.stop_step = practical_step_tol(zeta, dom.diameter());
  return aipe_restart(b, dom.project(start), ac).z_out;
}

// Value-and-gradient cache for one inexact function; AIPE asks for the gradient at a prox point and later
// for values at the same points.
struct Estimates {
  struct Entry {
    Vector z;
    double value;
    Vector grad;
  };
  std::vector<Entry> entries;
  const Entry* find(const Vector& z) const {
    for (auto it = entries.rbegin(); it != entries.rend(); ++it) {
      if (it->z.size() == z.size() && it->z == z) return &*it;
    }
    return nullptr;
  }
  void add(Entry e) {
    if (entries.size() >= 512) entries.erase(entries.begin());
    entries.push_back(std::move(e));
  }
};

}  // namespace

ProxCertificate iprox_psi(const SaddleProblem& p, const Vector& xbar, const Vector& ybar, double gamma,
                          const FrameworkConfig& cfg, OracleLedger& ledger, FrameworkStats* stats,
                          FrameworkState* state) {
  if (!p.dom_x.contains(xbar, 1e-12) || !p.dom_y.contains(ybar, 1e-12)) fail(ErrorCode::BadParams, "prox center is not feasible");
  const SurrogateProblem h = surrogate_h(p, xbar, ybar, gamma);
  const SaddleProblem& hp = h.problem;
  SaddleVi op(hp, ledger);

  NpeConfig nc;
  nc.m = cfg.m;
  nc.crn_tol = cfg.crn_tol;
  nc.record_trace = false;
  nc.S = restart_stages(hp.diameter(), cfg.zeta3);
  const double mu = std::min(hp.mu_x, hp.mu_y);
  if (cfg.saddle_engine == SaddleEngine::LenRestart) {
    nc.gamma = std::max(2, cfg.m) * hp.rho;
    nc.T = len_epoch_length(nc.gamma, mu, cfg.m, kLenRestartC);
  } else {
    nc.gamma = 2.0 * hp.rho;
    nc.T = npe_epoch_length(nc.gamma, mu, kNpeRestartC);
  }
  if (practical(cfg)) nc.stationarity_tol = practical_step_tol(cfg.zeta3, hp.diameter());

  Vector x_start = state && state->last_inner_x ? *state->last_inner_x : xbar;
  PairPoint start{p.dom_x.project(x_start), ybar};
  const Vector z_in = start.joined();
  const SolverReport rep = charged(ledger, bucket(stats, &FrameworkStats::crn_saddle), [&] {
    return cfg.saddle_engine == SaddleEngine::LenRestart ? len_restart(op, z_in, nc) : npe_restart(op, z_in, nc);
  });

  const EgResult eg = eg_step(op, rep.z_out, 1.0 / (2.0 * hp.ell));
  const PairPoint out = PairPoint::split(eg.z1, p.dx());
  if (state) state->last_inner_x = out.x;

  ProxCertificate cert;
  cert.z = out.y;
  cert.u = eg.c1.tail(p.dy());
  cert.lambda = gamma * (out.y - ybar).norm();
  return cert;
}

ProxCertificate iprox_phi(const SaddleProblem& p, const Vector& xbar, double gamma, const FrameworkConfig& cfg,
                          OracleLedger& ledger, FrameworkStats* stats, FrameworkState* state) {
  if (!p.dom_x.contains(xbar, 1e-12)) fail(ErrorCode::BadParams, "prox center is not feasible");
  const SurrogateProblem g = surrogate_g(p, xbar, gamma);
  const SaddleProblem& gp = g.problem;
  const double delta = cfg.oracle_delta;
  FrameworkState local;
  FrameworkState& st = state ? *state : local;

  // Psi(y) = min_x g(x, y); the middle AIPE minimizes -Psi.
  auto cache = std::make_shared<Estimates>();
  auto estimate = [&, cache](const Vector& y, bool want_grad) -> const Estimates::Entry& {
    if (const auto* e = cache->find(y); e && (!want_grad || e->grad.size() > 0)) return *e;
    BestResponseOptions opt;
    opt.value_tol = delta;
    if (want_grad && !practical(cfg)) opt.dist_tol = delta / gp.ell;
    opt.start = st.last_inner_x;
    opt.hessian_period = oracle_hessian_period(cfg);
    const BestResponse br = charged(ledger, bucket(stats, &FrameworkStats::crn_best_response),
                                    [&] { return best_response(gp, Side::MinOverX, y, opt, ledger); });
    Estimates::Entry e{y, -br.value, Vector()};
    if (want_grad) {
      ++ledger.n_grad;
      e.grad = -gp.grad(br.point, y).y;
    }
    cache->add(std::move(e));
    return cache->entries.back();
  };

  InexactOracleBundle b;
  b.domain = ProductDomain({p.dom_y});
  b.delta = delta;
  b.prox = [&](const Vector& ybar, double w) {
    if (stats) ++stats->middle_prox_calls;
    return iprox_psi(p, xbar, ybar, w, cfg, ledger, stats, &st);
  };
  b.value = [&](const Vector& y) { return estimate(y, false).value; };
  b.grad = [&](const Vector& y) { return estimate(y, true).grad; };

  AipeConfig ac;
  ac.gamma = gamma;
  ac.delta = delta;
  ac.T = aipe_epoch_length(gamma, p.mu_y, kAipeRestartC);
  ac.S = restart_stages(p.dom_y.diameter(), cfg.zeta2);
  if (practical(cfg)) ac.stop_step = practical_step_tol(cfg.zeta2, p.dom_y.diameter());
  const Vector y0 = p.dom_y.project(st.last_middle_y ? *st.last_middle_y : p.dom_y.center());
  const Vector y_hat = aipe_restart(b, y0, ac).z_out;
  st.last_middle_y = y_hat;

  const Vector x_start = st.last_inner_x ? *st.last_inner_x : xbar;
  const Vector x_hat = charged(ledger, bucket(stats, &FrameworkStats::crn_min), [&] {
    return minimize_slice(gp, SliceVi::Block::MinOverX, y_hat, x_start, cfg.zeta2, cfg, ledger);
  });

  SliceVi slice(gp, SliceVi::Block::MinOverX, y_hat, ledger);
  const EgResult eg = eg_step(slice, x_hat, 1.0 / (2.0 * gp.ell));
  ProxCertificate cert;
  cert.z = eg.z1;
  cert.u = eg.c1;
  cert.lambda = gamma * (eg.z1 - xbar).norm();
  return cert;
}

namespace {

void check_framework(const SaddleProblem& p, const PairPoint& z0, const FrameworkConfig& cfg) {
  if (z0.x.size() != p.dx() || z0.y.size() != p.dy()) fail(ErrorCode::DimensionMismatch, "start point has wrong size");
  if (!p.dom_x.contains(z0.x, 1e-12) || !p.dom_y.contains(z0.y, 1e-12)) fail(ErrorCode::BadParams, "start point is not feasible");
  if (!(cfg.gamma > 0.0) || cfg.m < 1) fail(ErrorCode::BadParams, "gamma > 0 and m >= 1 required");
  if (!(cfg.zeta1 > 0.0) || !(cfg.zeta2 > 0.0) || !(cfg.zeta3 > 0.0) || !(cfg.oracle_delta > 0.0)) {
    fail(ErrorCode::BadParams, "precisions must be > 0");
  }
  if (cfg.delta_mode == DeltaMode::Practical && !(cfg.zeta1 > cfg.zeta2 && cfg.zeta2 > cfg.zeta3)) {
    fail(ErrorCode::BadParams, "practical precisions must decrease");
  }
  if (!(p.mu_x > 0.0) || !(p.mu_y > 0.0)) fail(ErrorCode::BadParams, "regularize convex-concave input first");
}


FrameworkReport run_outer(const SaddleProblem& p, const PairPoint& z0, const FrameworkConfig& cfg,
                          const std::function<ProxCertificate(const Vector&, double, OracleLedger&, FrameworkStats&,
                                                              FrameworkState&)>& prox_phi) {
  check_framework(p, z0, cfg);
  FrameworkReport out;
  OracleLedger ledger;
  ledger.crn_budget = cfg.crn_budget;
  FrameworkStats& stats = out.stats;
  FrameworkState state;
  SolverReport& rep = out.report;
  rep.z_out = z0.joined();
  const std::optional<PairPoint> sol = p.known_saddle;

  try {
    auto cache = std::make_shared<Estimates>();
    std::optional<Vector> warm_y = z0.y;
    auto estimate = [&, cache](const Vector& x, bool want_grad) -> const Estimates::Entry& {
      if (const auto* e = cache->find(x); e && (!want_grad || e->grad.size() > 0)) return *e;
      const PhiEstimate est = charged(ledger, &stats.crn_best_response,
                                      [&] { return estimate_Phi(p, x, cfg.oracle_delta, want_grad, ledger, warm_y, !practical(cfg),
                                                                      oracle_hessian_period(cfg)); });
      warm_y = est.y;
      cache->add(Estimates::Entry{x, est.value, want_grad ? est.grad : Vector()});
      return cache->entries.back();
    };

    InexactOracleBundle b;
    b.domain = ProductDomain({p.dom_x});
    b.delta = cfg.oracle_delta;
    std::int64_t calls = 0;
    b.prox = [&](const Vector& xbar, double w) {
      ++stats.outer_prox_calls;
      ProxCertificate c = prox_phi(xbar, w, ledger, stats, state);
      TraceRow row;
      row.iteration = calls++;
      row.lambda = c.lambda;
      if (sol) row.dist = (c.z - sol->x).norm();
      row.n_crn = ledger.n_crn;
      rep.trace.push_back(row);
      return c;
    };
    b.value = [&](const Vector& x) { return estimate(x, false).value; };
    b.grad = [&](const Vector& x) { return estimate(x, true).grad; };

    AipeConfig ac;
    ac.gamma = cfg.gamma;
    ac.delta = cfg.oracle_delta;
    ac.T = aipe_epoch_length(cfg.gamma, p.mu_x, kAipeRestartC);
    ac.S = restart_stages(p.dom_x.diameter(), cfg.zeta1);
    if (practical(cfg)) ac.stop_step = practical_step_tol(cfg.zeta1, p.dom_x.diameter());
    const AipeResult outer = aipe_restart(b, z0.x, ac);
    rep.epochs = outer.stages;
    const Vector x_hat = outer.z_out;

    const Vector y_start = warm_y ? *warm_y : z0.y;
    Vector y_hat = charged(ledger, &stats.crn_min, [&] {
      return minimize_slice(p, SliceVi::Block::MaxOverY, x_hat, y_start, cfg.zeta1, cfg, ledger);
    });
    // Best responses are only Holder-continuous in x when the growth is cubic, so a tiny error in x^ can
    // move y^ far from the saddle. The y-block of the last prox subproblem does not have that problem;
    // practical mode keeps whichever candidate has the larger dual value min_x f(x, y).
    if (practical(cfg) && state.last_middle_y && !(*state.last_middle_y == y_hat)) {
      const Vector& carried = *state.last_middle_y;
      BestResponseOptions opt;
      opt.value_tol = cfg.oracle_delta;
      opt.start = x_hat;
      opt.hessian_period = oracle_hessian_period(cfg);
      const auto dual = [&](const Vector& y) {
        return charged(ledger, &stats.crn_best_response,
                       [&] { return best_response(p, Side::MinOverX, y, opt, ledger).value; });
      };
      if (dual(carried) > dual(y_hat)) y_hat = carried;
    }

    out.before_polish = PairPoint{x_hat, y_hat};
    SaddleVi op(p, ledger);
    const EgResult eg = eg_step(op, PairPoint{x_hat, y_hat}.joined(), 1.0 / (2.0 * p.ell));
    rep.z_out = eg.z1;
    rep.status = outer.stationary ? RunStatus::Stationary : RunStatus::Converged;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::BudgetExhausted) throw;
    rep.status = RunStatus::BudgetExhausted;
  }
  rep.ledger = ledger;
  return out;
}

}  // namespace

FrameworkReport minimax_aipe(const SaddleProblem& p, const PairPoint& z0, const FrameworkConfig& cfg) {
  return run_outer(p, z0, cfg,
                   [&](const Vector& xbar, double w, OracleLedger& led, FrameworkStats& st, FrameworkState& state) {
                     return iprox_phi(p, xbar, w, cfg, led, &st, &state);
                   });
}

FrameworkReport aipe_outer_only(const SaddleProblem& p, const PairPoint& z0, const FrameworkConfig& cfg) {
  return run_outer(p, z0, cfg,
                   [&](const Vector& xbar, double w, OracleLedger& led, FrameworkStats& st, FrameworkState& state) {
                     // The saddle engine on g itself; its y-block has only the base growth.
                     const SurrogateProblem g = surrogate_g(p, xbar, w);
                     SaddleVi op(g.problem, led);
                     NpeConfig nc;
                     nc.m = cfg.m;
                     nc.crn_tol = cfg.crn_tol;
                     nc.record_trace = false;
                     nc.S = restart_stages(g.problem.diameter(), cfg.zeta2);
                     const double mu = std::min(g.problem.mu_x, g.problem.mu_y);
                     const bool lazy = cfg.saddle_engine == SaddleEngine::LenRestart;
                     nc.gamma = lazy ? std::max(2, cfg.m) * g.problem.rho : 2.0 * g.problem.rho;
                     nc.T = lazy ? len_epoch_length(nc.gamma, mu, cfg.m, kLenRestartC)
                                 : npe_epoch_length(nc.gamma, mu, kNpeRestartC);
                     if (practical(cfg)) {
                       nc.stationarity_tol = practical_step_tol(cfg.zeta2, g.problem.diameter());
                     }
                     const Vector x_start = state.last_inner_x ? *state.last_inner_x : xbar;
                     const Vector y_start = state.last_middle_y ? *state.last_middle_y : p.dom_y.center();
                     const Vector zin = PairPoint{p.dom_x.project(x_start), p.dom_y.project(y_start)}.joined();
                     const SolverReport rep = charged(led, &st.crn_saddle, [&] {
                       return lazy ? len_restart(op, zin, nc) : npe_restart(op, zin, nc);
                     });
                     const PairPoint zh = PairPoint::split(rep.z_out, p.dx());
                     state.last_inner_x = zh.x;
                     state.last_middle_y = zh.y;
                     SliceVi slice(g.problem, SliceVi::Block::MinOverX, zh.y, led);
                     const EgResult eg = eg_step(slice, zh.x, 1.0 / (2.0 * g.problem.ell));
                     ProxCertificate c;
                     c.z = eg.z1;
                     c.u = eg.c1;
                     c.lambda = w * (eg.z1 - xbar).norm();
                     return c;
                   });
}

}  // namespace mmx
