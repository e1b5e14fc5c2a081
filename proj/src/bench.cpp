#include "bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <thread>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "error.hpp"
#include "gap.hpp"

namespace mmx {

namespace {

constexpr Method kMethods[] = {Method::Npe,        Method::NpeRestart,  Method::Len,
                               Method::LenRestart, Method::AipeRestart, Method::MinimaxAipe};

}  // namespace

const char* method_name(Method m) {
  switch (m) {
    case Method::Npe: return "npe";
    case Method::NpeRestart: return "npe-restart";
    case Method::Len: return "len";
    case Method::LenRestart: return "len-restart";
    case Method::AipeRestart: return "aipe-restart";
    case Method::MinimaxAipe: return "minimax-aipe";
  }
  return "unknown";
}

Method parse_method(const std::string& s) {
  for (Method m : kMethods) {
    if (s == method_name(m)) return m;
  }
  fail(ErrorCode::ConfigError, "unknown method '" + s + "'");
}

// ---- config text ----------------------------------------------------------

namespace {

std::string fmt_double(double v) { return fmt::format("{:.17g}", v); }

double parse_double(const std::string& key, const std::string& s) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used == s.size() && std::isfinite(v)) return v;
  } catch (const std::exception&) {
  }
  fail(ErrorCode::ConfigError, key + ": not a number: '" + s + "'");
}

std::uint64_t parse_u64(const std::string& key, const std::string& s) {
  if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) {
    fail(ErrorCode::ConfigError, key + ": not a non-negative integer: '" + s + "'");
  }
  try {
    return std::stoull(s);
  } catch (const std::exception&) {
    fail(ErrorCode::ConfigError, key + ": integer out of range: '" + s + "'");
  }
}

int parse_int(const std::string& key, const std::string& s) {
  const std::uint64_t v = parse_u64(key, s);
  if (v > 1000000000ULL) fail(ErrorCode::ConfigError, key + ": integer too large");
  return static_cast<int>(v);
}

bool parse_bool(const std::string& key, const std::string& s) {
  if (s == "true") return true;
  if (s == "false") return false;
  fail(ErrorCode::ConfigError, key + ": expected true or false, got '" + s + "'");
}

const char* engine_name(SaddleEngine e) { return e == SaddleEngine::LenRestart ? "len" : "npe"; }

SaddleEngine parse_engine(const std::string& s) {
  if (s == "npe") return SaddleEngine::NpeRestart;
  if (s == "len") return SaddleEngine::LenRestart;
  fail(ErrorCode::ConfigError, "unknown engine '" + s + "'");
}

std::string join_ints(const std::vector<int>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + std::to_string(v[i]);
  return out;
}

std::vector<int> parse_ints(const std::string& key, const std::string& s) {
  std::vector<int> out;
  if (s.empty()) return out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_int(key, item));
  return out;
}

struct Field {
  std::string section, key;
  std::function<std::string(const RunConfig&)> get;
  std::function<void(RunConfig&, const std::string&)> set;
};

const std::vector<Field>& fields() {
  static const std::vector<Field> table = [] {
    std::vector<Field> f;
    auto dbl = [&f](std::string sec, std::string key, double RunConfig::*pm) {
      f.push_back({sec, key, [pm](const RunConfig& c) { return fmt_double(c.*pm); },
                   [pm, key](RunConfig& c, const std::string& v) { c.*pm = parse_double(key, v); }});
    };
    auto param = [&f](std::string key, double FamilyParams::*pm) {
      f.push_back({"problem", key, [pm](const RunConfig& c) { return fmt_double(c.params.*pm); },
                   [pm, key](RunConfig& c, const std::string& v) { c.params.*pm = parse_double(key, v); }});
    };
    f.push_back({"problem", "family", [](const RunConfig& c) { return std::string(family_name(c.family)); },
                 [](RunConfig& c, const std::string& v) {
                   try {
                     c.family = parse_family(v);
                   } catch (const Error& e) {
                     fail(ErrorCode::ConfigError, e.what());
                   }
                 }});
    f.push_back({"problem", "dx", [](const RunConfig& c) { return std::to_string(c.dx); },
                 [](RunConfig& c, const std::string& v) { c.dx = parse_int("dx", v); }});
    f.push_back({"problem", "dy", [](const RunConfig& c) { return std::to_string(c.dy); },
                 [](RunConfig& c, const std::string& v) { c.dy = parse_int("dy", v); }});
    f.push_back({"problem", "seed", [](const RunConfig& c) { return std::to_string(c.seed); },
                 [](RunConfig& c, const std::string& v) { c.seed = parse_u64("seed", v); }});
    param("mu_x", &FamilyParams::mu_x);
    param("mu_y", &FamilyParams::mu_y);
    param("radius_x", &FamilyParams::radius_x);
    param("radius_y", &FamilyParams::radius_y);
    param("coupling", &FamilyParams::coupling);
    param("saddle_offset", &FamilyParams::saddle_offset);
    param("quartic", &FamilyParams::quartic);
    f.push_back({"problem", "quartic_terms", [](const RunConfig& c) { return std::to_string(c.params.quartic_terms); },
                 [](RunConfig& c, const std::string& v) { c.params.quartic_terms = parse_int("quartic_terms", v); }});
    f.push_back({"problem", "box", [](const RunConfig& c) { return std::string(c.params.box ? "true" : "false"); },
                 [](RunConfig& c, const std::string& v) { c.params.box = parse_bool("box", v); }});
    f.push_back({"problem", "regularize", [](const RunConfig& c) { return std::string(c.regularize ? "true" : "false"); },
                 [](RunConfig& c, const std::string& v) { c.regularize = parse_bool("regularize", v); }});
    f.push_back({"method", "name", [](const RunConfig& c) { return std::string(method_name(c.method)); },
                 [](RunConfig& c, const std::string& v) { c.method = parse_method(v); }});
    f.push_back({"method", "engine", [](const RunConfig& c) { return std::string(engine_name(c.engine)); },
                 [](RunConfig& c, const std::string& v) { c.engine = parse_engine(v); }});
    f.push_back({"method", "mode", [](const RunConfig& c) { return std::string(delta_mode_name(c.mode)); },
                 [](RunConfig& c, const std::string& v) {
                   try {
                     c.mode = parse_delta_mode(v);
                   } catch (const Error& e) {
                     fail(ErrorCode::ConfigError, e.what());
                   }
                 }});
    f.push_back({"method", "m", [](const RunConfig& c) { return std::to_string(c.m); },
                 [](RunConfig& c, const std::string& v) { c.m = parse_int("m", v); }});
    dbl("run", "eps", &RunConfig::eps);
    f.push_back({"run", "budget", [](const RunConfig& c) { return std::to_string(c.budget); },
                 [](RunConfig& c, const std::string& v) { c.budget = parse_u64("budget", v); }});
    f.push_back({"run", "checkpoints", [](const RunConfig& c) { return join_ints(c.checkpoints); },
                 [](RunConfig& c, const std::string& v) { c.checkpoints = parse_ints("checkpoints", v); }});
    f.push_back({"run", "output", [](const RunConfig& c) { return c.output; },
                 [](RunConfig& c, const std::string& v) { c.output = v; }});
    f.push_back({"run", "record_wall_time",
                 [](const RunConfig& c) { return std::string(c.record_wall_time ? "true" : "false"); },
                 [](RunConfig& c, const std::string& v) { c.record_wall_time = parse_bool("record_wall_time", v); }});
    return f;
  }();
  return table;
}

void validate(const RunConfig& c) {
  if (c.dx < 1 || c.dy < 1) fail(ErrorCode::ConfigError, "dx and dy must be >= 1");
  if (c.m < 1) fail(ErrorCode::ConfigError, "m must be >= 1");
  if (!(c.eps > 0.0)) fail(ErrorCode::ConfigError, "eps must be > 0");
  if (!(c.params.radius_x > 0.0) || !(c.params.radius_y > 0.0)) fail(ErrorCode::ConfigError, "radii must be > 0");
  for (int t : c.checkpoints) {
    if (t < 1) fail(ErrorCode::ConfigError, "checkpoints must be >= 1");
  }
}

}  // namespace

std::string config_to_text(const RunConfig& cfg) {
  std::string out;
  std::string section;
  for (const Field& f : fields()) {
    if (f.section != section) {
      out += (section.empty() ? "" : "\n") + ("[" + f.section + "]\n");
      section = f.section;
    }
    out += f.key + " = " + f.get(cfg) + "\n";
  }
  return out;
}

void set_config_value(RunConfig& cfg, const std::string& dotted_key, const std::string& value) {
  const auto dot = dotted_key.find('.');
  if (dot == std::string::npos) fail(ErrorCode::ConfigError, "expected section.key, got '" + dotted_key + "'");
  const std::string sec = dotted_key.substr(0, dot), key = dotted_key.substr(dot + 1);
  for (const Field& f : fields()) {
    if (f.section == sec && f.key == key) {
      f.set(cfg, value);
      return;
    }
  }
  fail(ErrorCode::ConfigError, "unknown config key '" + dotted_key + "'");
}

RunConfig config_from_text(const std::string& text) {
  boost::property_tree::ptree tree;
  std::istringstream in(text);
  try {
    boost::property_tree::ini_parser::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    fail(ErrorCode::ConfigError, std::string("malformed config: ") + e.what());
  }
  RunConfig cfg;
  for (const auto& [sec, body] : tree) {
    if (body.empty() && !body.data().empty()) fail(ErrorCode::ConfigError, "key '" + sec + "' outside a section");
    for (const auto& [key, node] : body) set_config_value(cfg, sec + "." + key, node.get_value<std::string>());
  }
  validate(cfg);
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::ConfigError, "cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return config_from_text(ss.str());
}

void save_config(const RunConfig& cfg, const std::string& path) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::IoError, "cannot write '" + path + "'");
  out << config_to_text(cfg);
}

// ---- solving --------------------------------------------------------------

namespace {

// Cubic weight for CRN steps; affine operators have rho = 0 and fall back to the gradient scale.
double crn_weight(const SaddleProblem& p) {
  if (p.rho > 0.0) return p.rho;
  return std::max(p.ell, 1e-12) / std::max(p.diameter(), 1e-300);
}

std::vector<int> default_checkpoints() {
  std::vector<int> t;
  for (int v = 8; v <= (1 << 20); v *= 2) t.push_back(v);
  return t;
}

}  // namespace

RunOutcome run_solve(const RunConfig& cfg) {
  validate(cfg);
  RunOutcome out;
  out.config = cfg;
  const SaddleProblem p = make_test_problem(cfg.family, cfg.dx, cfg.dy, cfg.seed, cfg.params);
  const PairPoint z0{p.dom_x.project(p.dom_x.center()), p.dom_y.project(p.dom_y.center())};
  SurrogateProblem sur;
  const SaddleProblem* run = &p;
  double target = cfg.eps;
  if (cfg.regularize) {
    sur = regularize(p, z0, cfg.eps);
    run = &sur.problem;
    target = cfg.eps / 3.0;
  }
  const double gap_tol = default_gap_tol(p);
  auto measure = [&](const Vector& z) { return duality_gap(p, PairPoint::split(z, p.dx()), gap_tol); };

  const auto t0 = std::chrono::steady_clock::now();
  SolverReport& rep = out.report;
  const bool lazy = cfg.method == Method::Len || cfg.method == Method::LenRestart;
  switch (cfg.method) {
    case Method::Npe:
    case Method::Len: {
      OracleLedger ledger;
      ledger.crn_budget = cfg.budget;
      SaddleVi op(*run, ledger);
      NpeConfig nc;
      nc.gamma = (lazy ? std::max(2, cfg.m) : 2) * crn_weight(*run);
      nc.m = cfg.m;
      nc.stop_on_budget = true;
      rep.z_out = z0.joined();
      rep.status = RunStatus::Converged;
      for (int T : cfg.checkpoints.empty() ? default_checkpoints() : cfg.checkpoints) {
        nc.T = T;
        SolverReport r = lazy ? len(op, z0.joined(), nc) : npe(op, z0.joined(), nc);
        for (auto& row : r.trace) rep.trace.push_back(std::move(row));
        if (r.status == RunStatus::BudgetExhausted) {
          rep.status = RunStatus::BudgetExhausted;
          break;
        }
        rep.z_out = r.z_out;
        rep.status = r.status;
        ++rep.epochs;
        const double g = measure(r.z_out).gap;
        out.checkpoints.push_back(Checkpoint{T, g, ledger.n_crn});
        if (g <= cfg.eps) break;
      }
      rep.ledger = ledger;
      break;
    }
    case Method::NpeRestart:
    case Method::LenRestart: {
      const double mu = std::min(run->mu_x, run->mu_y);
      if (!(mu > 0.0)) fail(ErrorCode::ConfigError, "restart methods need uniform growth; set problem.regularize = true");
      OracleLedger ledger;
      ledger.crn_budget = cfg.budget;
      SaddleVi op(*run, ledger);
      NpeConfig nc;
      nc.m = cfg.m;
      nc.stop_on_budget = true;
      nc.S = restart_stages(run->diameter(), target * 1e-2);
      if (lazy) {
        nc.gamma = std::max(2, cfg.m) * crn_weight(*run);
        nc.T = len_epoch_length(nc.gamma, mu, cfg.m, kLenRestartC);
      } else {
        nc.gamma = 2.0 * crn_weight(*run);
        nc.T = npe_epoch_length(nc.gamma, mu, kNpeRestartC);
      }
      rep = lazy ? len_restart(op, z0.joined(), nc) : npe_restart(op, z0.joined(), nc);
      break;
    }
    case Method::AipeRestart:
    case Method::MinimaxAipe: {
      FrameworkConfig fc = schedule_params(*run, target, cfg.mode, cfg.engine, cfg.m);
      fc.crn_budget = cfg.budget;
      FrameworkReport fr = cfg.method == Method::MinimaxAipe ? minimax_aipe(*run, z0, fc) : aipe_outer_only(*run, z0, fc);
      rep = std::move(fr.report);
      out.framework = fr.stats;
      break;
    }
  }
  const auto t1 = std::chrono::steady_clock::now();
  if (cfg.record_wall_time) out.wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();

  const GapMeasurement g = measure(rep.z_out);
  out.final_gap = g.gap;
  out.gap_certified = g.certified;
  return out;
}

int outcome_exit_code(const RunOutcome& out) { return out.report.status == RunStatus::BudgetExhausted ? 2 : 0; }

namespace {

nlohmann::ordered_json config_json(const RunConfig& cfg) {
  nlohmann::ordered_json j;
  for (const Field& f : fields()) j[f.section][f.key] = f.get(cfg);
  return j;
}

nlohmann::ordered_json number_or_null(double v) {
  return std::isfinite(v) ? nlohmann::ordered_json(v) : nlohmann::ordered_json(nullptr);
}

}  // namespace

std::string report_json(const RunOutcome& out) {
  using J = nlohmann::ordered_json;
  const SolverReport& rep = out.report;
  J j;
  j["schema_version"] = kReportSchemaVersion;
  j["config"] = config_json(out.config);
  j["status"] = status_name(rep.status);
  j["eps"] = out.config.eps;
  j["final_gap"] = out.final_gap;
  j["gap_certified"] = out.gap_certified;
  j["target_met"] = out.final_gap <= out.config.eps;
  j["wall_ms"] = out.wall_ms;
  j["epochs"] = rep.epochs;
  const OracleLedger& l = rep.ledger;
  j["ledger"] = {{"n_value", l.n_value}, {"n_grad", l.n_grad},  {"n_hess", l.n_hess},
                 {"n_crn", l.n_crn},     {"n_eg", l.n_eg},      {"n_schedule_starts", l.n_schedule_starts}};
  if (out.framework) {
    const FrameworkStats& s = *out.framework;
    j["framework"] = {{"crn_saddle", s.crn_saddle},
                      {"crn_min", s.crn_min},
                      {"crn_best_response", s.crn_best_response},
                      {"outer_prox_calls", s.outer_prox_calls},
                      {"middle_prox_calls", s.middle_prox_calls}};
  }
  J cps = J::array();
  for (const Checkpoint& c : out.checkpoints) cps.push_back({{"T", c.T}, {"gap", c.gap}, {"n_crn", c.n_crn}});
  j["checkpoints"] = cps;
  // Each row carries the CRN calls made since the previous row; a closing row holds the rest, so the
  // crn column always sums to the ledger total.
  J trace = J::array();
  std::uint64_t seen = 0;
  for (const TraceRow& r : rep.trace) {
    const std::uint64_t now = std::max(seen, r.n_crn);
    trace.push_back({{"phase", "iteration"},
                     {"iteration", r.iteration},
                     {"crn", now - seen},
                     {"n_crn", now},
                     {"lambda", number_or_null(r.lambda)},
                     {"eta", number_or_null(r.eta)},
                     {"dist", number_or_null(r.dist)}});
    seen = now;
  }
  if (l.n_crn > seen) {
    trace.push_back({{"phase", "finish"},
                     {"iteration", static_cast<std::int64_t>(rep.trace.size())},
                     {"crn", l.n_crn - seen},
                     {"n_crn", l.n_crn},
                     {"lambda", nullptr},
                     {"eta", nullptr},
                     {"dist", nullptr}});
  }
  j["trace"] = trace;
  j["z_out"] = std::vector<double>(rep.z_out.data(), rep.z_out.data() + rep.z_out.size());
  return j.dump(2) + "\n";
}

// ---- sweeps ---------------------------------------------------------------

SlopeFit fit_slope(const std::vector<std::pair<double, double>>& points) {
  const std::size_t n = points.size();
  if (n < 3) fail(ErrorCode::SlopeNeedsThreePoints, "slope fit needs at least 3 points");
  double mx = 0.0, my = 0.0;
  for (const auto& [x, y] : points) {
    if (!std::isfinite(x) || !std::isfinite(y)) fail(ErrorCode::NonFiniteValue, "slope fit on non-finite data");
    mx += x;
    my += y;
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0;
  for (const auto& [x, y] : points) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
  }
  if (!(sxx > 0.0)) fail(ErrorCode::DegenerateFit, "all x values are identical");
  SlopeFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ssr = 0.0;
  for (const auto& [x, y] : points) {
    const double r = y - (fit.intercept + fit.slope * x);
    ssr += r * r;
  }
  fit.ci_halfwidth = 1.96 * std::sqrt(ssr / static_cast<double>(n - 2) / sxx);
  return fit;
}

std::vector<double> parse_eps_grid(const std::string& spec) {
  std::vector<double> grid;
  const auto c1 = spec.find(':');
  if (c1 == std::string::npos) {
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ',')) grid.push_back(parse_double("eps grid", item));
  } else {
    const auto c2 = spec.find(':', c1 + 1);
    if (c2 == std::string::npos || spec.compare(c2 + 1, 3, "log") != 0) {
      fail(ErrorCode::ConfigError, "eps grid must look like 1e-3:1e-7:log5");
    }
    const double a = parse_double("eps grid", spec.substr(0, c1));
    const double b = parse_double("eps grid", spec.substr(c1 + 1, c2 - c1 - 1));
    const int n = parse_int("eps grid", spec.substr(c2 + 4));
    if (!(a > 0.0) || !(b > 0.0) || n < 1) fail(ErrorCode::ConfigError, "eps grid needs positive ends and count");
    const double la = std::log10(a), lb = std::log10(b);
    for (int i = 0; i < n; ++i) {
      const double t = n == 1 ? 0.0 : static_cast<double>(i) / (n - 1);
      // Round to 12 significant digits so decades come out as exact literals.
      grid.push_back(std::stod(fmt::format("{:.12g}", std::pow(10.0, la + t * (lb - la)))));
    }
  }
  for (double e : grid) {
    if (!(e > 0.0)) fail(ErrorCode::ConfigError, "eps values must be > 0");
  }
  return grid;
}

SweepResult run_sweep(const RunConfig& base, const std::vector<double>& eps_grid, int threads) {
  if (eps_grid.size() < 3) fail(ErrorCode::SlopeNeedsThreePoints, "a sweep needs at least 3 eps values");
  validate(base);
  SweepResult res;
  res.config = base;
  std::vector<double> grid = eps_grid;
  std::sort(grid.begin(), grid.end(), std::greater<>());
  res.rows.resize(grid.size());

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < grid.size(); i = next++) {
      SweepRow& row = res.rows[i];
      row.eps = grid[i];
      RunConfig cfg = base;
      cfg.eps = grid[i];
      try {
        const RunOutcome o = run_solve(cfg);
        const OracleLedger& l = o.report.ledger;
        row.n_crn = l.n_crn;
        row.n_hess = l.n_hess;
        row.n_grad = l.n_grad;
        row.n_eg = l.n_eg;
        row.wall_ms = o.wall_ms;
        row.final_gap = o.final_gap;
        row.status = status_name(o.report.status);
      } catch (const Error& e) {
        row.status = "Failed";
        row.error = e.what();
      }
    }
  };
  const int nt = std::clamp(threads, 1, static_cast<int>(grid.size()));
  std::vector<std::thread> pool;
  for (int t = 1; t < nt; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  std::vector<std::pair<double, double>> pts;
  for (const SweepRow& r : res.rows) {
    if (r.status == "Failed" || r.status == status_name(RunStatus::BudgetExhausted) || r.n_crn == 0) continue;
    pts.emplace_back(std::log10(1.0 / r.eps), std::log10(static_cast<double>(r.n_crn)));
  }
  try {
    res.fit = fit_slope(pts);
  } catch (const Error& e) {
    res.fit_error = e.what();
  }
  return res;
}

std::string sweep_csv(const SweepResult& s) {
  std::string out = "eps,n_crn,n_hess,n_grad,n_eg,wall_ms,final_gap,status\n";
  for (const SweepRow& r : s.rows) {
    out += fmt::format("{:.6e},{},{},{},{},{:.3f},{:.6e},{}\n", r.eps, r.n_crn, r.n_hess, r.n_grad, r.n_eg, r.wall_ms,
                       r.final_gap, r.status);
  }
  return out;
}

std::string sweep_json(const SweepResult& s) {
  using J = nlohmann::ordered_json;
  J j;
  j["schema_version"] = kReportSchemaVersion;
  j["config"] = config_json(s.config);
  J rows = J::array();
  for (const SweepRow& r : s.rows) {
    J row = {{"eps", r.eps},     {"n_crn", r.n_crn},         {"n_hess", r.n_hess},   {"n_grad", r.n_grad},
             {"n_eg", r.n_eg},   {"wall_ms", r.wall_ms},     {"final_gap", r.final_gap}, {"status", r.status}};
    if (!r.error.empty()) row["error"] = r.error;
    rows.push_back(row);
  }
  j["rows"] = rows;
  if (s.fit) {
    j["fit"] = {{"slope", s.fit->slope}, {"intercept", s.fit->intercept}, {"ci_halfwidth", s.fit->ci_halfwidth}};
  } else {
    j["fit"] = nullptr;
    j["fit_error"] = s.fit_error;
  }
  return j.dump(2) + "\n";
}

}  // namespace mmx
