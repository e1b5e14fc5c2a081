// Command-line front end; talks to the library only through the C interface.
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "minimax/minimax.h"

namespace {

namespace fs = std::filesystem;

constexpr int kExitError = 1;

struct CliFailure {
  std::string message;
};

void check(mmx_status s) {
  if (s != MMX_OK) throw CliFailure{mmx_last_error()};
}

std::string take(char* s) {
  std::string out(s ? s : "");
  mmx_string_free(s);
  return out;
}

using ConfigPtr = std::unique_ptr<mmx_config, decltype(&mmx_config_free)>;

struct Overrides {
  std::string config_path;
  std::vector<std::string> sets;  // key=value
  std::string seed, budget, mode;
  bool deterministic = false;

  void add_to(CLI::App* cmd, bool config_required) {
    auto* opt = cmd->add_option("--config", config_path, "run configuration file")->check(CLI::ExistingFile);
    if (config_required) opt->required();
    cmd->add_option("--seed", seed, "override problem.seed");
    cmd->add_option("--budget", budget, "override run.budget (CRN calls)");
    cmd->add_option("--mode", mode, "override method.mode")->check(CLI::IsMember({"theory", "practical"}));
    cmd->add_option("--set", sets, "override any key, as section.key=value")->allow_extra_args(false);
    cmd->add_flag("--deterministic", deterministic, "write wall_ms = 0 so outputs repeat byte for byte");
  }

  ConfigPtr load() const {
    mmx_config* raw = nullptr;
    check(config_path.empty() ? mmx_config_new(&raw) : mmx_config_load(config_path.c_str(), &raw));
    ConfigPtr cfg(raw, &mmx_config_free);
    auto set = [&](const std::string& k, const std::string& v) { check(mmx_config_set(cfg.get(), k.c_str(), v.c_str())); };
    for (const std::string& kv : sets) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw CliFailure{"--set expects section.key=value, got '" + kv + "'"};
      set(kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (!seed.empty()) set("problem.seed", seed);
    if (!budget.empty()) set("run.budget", budget);
    if (!mode.empty()) set("method.mode", mode);
    if (deterministic) set("run.record_wall_time", "false");
    return cfg;
  }
};

std::string output_dir_default() {
  const char* env = std::getenv("MMX_OUTPUT_DIR");
  return env && *env ? env : "";
}

void write_file(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw CliFailure{"cannot write " + path.string()};
  out << text;
  if (!out) throw CliFailure{"failed writing " + path.string()};
}

// Destination of a solve report: --out, then run.output, then $MMX_OUTPUT_DIR/report.json, else stdout.
std::string solve_destination(const std::string& out_flag, const mmx_config* cfg) {
  if (!out_flag.empty()) return out_flag;
  char* text = nullptr;
  check(mmx_config_to_text(cfg, &text));
  const std::string t = take(text);
  const auto pos = t.find("\noutput = ");
  if (pos != std::string::npos) {
    const auto end = t.find('\n', pos + 1);
    const std::string v = t.substr(pos + 10, end - pos - 10);
    if (!v.empty()) return v;
  }
  const std::string dir = output_dir_default();
  return dir.empty() ? "" : (fs::path(dir) / "report.json").string();
}

int cmd_solve(const Overrides& ov, const std::string& out_flag) {
  ConfigPtr cfg = ov.load();
  mmx_result* raw = nullptr;
  check(mmx_solve(cfg.get(), &raw));
  std::unique_ptr<mmx_result, decltype(&mmx_result_free)> res(raw, &mmx_result_free);
  char* json = nullptr;
  check(mmx_result_json(res.get(), &json));
  const std::string text = take(json);
  const std::string dest = solve_destination(out_flag, cfg.get());
  if (dest.empty()) {
    std::fputs(text.c_str(), stdout);
  } else {
    write_file(dest, text);
  }
  mmx_summary s{};
  check(mmx_result_summary(res.get(), &s));
  std::fprintf(stderr, "status %s, final gap %.3e, n_crn %llu, n_hess %llu\n",
               s.status == MMX_RUN_BUDGET_EXHAUSTED ? "BudgetExhausted" : s.status == MMX_RUN_STATIONARY ? "Stationary" : "Converged",
               s.final_gap, static_cast<unsigned long long>(s.n_crn), static_cast<unsigned long long>(s.n_hess));
  return mmx_result_exit_code(res.get());
}

int cmd_sweep(const Overrides& ov, const std::string& grid, const std::string& out_flag, int threads) {
  ConfigPtr cfg = ov.load();
  mmx_sweep* raw = nullptr;
  check(mmx_sweep_run(cfg.get(), grid.c_str(), threads, &raw));
  std::unique_ptr<mmx_sweep, decltype(&mmx_sweep_free)> sw(raw, &mmx_sweep_free);
  char* csv = nullptr;
  char* json = nullptr;
  check(mmx_sweep_csv(sw.get(), &csv));
  check(mmx_sweep_json(sw.get(), &json));
  const std::string csv_text = take(csv), json_text = take(json);
  std::string dir = out_flag.empty() ? output_dir_default() : out_flag;
  if (dir.empty()) dir = ".";
  write_file(fs::path(dir) / "sweep.csv", csv_text);
  write_file(fs::path(dir) / "sweep.json", json_text);
  std::fputs(csv_text.c_str(), stdout);
  double slope = 0, intercept = 0, ci = 0;
  if (mmx_sweep_fit(sw.get(), &slope, &intercept, &ci) == MMX_OK) {
    std::fprintf(stderr, "slope of log10 n_crn vs log10(1/eps): %.4f +- %.4f\n", slope, ci);
  } else {
    std::fprintf(stderr, "no slope fit: %s\n", mmx_last_error());
  }
  if (const size_t failed = mmx_sweep_failed_rows(sw.get())) std::fprintf(stderr, "%zu rows failed\n", failed);
  return 0;
}

int cmd_verify(const std::string& suite) {
  size_t count = 0;
  check(mmx_suite_criteria(suite.c_str(), nullptr, 0, &count));
  std::vector<int> ids(count);
  check(mmx_suite_criteria(suite.c_str(), ids.data(), ids.size(), &count));
  bool all = true;
  for (int id : ids) {
    int passed = 0;
    char* report = nullptr;
    check(mmx_verify_criterion(id, &passed, &report));
    std::fputs(take(report).c_str(), stdout);
    std::fflush(stdout);
    all = all && passed;
  }
  return all ? 0 : 1;
}

int cmd_config(const Overrides& ov) {
  ConfigPtr cfg = ov.load();
  char* text = nullptr;
  check(mmx_config_to_text(cfg.get(), &text));
  std::fputs(take(text).c_str(), stdout);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Second-order minimax solvers and complexity benchmarks"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(mmx_version()));

  Overrides solve_ov, sweep_ov, config_ov;
  std::string solve_out, sweep_out, grid = "1e-3:1e-7:log5", suite = "acceptance";
  int threads = 1;

  CLI::App* solve = app.add_subcommand("solve", "run one solver and write a JSON report");
  solve_ov.add_to(solve, true);
  solve->add_option("--out", solve_out, "report path (default: run.output, then $MMX_OUTPUT_DIR/report.json, else stdout)");

  CLI::App* sweep = app.add_subcommand("sweep", "run an eps sweep and fit the complexity exponent");
  sweep_ov.add_to(sweep, true);
  sweep->add_option("--eps-grid", grid, "a:b:logN or a comma list")->capture_default_str();
  sweep->add_option("--out", sweep_out, "output directory (default: $MMX_OUTPUT_DIR, else .)");
  sweep->add_option("--threads", threads, "worker threads across rows")->check(CLI::Range(1, 256))->capture_default_str();

  CLI::App* verify = app.add_subcommand("verify", "run acceptance property suites");
  verify->add_option("--suite", suite, "acceptance, oracle, restart, aipe, framework, or a criterion number")
      ->capture_default_str();

  CLI::App* config = app.add_subcommand("config", "print a configuration (defaults plus overrides)");
  config_ov.add_to(config, false);

  CLI11_PARSE(app, argc, argv);
  try {
    if (solve->parsed()) return cmd_solve(solve_ov, solve_out);
    if (sweep->parsed()) return cmd_sweep(sweep_ov, grid, sweep_out, threads);
    if (verify->parsed()) return cmd_verify(suite);
    if (config->parsed()) return cmd_config(config_ov);
  } catch (const CliFailure& e) {
    std::fprintf(stderr, "error: %s\n", e.message.c_str());
    return kExitError;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitError;
  }
  return kExitError;
}
