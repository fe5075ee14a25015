// Command-line front end: solve the optimal-allocation problem, run a single
// seeded replication, run a replicated experiment, or record convergence
// trajectories. Exit codes: 0 success, 1 validation error, 2 runtime/IO error.
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"
#include "pure_explore/config.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;
using namespace pure_explore;

namespace {

struct CommonOpts {
  std::string config_path;
  std::string out_dir;
  int workers = 0;
  std::optional<std::uint64_t> seed;
};

int load_config(const CommonOpts& opts, ExperimentConfig& cfg) {
  std::ifstream in(opts.config_path);
  if (!in) {
    std::cerr << "error: cannot open config file '" << opts.config_path << "'\n";
    return 2;
  }
  std::stringstream ss;
  ss << in.rdbuf();
  auto parsed = parse_config(ss.str());
  if (!parsed.ok) {
    std::cerr << "config validation failed:\n";
    for (const auto& e : parsed.errors) std::cerr << "  - " << e << "\n";
    return 1;
  }
  cfg = std::move(parsed.config);
  if (opts.seed) cfg.master_seed = *opts.seed;
  return 0;
}

int effective_workers(const CommonOpts& opts) {
  if (opts.workers > 0) return opts.workers;
  if (const char* env = std::getenv("PURE_EXPLORE_WORKERS")) {
    const int w = std::atoi(env);
    if (w > 0) return w;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

bool write_file(const fs::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) return false;
  out << contents;
  return static_cast<bool>(out);
}

int ensure_out_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    std::cerr << "error: cannot create output directory '" << dir << "': " << ec.message()
              << "\n";
    return 2;
  }
  return 0;
}

ordered_json answer_json(const Answer& answer) { return answer.to_string(); }

int cmd_solve(const CommonOpts& opts) {
  ExperimentConfig cfg;
  if (int rc = load_config(opts, cfg)) return rc;

  ChernoffContext ctx;
  ctx.family = &cfg.instance.family;
  ctx.rho = cfg.instance.rho;
  std::vector<double> var_buf;
  if (cfg.instance.family.kind == FamilyKind::GaussianUnknownVariance) {
    var_buf = cfg.instance.sampling_variances;
    ctx.variance_estimates = var_buf;
  }

  SolveResult result;
  try {
    result = solve(cfg.query, cfg.instance.theta, ctx);
  } catch (const std::exception& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return 2;
  }

  ordered_json j;
  j["p_star"] = result.p;
  j["gamma_star"] = result.gamma;
  j["converged"] = result.converged;
  j["iterations"] = result.iterations;
  bool positive = true;
  for (double v : result.p)
    if (!(v > 0.0)) positive = false;
  if (positive) {
    ordered_json cert;
    cert["mu"] = result.certificate.mu;
    cert["gamma"] = result.certificate.gamma;
    cert["stationarity_residual"] = result.certificate.stationarity_residual;
    cert["slackness_residual"] = result.certificate.slackness_residual;
    cert["mu_sum_error"] = result.certificate.mu_sum_error;
    cert["degenerate"] = result.certificate.degenerate;
    j["certificate"] = cert;
  } else {
    j["certificate"] = nullptr;  // boundary allocation, dual certificate undefined
  }
  std::cout << j.dump(2) << "\n";
  return result.converged ? 0 : 2;
}

int cmd_run(const CommonOpts& opts) {
  ExperimentConfig cfg;
  if (int rc = load_config(opts, cfg)) return rc;

  std::vector<StepRecord> steps;
  RunRecord rec;
  try {
    const std::uint64_t seed = Rng::mix(cfg.master_seed ^ 0x9E3779B97F4A7C15ULL);
    rec = run_with_step_log(cfg, 0, seed, steps);
  } catch (const std::exception& e) {
    std::cerr << "run error: " << e.what() << "\n";
    return 2;
  }

  ordered_json j;
  j["replication"] = rec.replication + 1;
  j["tau_or_T"] = rec.tau_or_t;
  j["answer"] = answer_json(rec.answer);
  j["correct"] = rec.correct;
  j["censored"] = rec.censored;
  j["fallback_count"] = rec.ts_fallbacks;
  std::cout << j.dump(2) << "\n";

  if (!opts.out_dir.empty()) {
    if (int rc = ensure_out_dir(opts.out_dir)) return rc;
    if (!write_file(fs::path(opts.out_dir) / "step_log.csv", step_log_csv(steps))) {
      std::cerr << "error: cannot write step_log.csv\n";
      return 2;
    }
  }
  return 0;
}

int cmd_experiment(const CommonOpts& opts) {
  ExperimentConfig cfg;
  if (int rc = load_config(opts, cfg)) return rc;

  ExperimentResult result;
  try {
    result = run_replications(cfg, effective_workers(opts));
  } catch (const std::exception& e) {
    std::cerr << "experiment error: " << e.what() << "\n";
    return 2;
  }

  const std::string dir = opts.out_dir.empty() ? "." : opts.out_dir;
  if (int rc = ensure_out_dir(dir)) return rc;
  if (!write_file(fs::path(dir) / "runs.csv", runs_csv(result.records)) ||
      !write_file(fs::path(dir) / "summary.json", summary_json(cfg, result.stats))) {
    std::cerr << "error: cannot write experiment outputs\n";
    return 2;
  }

  std::printf("%s: tau %.1f +/- %.1f (stderr %.2f), PCS %.4f, reps %d\n",
              cfg.rule.name().c_str(), result.stats.mean, result.stats.ci95,
              result.stats.stderr_, result.stats.pcs, result.stats.replications);
  return 0;
}

int cmd_convergence(const CommonOpts& opts) {
  ExperimentConfig cfg;
  if (int rc = load_config(opts, cfg)) return rc;
  if (cfg.mode.type != Mode::Type::Convergence) {
    std::cerr << "convergence subcommand needs mode.type = \"convergence\"\n";
    return 1;
  }

  ExperimentResult result;
  try {
    result = run_replications(cfg, effective_workers(opts));
  } catch (const std::exception& e) {
    std::cerr << "experiment error: " << e.what() << "\n";
    return 2;
  }

  const std::string dir = opts.out_dir.empty() ? "." : opts.out_dir;
  if (int rc = ensure_out_dir(dir)) return rc;
  if (!write_file(fs::path(dir) / "trajectory.csv",
                  trajectory_csv(result.records, cfg.instance.num_arms)) ||
      !write_file(fs::path(dir) / "summary.json", summary_json(cfg, result.stats))) {
    std::cerr << "error: cannot write trajectory outputs\n";
    return 2;
  }
  std::printf("%s: %d replications, budget %lld, trajectory.csv written\n",
              cfg.rule.name().c_str(), result.stats.replications,
              static_cast<long long>(cfg.mode.budget));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pure-explore: dual-directed pure-exploration bandit engine"};
  app.require_subcommand(1);

  CommonOpts opts;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", opts.config_path, "experiment config (JSON)")->required();
    sub->add_option("--out", opts.out_dir, "output directory");
    sub->add_option("--workers", opts.workers,
                    "parallel replication workers (default: PURE_EXPLORE_WORKERS or all cores)");
    sub->add_option("--seed", opts.seed, "override the master seed");
  };

  auto* solve_cmd =
      app.add_subcommand("solve", "solve the maximin optimal allocation and certify it");
  auto* run_cmd = app.add_subcommand("run", "run a single replication (writes a step log)");
  auto* exp_cmd =
      app.add_subcommand("experiment", "run replications; writes runs.csv and summary.json");
  auto* conv_cmd =
      app.add_subcommand("convergence", "record allocation trajectories; writes trajectory.csv");
  for (auto* sub : {solve_cmd, run_cmd, exp_cmd, conv_cmd}) add_common(sub);

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve_cmd->parsed()) return cmd_solve(opts);
    if (run_cmd->parsed()) return cmd_run(opts);
    if (exp_cmd->parsed()) return cmd_experiment(opts);
    if (conv_cmd->parsed()) return cmd_convergence(opts);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
