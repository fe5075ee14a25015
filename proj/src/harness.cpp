#include "pure_explore/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <thread>

namespace pure_explore {

void BanditInstance::validate(const Query& query) const {
  if (num_arms != static_cast<int>(theta.size()))
    throw std::invalid_argument("mean vector length must match arm count");
  family.validate(num_arms);
  validate_query(query, num_arms, family);
  if (family.kind == FamilyKind::Bernoulli) {
    for (double m : theta)
      if (!(m > 0.0 && m < 1.0))
        throw std::invalid_argument("bernoulli means must lie in (0, 1)");
  } else {
    if (static_cast<int>(sampling_variances.size()) != num_arms)
      throw std::invalid_argument("sampling variances must match arm count");
    for (double v : sampling_variances)
      if (!(v > 0.0)) throw std::invalid_argument("sampling variances must be positive");
  }
  if (!(rho >= 0.0 && rho < 1.0)) throw std::domain_error("rho must lie in [0, 1)");
  if (rho > 0.0) {
    if (family.kind != FamilyKind::GaussianKnownVariance)
      throw std::invalid_argument("crn requires gaussian rewards with known variances");
    if (query.kind != Query::Kind::BestArm)
      throw std::invalid_argument("crn runs support the best-arm query");
  }
  // The ground truth must answer the query unambiguously.
  correct_answer(query, theta, TiePolicy::Strict);
}

double CrnFactors::factor(long long n) {
  while (static_cast<long long>(z0_.size()) <= n) z0_.push_back(rng_.normal());
  return z0_[static_cast<std::size_t>(n)];
}

double sample(const BanditInstance& instance, int arm, Rng& rng, CrnFactors* crn,
              long long arm_count) {
  const auto i = static_cast<std::size_t>(arm);
  switch (instance.family.kind) {
    case FamilyKind::Bernoulli:
      return rng.uniform() < instance.theta[i] ? 1.0 : 0.0;
    case FamilyKind::GaussianKnownVariance:
    case FamilyKind::GaussianUnknownVariance: {
      const double sd = std::sqrt(instance.sampling_variances[i]);
      if (instance.rho > 0.0 && crn != nullptr) {
        const double z0 = crn->factor(arm_count);
        const double noise =
            std::sqrt(instance.rho) * z0 + std::sqrt(1.0 - instance.rho) * rng.normal();
        return instance.theta[i] + sd * noise;
      }
      return instance.theta[i] + sd * rng.normal();
    }
  }
  throw std::logic_error("unreachable");
}

std::vector<double> sample_crn_vector(const BanditInstance& instance, Rng& rng) {
  const double z0 = rng.normal();
  std::vector<double> out(instance.theta.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double noise =
        std::sqrt(instance.rho) * z0 + std::sqrt(1.0 - instance.rho) * rng.normal();
    out[i] = instance.theta[i] + std::sqrt(instance.sampling_variances[i]) * noise;
  }
  return out;
}

namespace {

struct Runner {
  const ExperimentConfig& config;
  SufficientStats stats;
  Rng rng;
  CrnFactors crn;
  long long fallbacks = 0;
  std::vector<StepRecord>* step_log = nullptr;

  Runner(const ExperimentConfig& cfg, std::uint64_t seed)
      : config(cfg),
        stats(cfg.instance.num_arms),
        rng(Rng::split(seed, 0)),
        crn(Rng::split(seed, 1)) {}

  void observe(int arm) {
    const double y = sample(config.instance, arm, rng, &crn,
                            stats.counts[static_cast<std::size_t>(arm)]);
    stats.update(arm, y);
  }

  void initialize() {
    const long long n0 = init_rounds(config.instance.family);
    for (long long round = 0; round < n0; ++round)
      for (int arm = 0; arm < config.instance.num_arms; ++arm) observe(arm);
  }

  int allocate() {
    if (config.rule.uniform_baseline) {
      const int arm = uniform_step(stats);
      if (step_log)
        step_log->push_back({stats.t, 0, Pitfall::whole(), arm, 0.0, false});
      return arm;
    }
    StepRecord rec;
    const int arm = pan_step(config.rule.config, config.query, config.instance.family,
                             config.instance.rho, stats, rng, &rec);
    if (rec.ts_fallback) ++fallbacks;
    if (step_log) step_log->push_back(rec);
    return arm;
  }

  ChernoffContext context(std::vector<double>& var_buf) const {
    ChernoffContext ctx;
    ctx.family = &config.instance.family;
    ctx.rho = config.instance.rho;
    if (config.instance.family.kind == FamilyKind::GaussianUnknownVariance) {
      var_buf = stats.empirical_variances();
      ctx.variance_estimates = var_buf;
    }
    return ctx;
  }

  double gamma_at(std::span<const double> theta) const {
    std::vector<double> var_buf;
    const auto ctx = context(var_buf);
    const auto p = stats.empirical_allocation();
    return glrt_statistic(config.query, theta, p, ctx, TiePolicy::LowestIndex).first;
  }
};

RunRecord finish(const ExperimentConfig& config, const Runner& runner, int replication,
                 long long tau, bool censored) {
  RunRecord rec;
  rec.replication = replication;
  rec.tau_or_t = tau;
  rec.answer = decision(config.query, runner.stats);
  rec.correct = !censored && is_correct(config.query, config.instance.theta, rec.answer);
  rec.censored = censored;
  rec.ts_fallbacks = runner.fallbacks;
  return rec;
}

}  // namespace

std::vector<long long> default_checkpoints(long long budget) {
  std::vector<long long> out;
  double x = 1.0;
  while (true) {
    const long long t = static_cast<long long>(std::ceil(x));
    if (t >= budget) break;
    if (out.empty() || out.back() != t) out.push_back(t);
    x *= 1.25;
  }
  out.push_back(budget);
  return out;
}

RunRecord run_fixed_confidence(const ExperimentConfig& config, int replication,
                               std::uint64_t seed) {
  const auto start = std::chrono::steady_clock::now();
  Runner runner(config, seed);
  runner.initialize();

  bool censored = true;
  while (runner.stats.t < config.mode.step_cap) {
    if (should_stop(config.query, runner.stats, config.mode.threshold, config.mode.delta,
                    config.instance.family, config.instance.rho)) {
      censored = false;
      break;
    }
    runner.observe(runner.allocate());
  }
  auto rec = finish(config, runner, replication, runner.stats.t, censored);
  rec.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rec;
}

namespace {

RunRecord run_budget_impl(const ExperimentConfig& config, int replication, std::uint64_t seed,
                          bool record_trajectory, std::vector<StepRecord>* log) {
  const auto start = std::chrono::steady_clock::now();
  if (config.mode.budget < init_rounds(config.instance.family) * config.instance.num_arms)
    throw std::invalid_argument("budget smaller than the initialization rounds");
  Runner runner(config, seed);
  runner.step_log = log;
  runner.initialize();

  std::vector<long long> checkpoints = config.mode.checkpoints;
  if (record_trajectory && checkpoints.empty())
    checkpoints = default_checkpoints(config.mode.budget);
  std::size_t next_cp = 0;

  RunRecord rec;
  auto maybe_checkpoint = [&]() {
    if (!record_trajectory) return;
    if (next_cp >= checkpoints.size() || runner.stats.t < checkpoints[next_cp]) return;
    while (next_cp < checkpoints.size() && runner.stats.t >= checkpoints[next_cp]) ++next_cp;
    TrajectoryPoint pt;
    pt.t = runner.stats.t;
    pt.gamma_true = runner.gamma_at(config.instance.theta);
    pt.gamma_emp = runner.gamma_at(runner.stats.empirical_means());
    pt.allocation = runner.stats.empirical_allocation();
    rec.trajectory.push_back(std::move(pt));
  };

  maybe_checkpoint();
  while (runner.stats.t < config.mode.budget) {
    runner.observe(runner.allocate());
    maybe_checkpoint();
  }

  auto done = finish(config, runner, replication, runner.stats.t, false);
  done.trajectory = std::move(rec.trajectory);
  done.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return done;
}

}  // namespace

RunRecord run_fixed_budget(const ExperimentConfig& config, int replication, std::uint64_t seed) {
  return run_budget_impl(config, replication, seed,
                         config.mode.type == Mode::Type::Convergence, nullptr);
}

RunRecord run_with_step_log(const ExperimentConfig& config, int replication, std::uint64_t seed,
                            std::vector<StepRecord>& steps) {
  if (config.mode.type == Mode::Type::FixedConfidence) {
    // Re-run the loop with logging enabled.
    Runner runner(config, seed);
    runner.step_log = &steps;
    runner.initialize();
    bool censored = true;
    while (runner.stats.t < config.mode.step_cap) {
      if (should_stop(config.query, runner.stats, config.mode.threshold, config.mode.delta,
                      config.instance.family, config.instance.rho)) {
        censored = false;
        break;
      }
      runner.observe(runner.allocate());
    }
    return finish(config, runner, replication, runner.stats.t, censored);
  }
  return run_budget_impl(config, replication, seed,
                         config.mode.type == Mode::Type::Convergence, &steps);
}

ExperimentResult run_replications(const ExperimentConfig& config, int workers) {
  if (config.replications < 1) throw std::invalid_argument("need at least one replication");
  ExperimentResult result;
  result.records.resize(static_cast<std::size_t>(config.replications));

  auto run_one = [&](int r) {
    const std::uint64_t seed = Rng::mix(config.master_seed ^
                                        (0x9E3779B97F4A7C15ULL * (static_cast<std::uint64_t>(r) + 1)));
    if (config.mode.type == Mode::Type::FixedConfidence)
      result.records[static_cast<std::size_t>(r)] = run_fixed_confidence(config, r, seed);
    else
      result.records[static_cast<std::size_t>(r)] = run_fixed_budget(config, r, seed);
  };

  if (workers <= 1) {
    for (int r = 0; r < config.replications; ++r) run_one(r);
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    const int n = std::min<int>(workers, config.replications);
    pool.reserve(static_cast<std::size_t>(n));
    for (int w = 0; w < n; ++w) {
      pool.emplace_back([&]() {
        for (;;) {
          const int r = next.fetch_add(1);
          if (r >= config.replications) return;
          run_one(r);
        }
      });
    }
    for (auto& th : pool) th.join();
  }

  // Aggregation (order-independent: records are indexed by replication).
  std::vector<double> taus;
  taus.reserve(result.records.size());
  int correct = 0;
  for (const auto& rec : result.records) {
    taus.push_back(static_cast<double>(rec.tau_or_t));
    if (rec.correct) ++correct;
  }
  const int n = static_cast<int>(taus.size());
  double mean = 0.0;
  for (double x : taus) mean += x;
  mean /= static_cast<double>(n);
  double var = 0.0;
  if (n > 1) {
    for (double x : taus) var += (x - mean) * (x - mean);
    var /= static_cast<double>(n - 1);
  }
  std::vector<double> sorted = taus;
  std::sort(sorted.begin(), sorted.end());
  auto quantile = [&](double q) {
    const double pos = q * static_cast<double>(n - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = static_cast<std::size_t>(std::ceil(pos));
    const double frac = pos - std::floor(pos);
    return sorted[lo] * (1.0 - frac) + sorted[hi] * frac;
  };

  result.stats.replications = n;
  result.stats.mean = mean;
  result.stats.stderr_ = n > 1 ? std::sqrt(var / static_cast<double>(n)) : 0.0;
  result.stats.ci95 = 1.96 * result.stats.stderr_;
  result.stats.q1 = quantile(0.25);
  result.stats.q3 = quantile(0.75);
  result.stats.pcs = static_cast<double>(correct) / static_cast<double>(n);
  return result;
}

namespace {

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

}  // namespace

std::string runs_csv(const std::vector<RunRecord>& records) {
  std::string out = "replication,tau_or_T,correct,censored,fallback_count\n";
  for (const auto& rec : records) {
    out += std::to_string(rec.replication + 1);
    out += ",";
    out += std::to_string(rec.tau_or_t);
    out += ",";
    out += rec.correct ? "1" : "0";
    out += ",";
    out += rec.censored ? "1" : "0";
    out += ",";
    out += std::to_string(rec.ts_fallbacks);
    out += "\n";
  }
  return out;
}

std::string trajectory_csv(const std::vector<RunRecord>& records, int num_arms) {
  std::string out = "replication,t,gamma_true,gamma_emp";
  for (int i = 1; i <= num_arms; ++i) out += ",p_" + std::to_string(i);
  out += "\n";
  for (const auto& rec : records) {
    for (const auto& pt : rec.trajectory) {
      out += std::to_string(rec.replication + 1);
      out += ",";
      out += std::to_string(pt.t);
      out += ",";
      out += format_double(pt.gamma_true);
      out += ",";
      out += format_double(pt.gamma_emp);
      for (double p : pt.allocation) {
        out += ",";
        out += format_double(p);
      }
      out += "\n";
    }
  }
  return out;
}

std::string step_log_csv(const std::vector<StepRecord>& steps) {
  std::string out = "t,estimate_hash,pitfall,arm,glrt_value,ts_fallback\n";
  char hex[24];
  for (const auto& s : steps) {
    std::snprintf(hex, sizeof(hex), "%016llx", static_cast<unsigned long long>(s.estimate_hash));
    out += std::to_string(s.t);
    out += ",";
    out += hex;
    out += ",";
    out += s.pitfall.to_string();
    out += ",";
    out += std::to_string(s.arm + 1);
    out += ",";
    out += format_double(s.glrt_value);
    out += ",";
    out += s.ts_fallback ? "1" : "0";
    out += "\n";
  }
  return out;
}

}  // namespace pure_explore
