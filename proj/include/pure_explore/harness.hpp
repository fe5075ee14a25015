#pragma once
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pure_explore/allocation.hpp"
#include "pure_explore/query.hpp"
#include "pure_explore/rules.hpp"
#include "pure_explore/stats.hpp"
#include "pure_explore/stopping.hpp"

namespace pure_explore {

// Ground truth: true means, reward family, sampling variances (hidden from the
// algorithm for the unknown-variance family) and the CRN equicorrelation.
struct BanditInstance {
  int num_arms = 0;
  RewardFamily family;
  std::vector<double> theta;
  std::vector<double> sampling_variances;  // Gaussian families
  double rho = 0.0;                        // Gaussian known-variance only

  void validate(const Query& query) const;
};

struct RuleSpec {
  bool uniform_baseline = false;
  RuleConfig config;

  std::string name() const { return uniform_baseline ? "uniform" : config.name(); }
};

struct Mode {
  enum class Type { FixedConfidence, FixedBudget, Convergence };
  Type type = Type::FixedConfidence;
  ThresholdKind threshold = ThresholdKind::Practical;
  double delta = 0.1;
  long long step_cap = 1000000;      // fixed-confidence censoring
  long long budget = 0;              // fixed-budget / convergence
  std::vector<long long> checkpoints;  // convergence; default geometric 1.25^m
};

struct ExperimentConfig {
  BanditInstance instance;
  Query query;
  RuleSpec rule;
  Mode mode;
  int replications = 1;
  std::uint64_t master_seed = 0;
};

struct TrajectoryPoint {
  long long t = 0;
  double gamma_true = 0.0;  // Gamma_theta(p_t) at the ground-truth means
  double gamma_emp = 0.0;   // Gamma_{theta_t}(p_t)
  std::vector<double> allocation;
};

struct RunRecord {
  int replication = 0;
  long long tau_or_t = 0;
  Answer answer;
  bool correct = false;
  bool censored = false;
  long long ts_fallbacks = 0;
  std::vector<TrajectoryPoint> trajectory;
  double wall_seconds = 0.0;  // in-memory only, never serialized
};

struct AggregateStats {
  double mean = 0.0;
  double stderr_ = 0.0;
  double ci95 = 0.0;
  double q1 = 0.0;
  double q3 = 0.0;
  double pcs = 0.0;
  int replications = 0;
};

struct ExperimentResult {
  AggregateStats stats;
  std::vector<RunRecord> records;
};

// One reward draw. CRN mode shares a latent common factor across the n-th
// samples of all arms; the factor sequence is owned by the caller and grown
// deterministically from its own stream.
class CrnFactors {
 public:
  explicit CrnFactors(Rng rng) : rng_(rng) {}
  double factor(long long n);

 private:
  Rng rng_;
  std::vector<double> z0_;
};

double sample(const BanditInstance& instance, int arm, Rng& rng, CrnFactors* crn = nullptr,
              long long arm_count = 0);

// Full equicorrelated vector draw (validation of the CRN mechanics).
std::vector<double> sample_crn_vector(const BanditInstance& instance, Rng& rng);

RunRecord run_fixed_confidence(const ExperimentConfig& config, int replication,
                               std::uint64_t seed);
RunRecord run_fixed_budget(const ExperimentConfig& config, int replication, std::uint64_t seed);

// Replication r runs on the stream split(master_seed, r); execution order and
// worker count do not affect the output.
ExperimentResult run_replications(const ExperimentConfig& config, int workers = 1);

std::vector<long long> default_checkpoints(long long budget);

// External interface files.
std::string runs_csv(const std::vector<RunRecord>& records);
std::string trajectory_csv(const std::vector<RunRecord>& records, int num_arms);
std::string step_log_csv(const std::vector<StepRecord>& steps);

// Per-replication step log (the `run` subcommand's output).
RunRecord run_with_step_log(const ExperimentConfig& config, int replication, std::uint64_t seed,
                            std::vector<StepRecord>& steps);

}  // namespace pure_explore
