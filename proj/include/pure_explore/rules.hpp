#pragma once
#include <cstdint>
#include <optional>
#include <span>

#include "pure_explore/chernoff.hpp"
#include "pure_explore/query.hpp"
#include "pure_explore/stats.hpp"

namespace pure_explore {

enum class EstimationRule { EB, TS };
enum class DetectionRule { KKT, TS, PPS };
enum class SelectionRule { IDS, FixedBeta };

struct RuleConfig {
  EstimationRule estimation = EstimationRule::TS;
  DetectionRule detection = DetectionRule::KKT;
  SelectionRule selection = SelectionRule::IDS;
  double beta = 0.5;                    // FixedBeta only, in (0, 1)
  long long ts_detection_cap = 10000;   // posterior draws before the KKT fallback

  std::string name() const;  // est-det-sel tag, e.g. "ts-kkt-ids"
};

// One allocation step, for the harness step log.
struct StepRecord {
  long long t = 0;
  std::uint64_t estimate_hash = 0;
  Pitfall pitfall;
  int arm = -1;
  double glrt_value = 0.0;  // pitfall value at the estimate and current allocation
  bool ts_fallback = false;
};

// Estimation: EB returns the empirical means, TS one posterior draw per arm.
std::vector<double> estimate(const RuleConfig& config, const SufficientStats& stats,
                             const Posterior& posterior, Rng& rng);

// Detection: the principal pitfall under each rule.
Pitfall detect_kkt(const Query& query, std::span<const double> theta_hat,
                   std::span<const double> p, const ChernoffContext& ctx);

// Resamples the posterior until the draw lands in the alternative of the
// estimate; the pitfall with the largest violation margin is returned. After
// `cap` rejected draws the rule falls back to detect_kkt (flag set).
Pitfall detect_ts(const Query& query, std::span<const double> theta_hat,
                  const Posterior& posterior, Rng& rng, long long cap,
                  std::span<const double> p, const ChernoffContext& ctx, bool* fallback);

// Samples the pitfall proportionally to the posterior mass of its alternative
// (closed-form Gaussian tail weights; Beta marginals are moment-matched).
Pitfall detect_pps(const Query& query, std::span<const double> theta_hat,
                   const Posterior& posterior, Rng& rng, std::span<const double> p,
                   const ChernoffContext& ctx);

// Posterior weights used by detect_pps, exposed for direct checks.
std::vector<double> pps_weights(const Query& query, std::span<const double> theta_hat,
                                const Posterior& posterior);

// Selection.
int select_ids(const ChernoffResult& result, Rng& rng);
int select_beta(int leader, int challenger, double beta, Rng& rng);

// Pair (leader, challenger) of a pitfall; empty for non-pair pitfalls.
std::optional<std::pair<int, int>> top_two_of(const Query& query,
                                              std::span<const double> theta_hat,
                                              const Pitfall& pitfall);

// One full estimate -> detect -> select step. Requires every arm initialized.
int pan_step(const RuleConfig& config, const Query& query, const RewardFamily& family,
             double rho, const SufficientStats& stats, Rng& rng, StepRecord* record = nullptr);

// Round-robin baseline.
int uniform_step(const SufficientStats& stats);

// Samples each arm n0 times: 1, or 2 when the variances must be estimated.
long long init_rounds(const RewardFamily& family);

std::uint64_t hash_vector(std::span<const double> v);

}  // namespace pure_explore
