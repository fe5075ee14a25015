#include "pure_explore/rules.hpp"

#include <cmath>
#include <cstring>
#include <limits>
#include <stdexcept>

#include "pure_explore/stopping.hpp"

namespace pure_explore {

std::string RuleConfig::name() const {
  std::string s;
  s += estimation == EstimationRule::EB ? "eb" : "ts";
  s += "-";
  s += detection == DetectionRule::KKT ? "kkt" : (detection == DetectionRule::TS ? "ts" : "pps");
  s += "-";
  s += selection == SelectionRule::IDS ? "ids" : "beta";
  return s;
}

std::uint64_t hash_vector(std::span<const double> v) {
  // FNV-1a over the raw bytes.
  std::uint64_t h = 1469598103934665603ULL;
  for (double x : v) {
    std::uint64_t bits;
    std::memcpy(&bits, &x, sizeof(bits));
    for (int b = 0; b < 8; ++b) {
      h ^= (bits >> (8 * b)) & 0xFF;
      h *= 1099511628211ULL;
    }
  }
  return h;
}

std::vector<double> estimate(const RuleConfig& config, const SufficientStats& stats,
                             const Posterior& posterior, Rng& rng) {
  if (!stats.all_sampled()) throw std::logic_error("estimation before initialization");
  if (config.estimation == EstimationRule::EB) return stats.empirical_means();
  std::vector<double> draw;
  posterior.sample(rng, draw);
  return draw;
}

Pitfall detect_kkt(const Query& query, std::span<const double> theta_hat,
                   std::span<const double> p, const ChernoffContext& ctx) {
  return glrt_statistic(query, theta_hat, p, ctx, TiePolicy::LowestIndex).second;
}

Pitfall detect_ts(const Query& query, std::span<const double> theta_hat,
                  const Posterior& posterior, Rng& rng, long long cap,
                  std::span<const double> p, const ChernoffContext& ctx, bool* fallback) {
  const auto set = pitfalls(query, theta_hat, TiePolicy::LowestIndex);
  if (fallback) *fallback = false;
  if (set.size() == 1) return set.front();
  const Answer answer = correct_answer(query, theta_hat, TiePolicy::LowestIndex);

  std::vector<double> draw;
  for (long long attempt = 0; attempt < cap; ++attempt) {
    posterior.sample(rng, draw);
    int best = -1;
    double best_margin = 0.0;
    for (std::size_t x = 0; x < set.size(); ++x) {
      const double m = violation_margin(query, set[x], answer, draw);
      if (m > best_margin) {
        best_margin = m;
        best = static_cast<int>(x);
      }
    }
    if (best >= 0) return set[static_cast<std::size_t>(best)];
  }
  if (fallback) *fallback = true;
  return detect_kkt(query, theta_hat, p, ctx);
}

std::vector<double> pps_weights(const Query& query, std::span<const double> theta_hat,
                                const Posterior& posterior) {
  const auto set = pitfalls(query, theta_hat, TiePolicy::LowestIndex);
  const auto& m = posterior.mean;
  const auto& v = posterior.var;
  std::vector<double> w(set.size(), 0.0);

  auto pair_weight = [&](int i, int j, double shift) {
    // Posterior mass of {vartheta_j - shift > vartheta_i}.
    return normal_cdf((m[static_cast<std::size_t>(j)] - m[static_cast<std::size_t>(i)] - shift) /
                      std::sqrt(v[static_cast<std::size_t>(i)] + v[static_cast<std::size_t>(j)]));
  };

  const double tau = query.threshold;
  for (std::size_t x = 0; x < set.size(); ++x) {
    const Pitfall& pf = set[x];
    switch (query.kind) {
      case Query::Kind::BestArm: {
        const int star = correct_answer(query, theta_hat, TiePolicy::LowestIndex).arms[0];
        w[x] = pair_weight(star, pf.i, 0.0);
        break;
      }
      case Query::Kind::EpsilonBestArm: {
        const int star = correct_answer(query, theta_hat, TiePolicy::LowestIndex).arms[0];
        w[x] = pair_weight(star, pf.i, query.epsilon);
        break;
      }
      case Query::Kind::BestK:
      case Query::Kind::Pairwise:
        w[x] = pair_weight(pf.i, pf.j, 0.0);
        break;
      case Query::Kind::AllEpsilonGood:
        w[x] = pair_weight(pf.i, pf.j, query.epsilon);
        break;
      case Query::Kind::Threshold: {
        const auto i = static_cast<std::size_t>(pf.i);
        const double s = theta_hat[i] > tau ? 1.0 : -1.0;
        w[x] = normal_cdf(s * (tau - m[i]) / std::sqrt(v[i]));
        break;
      }
      case Query::Kind::Murphy: {
        if (pf.tag == Pitfall::Tag::Whole) {
          w[x] = 1.0;
          break;
        }
        const auto i = static_cast<std::size_t>(pf.i);
        w[x] = normal_cdf((tau - m[i]) / std::sqrt(v[i]));
        break;
      }
      case Query::Kind::Signed:
        w[x] = 1.0;
        break;
      case Query::Kind::ClosestToThreshold: {
        // Linearized margin |vartheta_star - tau| - |vartheta_j - tau|; the
        // exact orthant probability would need a bivariate normal.
        const int star = correct_answer(query, theta_hat, TiePolicy::LowestIndex).arms[0];
        const auto i = static_cast<std::size_t>(star);
        const auto j = static_cast<std::size_t>(pf.i);
        w[x] = normal_cdf((std::abs(m[i] - tau) - std::abs(m[j] - tau)) / std::sqrt(v[i] + v[j]));
        break;
      }
    }
  }
  return w;
}

Pitfall detect_pps(const Query& query, std::span<const double> theta_hat,
                   const Posterior& posterior, Rng& rng, std::span<const double> p,
                   const ChernoffContext& ctx) {
  const auto set = pitfalls(query, theta_hat, TiePolicy::LowestIndex);
  if (set.size() == 1) return set.front();
  const auto w = pps_weights(query, theta_hat, posterior);
  double total = 0.0;
  for (double x : w) total += x;
  if (!(total > 0.0)) return detect_kkt(query, theta_hat, p, ctx);
  return set[static_cast<std::size_t>(rng.categorical(w, total))];
}

int select_ids(const ChernoffResult& result, Rng& rng) {
  double total = 0.0;
  for (double w : result.weights) total += w;
  return rng.categorical(result.weights, total);
}

int select_beta(int leader, int challenger, double beta, Rng& rng) {
  if (!(beta > 0.0 && beta < 1.0)) throw std::domain_error("beta must lie in (0, 1)");
  return rng.uniform() < beta ? leader : challenger;
}

std::optional<std::pair<int, int>> top_two_of(const Query& query,
                                              std::span<const double> theta_hat,
                                              const Pitfall& pitfall) {
  switch (query.kind) {
    case Query::Kind::BestArm:
    case Query::Kind::EpsilonBestArm:
    case Query::Kind::ClosestToThreshold: {
      const int star = correct_answer(query, theta_hat, TiePolicy::LowestIndex).arms[0];
      return std::make_pair(star, pitfall.i);
    }
    case Query::Kind::BestK:
    case Query::Kind::Pairwise:
    case Query::Kind::AllEpsilonGood:
      return std::make_pair(pitfall.i, pitfall.j);
    default:
      return std::nullopt;
  }
}

int pan_step(const RuleConfig& config, const Query& query, const RewardFamily& family,
             double rho, const SufficientStats& stats, Rng& rng, StepRecord* record) {
  if (!stats.all_sampled(init_rounds(family)))
    throw std::logic_error("pan_step before full initialization");

  ChernoffContext ctx;
  ctx.family = &family;
  ctx.rho = rho;
  std::vector<double> var_hat;
  if (family.kind == FamilyKind::GaussianUnknownVariance) {
    if (config.estimation != EstimationRule::EB || config.detection != DetectionRule::KKT)
      throw std::invalid_argument("unknown-variance rewards support the eb-kkt configuration only");
    var_hat = stats.empirical_variances();
    ctx.variance_estimates = var_hat;
  }

  // Estimate.
  std::vector<double> theta_hat;
  Posterior posterior;
  const bool needs_posterior = config.estimation == EstimationRule::TS ||
                               config.detection == DetectionRule::TS ||
                               config.detection == DetectionRule::PPS;
  if (needs_posterior) posterior = Posterior::from(stats, family);
  if (config.estimation == EstimationRule::EB)
    theta_hat = stats.empirical_means();
  else
    posterior.sample(rng, theta_hat);

  const auto p = stats.empirical_allocation();

  // Detect. The estimate owns the answer and hence the pitfall set. Under the
  // kkt rule the pitfalls are ranked by the information in the sample means
  // (identical to the estimate under eb); a pitfall whose alternative already
  // contains the sample means ranks first with zero information.
  bool fallback = false;
  Pitfall pf;
  std::vector<double> emp;
  std::span<const double> eval_theta = theta_hat;
  switch (config.detection) {
    case DetectionRule::KKT: {
      if (config.estimation == EstimationRule::EB) {
        pf = detect_kkt(query, theta_hat, p, ctx);
        break;
      }
      emp = stats.empirical_means();
      eval_theta = emp;
      const auto set = pitfalls(query, theta_hat, TiePolicy::LowestIndex);
      const Answer answer = correct_answer(query, theta_hat, TiePolicy::LowestIndex);
      const int star = detail::star_of(query, theta_hat);
      double best = std::numeric_limits<double>::infinity();
      pf = set.front();
      for (const auto& x : set) {
        const double v = violation_margin(query, x, answer, emp) > 0.0
                             ? 0.0
                             : detail::pitfall_value(query, emp, p, x, ctx, star);
        if (v < best) {
          best = v;
          pf = x;
        }
      }
      break;
    }
    case DetectionRule::TS:
      pf = detect_ts(query, theta_hat, posterior, rng, config.ts_detection_cap, p, ctx,
                     &fallback);
      break;
    case DetectionRule::PPS:
      pf = detect_pps(query, theta_hat, posterior, rng, p, ctx);
      break;
  }

  // Select.
  const ChernoffResult result = detail::eval_pitfall_at(query, theta_hat, eval_theta, p, pf, ctx);
  int arm;
  if (config.selection == SelectionRule::IDS) {
    arm = select_ids(result, rng);
  } else {
    const auto pair = top_two_of(query, theta_hat, pf);
    if (!pair)
      throw std::invalid_argument("beta-tuned selection needs a top-two pitfall structure");
    arm = select_beta(pair->first, pair->second, config.beta, rng);
  }

  if (record) {
    record->t = stats.t;
    record->estimate_hash = hash_vector(theta_hat);
    record->pitfall = pf;
    record->arm = arm;
    record->glrt_value = result.value;
    record->ts_fallback = fallback;
  }
  return arm;
}

int uniform_step(const SufficientStats& stats) {
  return static_cast<int>(stats.t % stats.num_arms());
}

long long init_rounds(const RewardFamily& family) {
  return family.kind == FamilyKind::GaussianUnknownVariance ? 2 : 1;
}

}  // namespace pure_explore
