#pragma once
#include <cstdint>
#include <span>
#include <vector>

#include "pure_explore/divergences.hpp"
#include "pure_explore/rng.hpp"

namespace pure_explore {

// Per-arm counts and reward sums driving empirical means, posteriors and the
// GLRT. Squared sums feed the variance estimates of the unknown-variance case.
struct SufficientStats {
  long long t = 0;
  std::vector<long long> counts;
  std::vector<double> sums;
  std::vector<double> sumsq;

  explicit SufficientStats(int num_arms)
      : counts(static_cast<std::size_t>(num_arms), 0),
        sums(static_cast<std::size_t>(num_arms), 0.0),
        sumsq(static_cast<std::size_t>(num_arms), 0.0) {}

  int num_arms() const { return static_cast<int>(counts.size()); }

  void update(int arm, double reward) {
    ++t;
    ++counts[static_cast<std::size_t>(arm)];
    sums[static_cast<std::size_t>(arm)] += reward;
    sumsq[static_cast<std::size_t>(arm)] += reward * reward;
  }

  bool all_sampled(long long n0 = 1) const {
    for (long long n : counts)
      if (n < n0) return false;
    return true;
  }

  std::vector<double> empirical_means() const;
  // Biased MLE variance estimates, floored at 1e-12.
  std::vector<double> empirical_variances() const;
  // Empirical allocation N_i / t.
  std::vector<double> empirical_allocation() const;
};

// Per-arm posterior beliefs under uninformative priors: Normal(mean, sigma^2/N)
// for Gaussian rewards with known variances, Beta(1 + successes, 1 + failures)
// for Bernoulli. Defined only once every arm has a sample.
struct Posterior {
  FamilyKind kind = FamilyKind::GaussianKnownVariance;
  std::vector<double> mean;
  std::vector<double> var;    // posterior variance of the mean
  std::vector<double> alpha;  // Bernoulli only
  std::vector<double> beta;   // Bernoulli only

  static Posterior from(const SufficientStats& stats, const RewardFamily& family);

  int num_arms() const { return static_cast<int>(mean.size()); }
  void sample(Rng& rng, std::vector<double>& out) const;
};

}  // namespace pure_explore
