#pragma once
#include <span>
#include <vector>

namespace pure_explore {

enum class FamilyKind { GaussianKnownVariance, Bernoulli, GaussianUnknownVariance };

// Reward family as seen by the algorithm. Known per-arm variances are carried
// only for GaussianKnownVariance; the unknown-variance family exposes nothing.
struct RewardFamily {
  FamilyKind kind = FamilyKind::GaussianKnownVariance;
  std::vector<double> variances;  // per arm, GaussianKnownVariance only

  static RewardFamily gaussian(std::vector<double> variances);
  static RewardFamily bernoulli();
  static RewardFamily gaussian_unknown_variance();

  double variance(int arm) const;
  void validate(int num_arms) const;
};

// KL divergence between two members of the family identified by their means.
// Bernoulli means must lie strictly inside (0, 1); boundary means are the
// caller's problem (the chernoff module clamps empirical means first).
double kl(const RewardFamily& family, int arm, double m1, double m2);

// KL between two Gaussians with free variances:
//   0.5 * [(theta - vartheta)^2 / varsigma2 + sigma2 / varsigma2 - 1 - log(sigma2 / varsigma2)].
double kl_gaussian_two_param(double theta, double sigma2, double vartheta, double varsigma2);

}  // namespace pure_explore
