#include "pure_explore/divergences.hpp"

#include <cmath>
#include <stdexcept>

namespace pure_explore {

RewardFamily RewardFamily::gaussian(std::vector<double> variances) {
  RewardFamily f;
  f.kind = FamilyKind::GaussianKnownVariance;
  f.variances = std::move(variances);
  for (double v : f.variances) {
    if (!(v > 0.0)) throw std::domain_error("gaussian variance must be positive");
  }
  return f;
}

RewardFamily RewardFamily::bernoulli() {
  RewardFamily f;
  f.kind = FamilyKind::Bernoulli;
  return f;
}

RewardFamily RewardFamily::gaussian_unknown_variance() {
  RewardFamily f;
  f.kind = FamilyKind::GaussianUnknownVariance;
  return f;
}

double RewardFamily::variance(int arm) const {
  if (kind != FamilyKind::GaussianKnownVariance)
    throw std::logic_error("variance() only defined for GaussianKnownVariance");
  return variances.at(static_cast<std::size_t>(arm));
}

void RewardFamily::validate(int num_arms) const {
  if (kind == FamilyKind::GaussianKnownVariance) {
    if (static_cast<int>(variances.size()) != num_arms)
      throw std::invalid_argument("variance list length must match arm count");
    for (double v : variances)
      if (!(v > 0.0)) throw std::domain_error("gaussian variance must be positive");
  } else if (!variances.empty()) {
    throw std::invalid_argument("variance parameters only allowed for GaussianKnownVariance");
  }
}

namespace {

double kl_bernoulli(double m1, double m2) {
  if (!(m1 > 0.0 && m1 < 1.0) || !(m2 > 0.0 && m2 < 1.0))
    throw std::domain_error("bernoulli means must lie in (0, 1)");
  if (m1 == m2) return 0.0;
  return m1 * std::log(m1 / m2) + (1.0 - m1) * std::log((1.0 - m1) / (1.0 - m2));
}

}  // namespace

double kl(const RewardFamily& family, int arm, double m1, double m2) {
  switch (family.kind) {
    case FamilyKind::GaussianKnownVariance: {
      if (!std::isfinite(m1) || !std::isfinite(m2))
        throw std::domain_error("gaussian means must be finite");
      const double d = m1 - m2;
      return d * d / (2.0 * family.variance(arm));
    }
    case FamilyKind::Bernoulli:
      return kl_bernoulli(m1, m2);
    case FamilyKind::GaussianUnknownVariance:
      throw std::logic_error("one-parameter kl undefined for GaussianUnknownVariance");
  }
  return 0.0;
}

double kl_gaussian_two_param(double theta, double sigma2, double vartheta, double varsigma2) {
  if (!(sigma2 > 0.0) || !(varsigma2 > 0.0))
    throw std::domain_error("gaussian variances must be positive");
  const double d = theta - vartheta;
  const double ratio = sigma2 / varsigma2;
  return 0.5 * (d * d / varsigma2 + ratio - 1.0 - std::log(ratio));
}

}  // namespace pure_explore
