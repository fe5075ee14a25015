#include "pure_explore/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pure_explore {

std::vector<double> SufficientStats::empirical_means() const {
  std::vector<double> m(counts.size(), 0.0);
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (counts[i] <= 0) throw std::logic_error("empirical mean of an unsampled arm");
    m[i] = sums[i] / static_cast<double>(counts[i]);
  }
  return m;
}

std::vector<double> SufficientStats::empirical_variances() const {
  std::vector<double> v(counts.size(), 0.0);
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (counts[i] <= 0) throw std::logic_error("empirical variance of an unsampled arm");
    const double m = sums[i] / static_cast<double>(counts[i]);
    v[i] = std::max(sumsq[i] / static_cast<double>(counts[i]) - m * m, 1e-12);
  }
  return v;
}

std::vector<double> SufficientStats::empirical_allocation() const {
  std::vector<double> p(counts.size(), 0.0);
  if (t == 0) return p;
  for (std::size_t i = 0; i < counts.size(); ++i)
    p[i] = static_cast<double>(counts[i]) / static_cast<double>(t);
  return p;
}

Posterior Posterior::from(const SufficientStats& stats, const RewardFamily& family) {
  if (!stats.all_sampled())
    throw std::logic_error("posterior requires at least one sample per arm");
  const int K = stats.num_arms();
  Posterior post;
  post.kind = family.kind;
  post.mean.resize(static_cast<std::size_t>(K));
  post.var.resize(static_cast<std::size_t>(K));
  if (family.kind == FamilyKind::Bernoulli) {
    post.alpha.resize(static_cast<std::size_t>(K));
    post.beta.resize(static_cast<std::size_t>(K));
  }
  for (int i = 0; i < K; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    const double n = static_cast<double>(stats.counts[idx]);
    switch (family.kind) {
      case FamilyKind::GaussianKnownVariance: {
        post.mean[idx] = stats.sums[idx] / n;
        post.var[idx] = family.variance(i) / n;
        break;
      }
      case FamilyKind::Bernoulli: {
        const double s = stats.sums[idx];
        const double a = 1.0 + s;
        const double b = 1.0 + (n - s);
        post.alpha[idx] = a;
        post.beta[idx] = b;
        post.mean[idx] = a / (a + b);
        post.var[idx] = a * b / ((a + b) * (a + b) * (a + b + 1.0));
        break;
      }
      case FamilyKind::GaussianUnknownVariance:
        throw std::logic_error("no conjugate posterior wired for unknown-variance rewards");
    }
  }
  return post;
}

void Posterior::sample(Rng& rng, std::vector<double>& out) const {
  const std::size_t K = mean.size();
  out.resize(K);
  if (kind == FamilyKind::Bernoulli) {
    for (std::size_t i = 0; i < K; ++i) out[i] = rng.beta(alpha[i], beta[i]);
  } else {
    for (std::size_t i = 0; i < K; ++i) out[i] = mean[i] + std::sqrt(var[i]) * rng.normal();
  }
}

}  // namespace pure_explore
