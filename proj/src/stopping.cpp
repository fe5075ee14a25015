#include "pure_explore/stopping.hpp"

#include <cmath>
#include <stdexcept>

namespace pure_explore {

double h_fn(double u) { return u - std::log(u); }

double h_inv(double y) {
  if (y < 1.0) throw std::domain_error("h_inv defined for y >= 1");
  // h(u) <= u gives h^{-1}(y) >= y; the right bracket y + 2 only covers
  // y <= e^2 - 2, so grow it until h is above the target.
  double lo = 1.0, hi = y + 2.0;
  while (h_fn(hi) < y) hi *= 2.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (h_fn(mid) < y)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

namespace {

// h~_z for z = 3/2 (the only z the threshold uses).
double h_tilde_32(double x) {
  const double z = 1.5;
  const double log_z = std::log(z);
  if (x >= h_fn(1.0 / log_z)) {
    const double u = h_inv(x);
    return std::exp(1.0 / u) * u;
  }
  return z * (x - std::log(log_z));
}

constexpr double kZeta2 = 1.6449340668482264365;  // pi^2 / 6

}  // namespace

double c_exp(double x) {
  return 2.0 * h_tilde_32(0.5 * (h_inv(1.0 + x) + std::log(2.0 * kZeta2)));
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x * 0.70710678118654752440); }

double normal_quantile(double q) {
  if (!(q > 0.0 && q < 1.0)) throw std::domain_error("quantile level must lie in (0, 1)");
  // Acklam's rational approximation, then one Newton step against the
  // erfc-based CDF.
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425;
  double x;
  if (q < plow) {
    const double u = std::sqrt(-2.0 * std::log(q));
    x = (((((c[0] * u + c[1]) * u + c[2]) * u + c[3]) * u + c[4]) * u + c[5]) /
        ((((d[0] * u + d[1]) * u + d[2]) * u + d[3]) * u + 1.0);
  } else if (q <= 1.0 - plow) {
    const double u = q - 0.5;
    const double r = u * u;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * u /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double u = std::sqrt(-2.0 * std::log(1.0 - q));
    x = -(((((c[0] * u + c[1]) * u + c[2]) * u + c[3]) * u + c[4]) * u + c[5]) /
        ((((d[0] * u + d[1]) * u + d[2]) * u + d[3]) * u + 1.0);
  }
  const double pdf = 0.39894228040143267794 * std::exp(-0.5 * x * x);
  if (pdf > 0.0) x -= (normal_cdf(x) - q) / pdf;
  return x;
}

double threshold(ThresholdKind kind, long long t, double delta, int num_arms,
                 std::span<const long long> counts) {
  if (!(delta > 0.0 && delta < 1.0)) throw std::domain_error("delta must lie in (0, 1)");
  switch (kind) {
    case ThresholdKind::Theoretical: {
      if (t < 1) throw std::domain_error("threshold needs t >= 1");
      double acc = 0.0;
      for (long long n : counts) {
        if (n < 1) throw std::domain_error("theoretical threshold needs every arm sampled");
        acc += std::log1p(std::log(static_cast<double>(n)));
      }
      return 3.0 * acc +
             static_cast<double>(num_arms) *
                 c_exp(std::log(1.0 / delta) / static_cast<double>(num_arms));
    }
    case ThresholdKind::Practical:
      if (t < 1) throw std::domain_error("threshold needs t >= 1");
      return std::log((1.0 + std::log(static_cast<double>(t))) / delta);
    case ThresholdKind::Heuristic:
      return normal_quantile(1.0 - delta);
  }
  throw std::logic_error("unreachable");
}

bool should_stop(const Query& query, const SufficientStats& stats, ThresholdKind kind,
                 double delta, const RewardFamily& family, double rho) {
  if (!stats.all_sampled()) return false;
  const auto means = stats.empirical_means();
  const auto p = stats.empirical_allocation();

  ChernoffContext ctx;
  ctx.family = &family;
  ctx.rho = rho;
  std::vector<double> var_hat;
  if (family.kind == FamilyKind::GaussianUnknownVariance) {
    var_hat = stats.empirical_variances();
    ctx.variance_estimates = var_hat;
  }

  const double gamma = glrt_statistic(query, means, p, ctx, TiePolicy::LowestIndex).first;
  const double gate = threshold(kind, stats.t, delta, stats.num_arms(), stats.counts);
  return static_cast<double>(stats.t) * gamma > gate;
}

Answer decision(const Query& query, const SufficientStats& stats) {
  return correct_answer(query, stats.empirical_means(), TiePolicy::LowestIndex);
}

}  // namespace pure_explore
