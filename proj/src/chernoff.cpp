#include "pure_explore/chernoff.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace pure_explore {
namespace detail {

double clamp_bernoulli(double m) {
  constexpr double eps = 1e-12;
  return std::min(1.0 - eps, std::max(eps, m));
}

namespace {

double kl_mean(const RewardFamily& family, int arm, double m1, double m2) {
  if (family.kind == FamilyKind::Bernoulli)
    return kl(family, arm, clamp_bernoulli(m1), clamp_bernoulli(m2));
  return kl(family, arm, m1, m2);
}

void finalize_weights(ChernoffResult& r, std::span<const double> p,
                      std::span<const int> candidates) {
  const int K = static_cast<int>(p.size());
  r.active_set.clear();
  for (int i = 0; i < K; ++i)
    if (r.gradient[static_cast<std::size_t>(i)] > 0.0) r.active_set.push_back(i);

  r.weights.assign(static_cast<std::size_t>(K), 0.0);
  double total = 0.0;
  for (int i = 0; i < K; ++i) {
    const double w = p[static_cast<std::size_t>(i)] * r.gradient[static_cast<std::size_t>(i)];
    if (w > 0.0) {
      r.weights[static_cast<std::size_t>(i)] = w;
      total += w;
    }
  }
  if (total > 0.0) {
    for (double& w : r.weights) w /= total;
    return;
  }

  // Degenerate allocation. A multi-candidate pitfall with every candidate at
  // zero allocation gets the uniform vector over [K]; a starved subset gets
  // the mass (the limit of p_i grad_i / C); a tied pitfall with no starved
  // arm spreads over its candidates.
  std::size_t zero_count = 0;
  for (int c : candidates)
    if (p[static_cast<std::size_t>(c)] == 0.0) ++zero_count;
  if (candidates.size() >= 2 && zero_count == candidates.size()) {
    for (double& w : r.weights) w = 1.0 / static_cast<double>(K);
    return;
  }
  std::vector<int> starved;
  for (int c : candidates)
    if (p[static_cast<std::size_t>(c)] == 0.0 &&
        r.gradient[static_cast<std::size_t>(c)] > 0.0)
      starved.push_back(c);
  if (!starved.empty()) {
    for (int c : starved)
      r.weights[static_cast<std::size_t>(c)] = 1.0 / static_cast<double>(starved.size());
    return;
  }
  if (!candidates.empty()) {
    for (int c : candidates)
      r.weights[static_cast<std::size_t>(c)] = 1.0 / static_cast<double>(candidates.size());
  } else {
    for (double& w : r.weights) w = 1.0 / static_cast<double>(K);
  }
}

// Boundary minimizer of p_i d(theta_i, v - eps) + p_j d(theta_j, v) for the
// alternative {vartheta_j - eps > vartheta_i}. Exact for Gaussian (precision
// weighted) and for Bernoulli with eps = 0; Bernoulli with eps > 0 solves the
// strictly convex 1-d problem by bisection on its derivative.
double shared_boundary_point(const RewardFamily& family, int i, int j, double ti, double tj,
                             double pi, double pj, double eps) {
  if (family.kind == FamilyKind::GaussianKnownVariance) {
    const double a = pi / family.variance(i);
    const double b = pj / family.variance(j);
    if (a + b <= 0.0) return tj;  // degenerate, caller handles weights
    return (a * (ti + eps) + b * tj) / (a + b);
  }
  // Bernoulli
  const double ci = clamp_bernoulli(ti);
  const double cj = clamp_bernoulli(tj);
  if (pi + pj <= 0.0) return cj;
  if (pi == 0.0) return cj;
  if (pj == 0.0) return std::min(ci + eps, 1.0 - 1e-12);
  if (eps == 0.0) return (pi * ci + pj * cj) / (pi + pj);

  auto deriv = [&](double v) {
    const double vi = v - eps;
    return pi * (vi - ci) / (vi * (1.0 - vi)) + pj * (v - cj) / (v * (1.0 - v));
  };
  double lo = std::max(cj, eps + 1e-13);
  double hi = std::min(ci + eps, 1.0 - 1e-13);
  if (lo >= hi) return 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (deriv(mid) < 0.0)
      lo = mid;
    else
      hi = mid;
    if (hi - lo < 1e-15) break;
  }
  return 0.5 * (lo + hi);
}

// Pitfall flipping the ordering "i beats j by margin eps": alternative
// {vartheta_j - eps > vartheta_i}.
ChernoffResult eval_pair(const RewardFamily& family, std::span<const double> theta,
                         std::span<const double> p, int i, int j, double eps) {
  const int K = static_cast<int>(theta.size());
  ChernoffResult r;
  r.minimizer.assign(theta.begin(), theta.end());
  r.gradient.assign(static_cast<std::size_t>(K), 0.0);

  const double v = shared_boundary_point(family, i, j, theta[static_cast<std::size_t>(i)],
                                         theta[static_cast<std::size_t>(j)],
                                         p[static_cast<std::size_t>(i)],
                                         p[static_cast<std::size_t>(j)], eps);
  const double vi = v - eps;
  r.minimizer[static_cast<std::size_t>(i)] = vi;
  r.minimizer[static_cast<std::size_t>(j)] = v;
  const double di = kl_mean(family, i, theta[static_cast<std::size_t>(i)], vi);
  const double dj = kl_mean(family, j, theta[static_cast<std::size_t>(j)], v);
  r.gradient[static_cast<std::size_t>(i)] = di;
  r.gradient[static_cast<std::size_t>(j)] = dj;
  r.value = p[static_cast<std::size_t>(i)] * di + p[static_cast<std::size_t>(j)] * dj;

  const int cand[2] = {i, j};
  finalize_weights(r, p, cand);
  return r;
}

// Single-arm pitfall: move one arm across the threshold.
ChernoffResult eval_arm_vs_threshold(const RewardFamily& family, std::span<const double> theta,
                                     std::span<const double> p, int i, double tau) {
  const int K = static_cast<int>(theta.size());
  ChernoffResult r;
  r.minimizer.assign(theta.begin(), theta.end());
  r.minimizer[static_cast<std::size_t>(i)] = tau;
  r.gradient.assign(static_cast<std::size_t>(K), 0.0);
  const double d = kl_mean(family, i, theta[static_cast<std::size_t>(i)], tau);
  r.gradient[static_cast<std::size_t>(i)] = d;
  r.value = p[static_cast<std::size_t>(i)] * d;
  const int cand[1] = {i};
  finalize_weights(r, p, cand);
  return r;
}

// Whole-set pitfall: every arm moves to the threshold.
ChernoffResult eval_whole(const RewardFamily& family, std::span<const double> theta,
                          std::span<const double> p, double tau) {
  const int K = static_cast<int>(theta.size());
  ChernoffResult r;
  r.minimizer.assign(static_cast<std::size_t>(K), tau);
  r.gradient.assign(static_cast<std::size_t>(K), 0.0);
  r.value = 0.0;
  std::vector<int> cand(static_cast<std::size_t>(K));
  for (int i = 0; i < K; ++i) {
    cand[static_cast<std::size_t>(i)] = i;
    const double d = kl_mean(family, i, theta[static_cast<std::size_t>(i)], tau);
    r.gradient[static_cast<std::size_t>(i)] = d;
    r.value += p[static_cast<std::size_t>(i)] * d;
  }
  finalize_weights(r, p, cand);
  return r;
}

int star_arm(const Query& query, std::span<const double> theta) {
  return correct_answer(query, theta, TiePolicy::LowestIndex).arms[0];
}

}  // namespace

ChernoffResult eval_unknown_variance_pair(std::span<const double> theta,
                                           std::span<const double> variance_estimates,
                                           std::span<const double> p, int star, int x) {
  const int K = static_cast<int>(theta.size());
  const double ts = theta[static_cast<std::size_t>(star)];
  const double tx = theta[static_cast<std::size_t>(x)];
  const double vs = variance_estimates[static_cast<std::size_t>(star)];
  const double vx = variance_estimates[static_cast<std::size_t>(x)];
  const double ps = p[static_cast<std::size_t>(star)];
  const double px = p[static_cast<std::size_t>(x)];

  // Objective over the shared alternative mean vartheta between tx and ts:
  //   0.5 * [ps log(1 + (ts - v)^2 / vs) + px log(1 + (tx - v)^2 / vx)].
  const double lo0 = std::min(tx, ts), hi0 = std::max(tx, ts);
  auto deriv = [&](double v) {
    return px * (v - tx) / (vx + (v - tx) * (v - tx)) +
           ps * (v - ts) / (vs + (ts - v) * (ts - v));
  };
  double lo = lo0, hi = hi0;
  if (ps <= 0.0 && px <= 0.0) {
    lo = hi = 0.5 * (tx + ts);
  } else if (px <= 0.0) {
    lo = hi = ts;
  } else if (ps <= 0.0) {
    lo = hi = tx;
  } else {
    for (int it = 0; it < 200 && hi - lo > 1e-10; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (deriv(mid) < 0.0)
        lo = mid;
      else
        hi = mid;
    }
  }
  const double v = 0.5 * (lo + hi);

  ChernoffResult r;
  r.minimizer.assign(theta.begin(), theta.end());
  r.minimizer[static_cast<std::size_t>(star)] = v;
  r.minimizer[static_cast<std::size_t>(x)] = v;
  r.minimizer_var.assign(variance_estimates.begin(), variance_estimates.end());
  r.minimizer_var[static_cast<std::size_t>(star)] = vs + (ts - v) * (ts - v);
  r.minimizer_var[static_cast<std::size_t>(x)] = vx + (tx - v) * (tx - v);
  r.gradient.assign(static_cast<std::size_t>(K), 0.0);
  const double gs = 0.5 * std::log1p((ts - v) * (ts - v) / vs);
  const double gx = 0.5 * std::log1p((tx - v) * (tx - v) / vx);
  r.gradient[static_cast<std::size_t>(star)] = gs;
  r.gradient[static_cast<std::size_t>(x)] = gx;
  r.value = ps * gs + px * gx;
  const int cand[2] = {star, x};
  finalize_weights(r, p, cand);
  return r;
}

ChernoffResult eval_crn_pair(std::span<const double> theta, std::span<const double> sigma,
                             double rho, std::span<const double> p, int star, int j) {
  const int K = static_cast<int>(theta.size());
  const double ss = sigma[static_cast<std::size_t>(star)];
  const double sj = sigma[static_cast<std::size_t>(j)];
  const double ps = p[static_cast<std::size_t>(star)];
  const double pj = p[static_cast<std::size_t>(j)];
  const double delta =
      theta[static_cast<std::size_t>(star)] - theta[static_cast<std::size_t>(j)];

  ChernoffResult r;
  r.minimizer.assign(theta.begin(), theta.end());
  r.gradient.assign(static_cast<std::size_t>(K), 0.0);

  if (ps <= 0.0 || pj <= 0.0) {
    // Denominator blows up; value and gradients vanish in the limit. Same
    // starved-candidate conventions as the independent pair form.
    r.value = 0.0;
    r.weights.assign(static_cast<std::size_t>(K), 0.0);
    if (ps <= 0.0 && pj <= 0.0) {
      for (double& w : r.weights) w = 1.0 / static_cast<double>(K);
    } else {
      r.weights[static_cast<std::size_t>(ps <= 0.0 ? star : j)] = 1.0;
    }
    return r;
  }

  const double denom = ss * ss / ps + sj * sj / pj - 2.0 * rho * ss * sj / std::sqrt(ps * pj);
  if (!(denom > 0.0)) throw std::domain_error("crn denominator must be positive");
  r.value = delta * delta / (2.0 * denom);

  // dD/dp for D = ss^2/ps + sj^2/pj - 2 rho ss sj (ps pj)^{-1/2}; then
  // dC/dp = -C/D * dD/dp. Strong correlation at lopsided allocations can make
  // a component negative; the weights clamp it, the gradient reports it.
  const double dD_ds = -ss * ss / (ps * ps) + rho * ss * sj / (std::sqrt(ps * pj) * ps);
  const double dD_dj = -sj * sj / (pj * pj) + rho * ss * sj / (std::sqrt(ps * pj) * pj);
  r.gradient[static_cast<std::size_t>(star)] = -r.value / denom * dD_ds;
  r.gradient[static_cast<std::size_t>(j)] = -r.value / denom * dD_dj;

  // The shared boundary mean of the independent case is kept as the reported
  // minimizer (the correlated projection has no simpler closed form).
  const double a = ps / (ss * ss), b = pj / (sj * sj);
  const double v =
      (a + b) > 0.0
          ? (a * theta[static_cast<std::size_t>(star)] + b * theta[static_cast<std::size_t>(j)]) /
                (a + b)
          : theta[static_cast<std::size_t>(j)];
  r.minimizer[static_cast<std::size_t>(star)] = v;
  r.minimizer[static_cast<std::size_t>(j)] = v;

  const int cand[2] = {star, j};
  finalize_weights(r, p, cand);
  return r;
}

int star_of(const Query& query, std::span<const double> theta) {
  switch (query.kind) {
    case Query::Kind::BestArm:
    case Query::Kind::EpsilonBestArm: {
      int star = 0;
      for (int i = 1; i < static_cast<int>(theta.size()); ++i)
        if (theta[static_cast<std::size_t>(i)] > theta[static_cast<std::size_t>(star)]) star = i;
      return star;
    }
    case Query::Kind::ClosestToThreshold: {
      int star = 0;
      for (int i = 1; i < static_cast<int>(theta.size()); ++i)
        if (std::abs(theta[static_cast<std::size_t>(i)] - query.threshold) <
            std::abs(theta[static_cast<std::size_t>(star)] - query.threshold))
          star = i;
      return star;
    }
    default:
      return -1;
  }
}

namespace {

double pair_value_only(const RewardFamily& family, std::span<const double> theta,
                       std::span<const double> p, int i, int j, double eps) {
  const double pi = p[static_cast<std::size_t>(i)];
  const double pj = p[static_cast<std::size_t>(j)];
  if (pi <= 0.0 && pj <= 0.0) return 0.0;
  const double v = shared_boundary_point(family, i, j, theta[static_cast<std::size_t>(i)],
                                         theta[static_cast<std::size_t>(j)], pi, pj, eps);
  double acc = 0.0;
  if (pi > 0.0) acc += pi * kl_mean(family, i, theta[static_cast<std::size_t>(i)], v - eps);
  if (pj > 0.0) acc += pj * kl_mean(family, j, theta[static_cast<std::size_t>(j)], v);
  return acc;
}

double unknown_variance_value_only(std::span<const double> theta, std::span<const double> var,
                                   std::span<const double> p, int star, int x) {
  const double ts = theta[static_cast<std::size_t>(star)];
  const double tx = theta[static_cast<std::size_t>(x)];
  const double vs = var[static_cast<std::size_t>(star)];
  const double vx = var[static_cast<std::size_t>(x)];
  const double ps = p[static_cast<std::size_t>(star)];
  const double px = p[static_cast<std::size_t>(x)];
  if (ps <= 0.0 || px <= 0.0) return 0.0;
  double lo = std::min(tx, ts), hi = std::max(tx, ts);
  auto deriv = [&](double v) {
    return px * (v - tx) / (vx + (v - tx) * (v - tx)) +
           ps * (v - ts) / (vs + (ts - v) * (ts - v));
  };
  for (int it = 0; it < 200 && hi - lo > 1e-10; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (deriv(mid) < 0.0)
      lo = mid;
    else
      hi = mid;
  }
  const double v = 0.5 * (lo + hi);
  return 0.5 * (ps * std::log1p((ts - v) * (ts - v) / vs) +
                px * std::log1p((tx - v) * (tx - v) / vx));
}

double crn_value_only(std::span<const double> theta, const RewardFamily& family, double rho,
                      std::span<const double> p, int star, int j) {
  const double ps = p[static_cast<std::size_t>(star)];
  const double pj = p[static_cast<std::size_t>(j)];
  if (ps <= 0.0 || pj <= 0.0) return 0.0;
  const double ss = std::sqrt(family.variance(star));
  const double sj = std::sqrt(family.variance(j));
  const double delta =
      theta[static_cast<std::size_t>(star)] - theta[static_cast<std::size_t>(j)];
  const double denom = ss * ss / ps + sj * sj / pj - 2.0 * rho * ss * sj / std::sqrt(ps * pj);
  if (!(denom > 0.0)) throw std::domain_error("crn denominator must be positive");
  return delta * delta / (2.0 * denom);
}

}  // namespace

double pitfall_value(const Query& query, std::span<const double> theta_values,
                     std::span<const double> p, const Pitfall& pitfall,
                     const ChernoffContext& ctx, int star) {
  const RewardFamily& family = *ctx.family;
  if (family.kind == FamilyKind::GaussianUnknownVariance)
    return unknown_variance_value_only(theta_values, ctx.variance_estimates, p, star, pitfall.i);
  if (ctx.rho > 0.0 && query.kind == Query::Kind::BestArm)
    return crn_value_only(theta_values, family, ctx.rho, p, star, pitfall.i);

  switch (query.kind) {
    case Query::Kind::BestArm:
    case Query::Kind::ClosestToThreshold:
      return pair_value_only(family, theta_values, p, star, pitfall.i, 0.0);
    case Query::Kind::EpsilonBestArm:
      return pair_value_only(family, theta_values, p, star, pitfall.i, query.epsilon);
    case Query::Kind::BestK:
    case Query::Kind::Pairwise:
      return pair_value_only(family, theta_values, p, pitfall.i, pitfall.j, 0.0);
    case Query::Kind::AllEpsilonGood:
      return pair_value_only(family, theta_values, p, pitfall.i, pitfall.j, query.epsilon);
    case Query::Kind::Threshold:
      return p[static_cast<std::size_t>(pitfall.i)] *
             kl_mean(family, pitfall.i, theta_values[static_cast<std::size_t>(pitfall.i)],
                     query.threshold);
    case Query::Kind::Murphy: {
      if (pitfall.tag != Pitfall::Tag::Whole)
        return p[static_cast<std::size_t>(pitfall.i)] *
               kl_mean(family, pitfall.i, theta_values[static_cast<std::size_t>(pitfall.i)],
                       query.threshold);
      double acc = 0.0;
      for (std::size_t i = 0; i < theta_values.size(); ++i)
        acc += p[i] * kl_mean(family, static_cast<int>(i), theta_values[i], query.threshold);
      return acc;
    }
    case Query::Kind::Signed: {
      double acc = 0.0;
      for (std::size_t i = 0; i < theta_values.size(); ++i)
        acc += p[i] * kl_mean(family, static_cast<int>(i), theta_values[i], query.threshold);
      return acc;
    }
  }
  throw std::logic_error("unreachable");
}

ChernoffResult eval_pitfall_at(const Query& query, std::span<const double> theta_context,
                               std::span<const double> theta_values, std::span<const double> p,
                               const Pitfall& pitfall, const ChernoffContext& ctx) {
  const RewardFamily& family = *ctx.family;
  if (family.kind == FamilyKind::GaussianUnknownVariance) {
    int star = 0;
    for (int i = 1; i < static_cast<int>(theta_context.size()); ++i)
      if (theta_context[static_cast<std::size_t>(i)] >
          theta_context[static_cast<std::size_t>(star)])
        star = i;
    return eval_unknown_variance_pair(theta_values, ctx.variance_estimates, p, star, pitfall.i);
  }
  if (ctx.rho > 0.0 && query.kind == Query::Kind::BestArm) {
    int star = 0;
    for (int i = 1; i < static_cast<int>(theta_context.size()); ++i)
      if (theta_context[static_cast<std::size_t>(i)] >
          theta_context[static_cast<std::size_t>(star)])
        star = i;
    std::vector<double> sigma(family.variances.size());
    for (std::size_t i = 0; i < sigma.size(); ++i) sigma[i] = std::sqrt(family.variances[i]);
    return eval_crn_pair(theta_values, sigma, ctx.rho, p, star, pitfall.i);
  }

  switch (query.kind) {
    case Query::Kind::BestArm:
      return eval_pair(family, theta_values, p, star_arm(query, theta_context), pitfall.i, 0.0);
    case Query::Kind::EpsilonBestArm:
      return eval_pair(family, theta_values, p, star_arm(query, theta_context), pitfall.i,
                       query.epsilon);
    case Query::Kind::ClosestToThreshold:
      return eval_pair(family, theta_values, p, star_arm(query, theta_context), pitfall.i, 0.0);
    case Query::Kind::BestK:
    case Query::Kind::Pairwise:
      return eval_pair(family, theta_values, p, pitfall.i, pitfall.j, 0.0);
    case Query::Kind::AllEpsilonGood:
      return eval_pair(family, theta_values, p, pitfall.i, pitfall.j, query.epsilon);
    case Query::Kind::Threshold:
      return eval_arm_vs_threshold(family, theta_values, p, pitfall.i, query.threshold);
    case Query::Kind::Murphy:
      if (pitfall.tag == Pitfall::Tag::Whole)
        return eval_whole(family, theta_values, p, query.threshold);
      return eval_arm_vs_threshold(family, theta_values, p, pitfall.i, query.threshold);
    case Query::Kind::Signed:
      return eval_whole(family, theta_values, p, query.threshold);
  }
  throw std::logic_error("unreachable");
}

ChernoffResult eval_pitfall(const Query& query, std::span<const double> theta_hat,
                            std::span<const double> p, const Pitfall& pitfall,
                            const ChernoffContext& ctx) {
  return eval_pitfall_at(query, theta_hat, theta_hat, p, pitfall, ctx);
}

}  // namespace detail

namespace {

void check_nonnegative(std::span<const double> p) {
  for (double v : p)
    if (!(v >= 0.0)) throw std::domain_error("allocation components must be nonnegative");
}

void check_pitfall_member(const Query& query, std::span<const double> theta_hat,
                          const Pitfall& pitfall) {
  const auto set = pitfalls(query, theta_hat, TiePolicy::LowestIndex);
  if (std::find(set.begin(), set.end(), pitfall) == set.end())
    throw std::invalid_argument("pitfall does not belong to the pitfall set of this estimate");
}

}  // namespace

ChernoffResult chernoff(const Query& query, std::span<const double> theta_hat,
                        std::span<const double> p, const Pitfall& pitfall,
                        const ChernoffContext& ctx) {
  check_nonnegative(p);
  check_pitfall_member(query, theta_hat, pitfall);
  return detail::eval_pitfall(query, theta_hat, p, pitfall, ctx);
}

ChernoffResult chernoff_unknown_variance(std::span<const double> theta_hat,
                                         std::span<const double> variance_estimates,
                                         std::span<const double> p, const Pitfall& pitfall) {
  const int K = static_cast<int>(theta_hat.size());
  for (double v : variance_estimates)
    if (!(v > 0.0)) throw std::domain_error("variance estimates must be positive");
  check_nonnegative(p);

  int star = 0;
  for (int i = 1; i < K; ++i)
    if (theta_hat[static_cast<std::size_t>(i)] > theta_hat[static_cast<std::size_t>(star)])
      star = i;
  const int x = pitfall.i;
  if (pitfall.tag != Pitfall::Tag::Arm || x == star || x < 0 || x >= K)
    throw std::invalid_argument("unknown-variance pitfalls are best-arm challengers");
  return detail::eval_unknown_variance_pair(theta_hat, variance_estimates, p, star, x);
}

ChernoffResult chernoff_crn(std::span<const double> theta_hat, std::span<const double> sigma,
                            double rho, std::span<const double> p, const Pitfall& pitfall) {
  const int K = static_cast<int>(theta_hat.size());
  if (!(rho >= 0.0 && rho < 1.0)) throw std::domain_error("rho must lie in [0, 1)");
  check_nonnegative(p);

  int star = 0;
  for (int i = 1; i < K; ++i)
    if (theta_hat[static_cast<std::size_t>(i)] > theta_hat[static_cast<std::size_t>(star)])
      star = i;
  const int j = pitfall.i;
  if (pitfall.tag != Pitfall::Tag::Arm || j == star || j < 0 || j >= K)
    throw std::invalid_argument("crn pitfalls are best-arm challengers");
  return detail::eval_crn_pair(theta_hat, sigma, rho, p, star, j);
}

std::pair<double, Pitfall> glrt_statistic(const Query& query, std::span<const double> theta_hat,
                                          std::span<const double> p, const ChernoffContext& ctx,
                                          TiePolicy policy) {
  const auto set = pitfalls(query, theta_hat, policy);
  const int star = detail::star_of(query, theta_hat);
  double best = std::numeric_limits<double>::infinity();
  Pitfall arg = set.front();
  for (const Pitfall& x : set) {
    const double v = detail::pitfall_value(query, theta_hat, p, x, ctx, star);
    if (v < best) {
      best = v;
      arg = x;
    }
  }
  return {best, arg};
}

}  // namespace pure_explore
