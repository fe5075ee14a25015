#pragma once
#include <span>
#include <utility>
#include <vector>

#include "pure_explore/divergences.hpp"
#include "pure_explore/query.hpp"

namespace pure_explore {

// Generalized Chernoff information of one pitfall: value, the minimizing
// alternative instance, the per-arm value gradient in the allocation, and the
// selection weights h (p_i * grad_i / value, degenerate cases resolved below).
struct ChernoffResult {
  double value = 0.0;
  std::vector<double> minimizer;      // alternative means
  std::vector<double> minimizer_var;  // alternative variances (two-parameter case only)
  std::vector<double> gradient;       // dC/dp_i, zero off the active arms
  std::vector<double> weights;        // nonnegative, sum to 1
  std::vector<int> active_set;        // arms with positive gradient
};

// Family parameters visible to the algorithm when evaluating pitfalls.
// variance_estimates feeds the unknown-variance variant; rho > 0 switches
// best-arm pitfalls to the correlated (common-random-numbers) form.
struct ChernoffContext {
  const RewardFamily* family = nullptr;
  double rho = 0.0;
  std::span<const double> variance_estimates{};
};

ChernoffResult chernoff(const Query& query, std::span<const double> theta_hat,
                        std::span<const double> p, const Pitfall& pitfall,
                        const ChernoffContext& ctx);

// Gaussian best-arm pitfall with per-arm variances estimated from data. The
// inner minimization over the shared alternative mean runs a bisection on the
// derivative (tolerance 1e-10, the objective is unimodal on the gap interval).
ChernoffResult chernoff_unknown_variance(std::span<const double> theta_hat,
                                         std::span<const double> variance_estimates,
                                         std::span<const double> p, const Pitfall& pitfall);

// Gaussian best-arm pitfall under equicorrelated rewards (sigma = standard
// deviations). rho = 0 reproduces the independent form exactly.
ChernoffResult chernoff_crn(std::span<const double> theta_hat, std::span<const double> sigma,
                            double rho, std::span<const double> p, const Pitfall& pitfall);

// GLRT statistic: the minimum of the pitfall values, with its argmin
// (ties broken toward the lowest pitfall ordinal).
std::pair<double, Pitfall> glrt_statistic(const Query& query, std::span<const double> theta_hat,
                                          std::span<const double> p, const ChernoffContext& ctx,
                                          TiePolicy policy = TiePolicy::Strict);

namespace detail {
// Unvalidated pitfall evaluation shared by the solver and the rules; callers
// must pass a pitfall drawn from pitfalls(query, theta_hat).
ChernoffResult eval_pitfall(const Query& query, std::span<const double> theta_hat,
                            std::span<const double> p, const Pitfall& pitfall,
                            const ChernoffContext& ctx);
// Same, with the pitfall resolved against `theta_context` (whose answer
// defines the pitfall set) and the divergences taken at `theta_values`. The
// two coincide in eval_pitfall.
ChernoffResult eval_pitfall_at(const Query& query, std::span<const double> theta_context,
                               std::span<const double> theta_values, std::span<const double> p,
                               const Pitfall& pitfall, const ChernoffContext& ctx);
// Allocation-free value-only evaluation for hot loops. `star` must be the
// answer arm under the pitfall-set context for star-shaped queries (ignored
// otherwise); star_of computes it.
int star_of(const Query& query, std::span<const double> theta);
double pitfall_value(const Query& query, std::span<const double> theta_values,
                     std::span<const double> p, const Pitfall& pitfall,
                     const ChernoffContext& ctx, int star);
double clamp_bernoulli(double m);
}  // namespace detail

}  // namespace pure_explore
