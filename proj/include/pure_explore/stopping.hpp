#pragma once
#include <span>

#include "pure_explore/chernoff.hpp"
#include "pure_explore/query.hpp"
#include "pure_explore/stats.hpp"

namespace pure_explore {

enum class ThresholdKind { Theoretical, Practical, Heuristic };

// Stopping threshold gamma(t, delta):
//   Theoretical: 3 sum_i log(1 + log N_i) + K C_exp(log(1/delta) / K)
//   Practical:   log((1 + log t) / delta)
//   Heuristic:   Phi^{-1}(1 - delta)
double threshold(ThresholdKind kind, long long t, double delta, int num_arms,
                 std::span<const long long> counts);

// Chernoff stopping rule: stop iff t * Gamma_{theta_t}(p_t) > gamma(t, delta).
// Evaluated on empirical means (and empirical variances / the correlated form
// when the context says so).
bool should_stop(const Query& query, const SufficientStats& stats, ThresholdKind kind,
                 double delta, const RewardFamily& family, double rho = 0.0);

// Decision rule: the answer under the empirical means, ties toward lower
// indices.
Answer decision(const Query& query, const SufficientStats& stats);

// Pieces of the theoretical threshold, exposed for direct checks.
double h_fn(double u);                 // u - log u on [1, inf)
double h_inv(double y);                // inverse of h_fn, bisection on [1, y + 2]
double c_exp(double x);                // 2 * h~_{3/2}((h^{-1}(1 + x) + log(2 zeta(2))) / 2)
double normal_quantile(double q);      // rational approximation + one Newton polish
double normal_cdf(double x);

}  // namespace pure_explore
