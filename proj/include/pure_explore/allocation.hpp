#pragma once
#include <span>
#include <vector>

#include "pure_explore/chernoff.hpp"
#include "pure_explore/query.hpp"

namespace pure_explore {

// A point on the probability simplex (checked at construction, tol 1e-12).
struct Allocation {
  std::vector<double> weights;
  explicit Allocation(std::vector<double> w);
};

// Dual variables and KKT residuals certifying (near-)optimality of an
// allocation. mu is aligned with pitfalls(query, theta).
struct DualCertificate {
  std::vector<double> mu;
  double gamma = 0.0;                  // min_x C_x(p)
  double stationarity_residual = 0.0;  // max_i |p_i - sum_x mu_x h_i^x|
  double slackness_residual = 0.0;     // max_x mu_x (C_x(p) - gamma)
  double mu_sum_error = 0.0;           // |sum mu - 1|
  bool degenerate = false;             // least-norm fallback was needed
};

struct SolveResult {
  std::vector<double> p;
  double gamma = 0.0;
  long long iterations = 0;
  bool converged = false;
  DualCertificate certificate;
  std::vector<double> best_trace;  // running-best objective, sampled during ascent
};

// Maximin optimal allocation max_p min_x C_x(p). Closed forms cover the
// per-arm and star-shaped pitfall structures; general pair structures run the
// projected subgradient ascent (0.5/sqrt(iter) steps from uniform, 50k cap)
// with an active-set Newton polish to certification accuracy.
SolveResult solve(const Query& query, std::span<const double> theta, const ChernoffContext& ctx);

// KKT certificate at a strictly positive allocation: nonnegative least
// squares of the stationarity system restricted to the near-binding pitfalls
// (relative slack 1e-7); residuals reported, never thresholded.
DualCertificate certify(const Query& query, std::span<const double> theta,
                        const ChernoffContext& ctx, const Allocation& p);

// Signed balance-of-sum-of-squares residual p_I^2/s_I^2 - sum_j p_j^2/s_j^2.
double overall_balance_residual(const Allocation& p, int star,
                                std::span<const double> variances);

namespace detail {
// min_{mu >= 0} ||A mu - b||_2 (Lawson-Hanson on the normal equations).
// Returns true if the passive-set solves stayed nonsingular.
bool nnls(const std::vector<std::vector<double>>& cols, std::span<const double> b,
          std::vector<double>& mu);
void project_to_simplex(std::vector<double>& v);
}  // namespace detail

}  // namespace pure_explore
