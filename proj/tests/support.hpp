#pragma once
// Shared test utilities: random instance/query/pitfall tuples spanning every
// query kind and all three pitfall-evaluation variants, plus finite-difference
// helpers. Test-side only; independent of the solver internals it checks.
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "pure_explore/chernoff.hpp"
#include "pure_explore/query.hpp"
#include "pure_explore/rng.hpp"

namespace test_support {

using namespace pure_explore;

enum class Variant { Standard, UnknownVariance, Crn };

struct Tuple {
  Query query;
  RewardFamily family;
  std::vector<double> theta;
  std::vector<double> p;
  std::vector<double> variance_estimates;  // unknown-variance variant
  double rho = 0.0;                        // crn variant
  Variant variant = Variant::Standard;
  Pitfall pitfall;
};

inline std::vector<double> random_simplex(Rng& rng, int n, double floor = 0.0) {
  std::vector<double> p(static_cast<std::size_t>(n));
  double total = 0.0;
  for (double& v : p) {
    v = floor - std::log(1.0 - rng.uniform());
    total += v;
  }
  for (double& v : p) v /= total;
  return p;
}

// Means with all pairwise gaps and threshold margins at least `margin`.
inline std::vector<double> random_means(Rng& rng, int n, bool bernoulli, double margin) {
  for (int attempt = 0; attempt < 1000; ++attempt) {
    std::vector<double> theta(static_cast<std::size_t>(n));
    for (double& v : theta)
      v = bernoulli ? 0.08 + 0.84 * rng.uniform() : -1.0 + 3.0 * rng.uniform();
    bool ok = true;
    for (int i = 0; i < n && ok; ++i)
      for (int j = i + 1; j < n; ++j)
        if (std::abs(theta[static_cast<std::size_t>(i)] - theta[static_cast<std::size_t>(j)]) <
            margin) {
          ok = false;
          break;
        }
    if (ok) return theta;
  }
  throw std::runtime_error("could not draw separated means");
}

// One tuple per call, cycling through query kinds and variants.
class TupleGenerator {
 public:
  explicit TupleGenerator(std::uint64_t seed) : rng_(seed) {}

  Tuple next() {
    const int kind = counter_++ % 11;
    switch (kind) {
      case 0:
        return pair_query(Query::best_arm(), false);
      case 1:
        return pair_query(Query::best_arm(), true);
      case 2:
        return pair_query(Query::best_k(0), counter_ % 2 == 0);  // k drawn after K
      case 3:
        return threshold_like(Query::Kind::Threshold);
      case 4:
        return threshold_like(Query::Kind::ClosestToThreshold);
      case 5: {
        Tuple t = pair_query(Query::all_epsilon_good(0.05 + 0.2 * rng_.uniform()),
                             counter_ % 2 == 0);
        return t;
      }
      case 6: {  // epsilon-best-arm: unit-variance gaussian
        const int K = 2 + static_cast<int>(rng_.next_u64() % 5);
        Tuple t;
        t.query = Query::epsilon_best_arm(0.05 + 0.3 * rng_.uniform());
        t.theta = random_means(rng_, K, false, 0.05);
        t.family = RewardFamily::gaussian(std::vector<double>(static_cast<std::size_t>(K), 1.0));
        t.p = random_simplex(rng_, K);
        pick_pitfall(t);
        return t;
      }
      case 7:
        return threshold_like(Query::Kind::Signed);
      case 8:
        return threshold_like(Query::Kind::Murphy);
      case 9: {  // unknown-variance best-arm pitfalls
        const int K = 2 + static_cast<int>(rng_.next_u64() % 5);
        Tuple t;
        t.query = Query::best_arm();
        t.variant = Variant::UnknownVariance;
        t.family = RewardFamily::gaussian_unknown_variance();
        t.theta = random_means(rng_, K, false, 0.05);
        t.variance_estimates.resize(static_cast<std::size_t>(K));
        for (double& v : t.variance_estimates) v = 0.5 + 1.5 * rng_.uniform();
        t.p = random_simplex(rng_, K);
        pick_pitfall(t);
        return t;
      }
      default: {  // crn best-arm pitfalls
        const int K = 2 + static_cast<int>(rng_.next_u64() % 5);
        Tuple t;
        t.query = Query::best_arm();
        t.variant = Variant::Crn;
        t.rho = 0.9 * rng_.uniform();
        std::vector<double> var(static_cast<std::size_t>(K));
        for (double& v : var) v = 0.5 + 1.5 * rng_.uniform();
        t.family = RewardFamily::gaussian(var);
        t.theta = random_means(rng_, K, false, 0.05);
        t.p = random_simplex(rng_, K, 0.02);
        pick_pitfall(t);
        return t;
      }
    }
  }

  Rng& rng() { return rng_; }

 private:
  Tuple pair_query(Query q, bool bernoulli) {
    const int K = std::max(3, 2 + static_cast<int>(rng_.next_u64() % 5));
    if (q.kind == Query::Kind::BestK)
      q.k = 1 + static_cast<int>(rng_.next_u64() % static_cast<unsigned>(K - 1));
    Tuple t;
    t.query = q;
    t.theta = random_means(rng_, K, bernoulli, 0.05);
    if (bernoulli) {
      t.family = RewardFamily::bernoulli();
    } else {
      std::vector<double> var(static_cast<std::size_t>(K));
      for (double& v : var) v = 0.5 + 1.5 * rng_.uniform();
      t.family = RewardFamily::gaussian(var);
    }
    t.p = random_simplex(rng_, K);
    pick_pitfall(t);
    return t;
  }

  Tuple threshold_like(Query::Kind kind) {
    const bool bernoulli = counter_ % 2 == 0;
    const int K = 2 + static_cast<int>(rng_.next_u64() % 5);
    Tuple t;
    t.theta = random_means(rng_, K, bernoulli, 0.05);
    double lo = t.theta[0], hi = t.theta[0];
    for (double v : t.theta) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    double tau;
    switch (kind) {
      case Query::Kind::Signed:
        // all means on one side, margin kept
        tau = rng_.uniform() < 0.5 ? lo - 0.1 : hi + 0.1;
        if (bernoulli) tau = std::min(0.97, std::max(0.03, lo - 0.03));
        t.query = Query::signed_query(tau);
        break;
      case Query::Kind::Murphy:
        tau = lo + (hi - lo + 0.1) * rng_.uniform();
        if (bernoulli) tau = std::min(0.95, std::max(0.05, tau));
        if (std::abs(tau - lo) < 0.02) tau = lo + 0.03;
        t.query = Query::murphy(tau);
        break;
      default:
        for (int attempt = 0;; ++attempt) {
          tau = bernoulli ? 0.1 + 0.8 * rng_.uniform() : lo + (hi - lo) * rng_.uniform();
          bool ok = true;
          for (double v : t.theta)
            if (std::abs(v - tau) < 0.02) ok = false;
          if (ok || attempt > 200) break;
        }
        t.query = kind == Query::Kind::Threshold ? Query::threshold_query(tau)
                                                 : Query::closest_to_threshold(tau);
        break;
    }
    if (bernoulli) {
      t.family = RewardFamily::bernoulli();
    } else {
      std::vector<double> var(static_cast<std::size_t>(K));
      for (double& v : var) v = 0.5 + 1.5 * rng_.uniform();
      t.family = RewardFamily::gaussian(var);
    }
    t.p = random_simplex(rng_, K);
    pick_pitfall(t);
    return t;
  }

  void pick_pitfall(Tuple& t) {
    const auto set = pitfalls(t.query, t.theta, TiePolicy::LowestIndex);
    if (t.variant != Variant::Standard) {
      // best-arm challengers only
      std::vector<Pitfall> arms;
      for (const auto& pf : set)
        if (pf.tag == Pitfall::Tag::Arm) arms.push_back(pf);
      t.pitfall = arms[static_cast<std::size_t>(rng_.next_u64() % arms.size())];
      return;
    }
    t.pitfall = set[static_cast<std::size_t>(rng_.next_u64() % set.size())];
  }

  Rng rng_;
  int counter_ = 0;
};

inline ChernoffResult eval_tuple(const Tuple& t, std::span<const double> p) {
  switch (t.variant) {
    case Variant::UnknownVariance:
      return chernoff_unknown_variance(t.theta, t.variance_estimates, p, t.pitfall);
    case Variant::Crn: {
      std::vector<double> sigma(t.family.variances.size());
      for (std::size_t i = 0; i < sigma.size(); ++i) sigma[i] = std::sqrt(t.family.variances[i]);
      return chernoff_crn(t.theta, sigma, t.rho, p, t.pitfall);
    }
    case Variant::Standard: {
      ChernoffContext ctx;
      ctx.family = &t.family;
      return chernoff(t.query, t.theta, p, t.pitfall, ctx);
    }
  }
  throw std::logic_error("unreachable");
}

inline double fd_gradient(const Tuple& t, std::span<const double> p, int i, double h = 1e-6) {
  std::vector<double> plus(p.begin(), p.end());
  std::vector<double> minus(p.begin(), p.end());
  plus[static_cast<std::size_t>(i)] += h;
  minus[static_cast<std::size_t>(i)] -= h;
  return (eval_tuple(t, plus).value - eval_tuple(t, minus).value) / (2.0 * h);
}

}  // namespace test_support
