#include <cmath>
#include <map>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "pure_explore/rules.hpp"
#include "pure_explore/stopping.hpp"

using namespace pure_explore;

namespace {

SufficientStats stats_with(const std::vector<double>& means, const std::vector<long long>& n) {
  SufficientStats stats(static_cast<int>(means.size()));
  for (std::size_t i = 0; i < means.size(); ++i)
    for (long long r = 0; r < n[i]; ++r) stats.update(static_cast<int>(i), means[i]);
  return stats;
}

ChernoffContext ctx_of(const RewardFamily& f) {
  ChernoffContext ctx;
  ctx.family = &f;
  return ctx;
}

}  // namespace

TEST_CASE("eb estimation is the empirical mean") {
  RuleConfig cfg;
  cfg.estimation = EstimationRule::EB;
  const auto f = RewardFamily::gaussian({1.0, 1.0});
  auto stats = stats_with({1.0, 1.5}, {2, 2});
  Rng rng(1);
  const auto est = estimate(cfg, stats, Posterior::from(stats, f), rng);
  CHECK(est[0] == doctest::Approx(1.0));
  CHECK(est[1] == doctest::Approx(1.5));
}

TEST_CASE("ts estimation draws at the posterior scale") {
  RuleConfig cfg;
  cfg.estimation = EstimationRule::TS;
  const auto f = RewardFamily::gaussian({1.0, 1.0});
  const auto stats = stats_with({0.3, 0.7}, {4, 4});
  const auto post = Posterior::from(stats, f);
  Rng rng(77);
  double sum = 0.0, sumsq = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const auto est = estimate(cfg, stats, post, rng);
    sum += est[0];
    sumsq += est[0] * est[0];
  }
  const double mean = sum / n;
  const double var = sumsq / n - mean * mean;
  CHECK(mean == doctest::Approx(0.3).epsilon(0.02));
  CHECK(var >= 0.24);  // sigma^2 / N = 0.25
  CHECK(var <= 0.26);
}

TEST_CASE("ts estimation concentrates at large counts") {
  RuleConfig cfg;
  cfg.estimation = EstimationRule::TS;
  const auto f = RewardFamily::gaussian({1.0, 1.0});
  const auto stats = stats_with({0.3, 0.7}, {1000000, 1000000});
  const auto post = Posterior::from(stats, f);
  Rng rng(78);
  int inside = 0;
  const int n = 2000;
  for (int i = 0; i < n; ++i) {
    const auto est = estimate(cfg, stats, post, rng);
    if (std::abs(est[0] - 0.3) <= 0.01) ++inside;
  }
  CHECK(static_cast<double>(inside) / n >= 0.99);
}

TEST_CASE("kkt detection is the glrt argmin") {
  const auto f = RewardFamily::gaussian({1.0, 1.0, 1.0});
  const std::vector<double> p{1.0 / 3, 1.0 / 3, 1.0 / 3};

  // threshold distances (1, 2) pick the closer arm
  const std::vector<double> hat{1.0, 2.0, -5.0};
  const auto pf = detect_kkt(Query::threshold_query(0.0), hat, p, ctx_of(f));
  CHECK(pf == Pitfall::arm(0));

  const std::vector<double> hat2{1.0, 0.9, 0.0};
  CHECK(detect_kkt(Query::best_arm(), hat2, p, ctx_of(f)) == Pitfall::arm(1));

  // single pitfall
  const auto f2 = RewardFamily::gaussian({1.0, 1.0});
  CHECK(detect_kkt(Query::signed_query(0.0), std::vector<double>{0.5, 1.0},
                   std::vector<double>{0.5, 0.5}, ctx_of(f2)) == Pitfall::whole());
}

TEST_CASE("ts detection accepts only alternative draws") {
  const auto f = RewardFamily::gaussian({1.0, 1.0});
  const auto stats = stats_with({1.0, 0.0}, {1, 1});
  const auto post = Posterior::from(stats, f);
  const std::vector<double> hat{1.0, 0.0};
  const std::vector<double> p{0.5, 0.5};
  Rng rng(9);
  bool fallback = false;
  for (int i = 0; i < 50; ++i) {
    const auto pf =
        detect_ts(Query::best_arm(), hat, post, rng, 10000, p, ctx_of(f), &fallback);
    CHECK(pf == Pitfall::arm(1));  // two-arm best-arm: only the non-leader
    CHECK_FALSE(fallback);
  }
}

TEST_CASE("ts detection per-draw acceptance rate") {
  // posterior means (1, 0), both variances 1: P(draw in Alt) = 1 - Phi(1/sqrt 2)
  const auto f = RewardFamily::gaussian({1.0, 1.0});
  const auto stats = stats_with({1.0, 0.0}, {1, 1});
  const auto post = Posterior::from(stats, f);
  const std::vector<double> hat{1.0, 0.0};
  Rng rng(123);
  std::vector<double> draw;
  const int n = 100000;
  int accepted = 0;
  for (int i = 0; i < n; ++i) {
    post.sample(rng, draw);
    if (draw[1] > draw[0]) ++accepted;
  }
  const double expect = 1.0 - normal_cdf(1.0 / std::sqrt(2.0));
  CHECK(expect == doctest::Approx(0.2398).epsilon(1e-3));
  CHECK(static_cast<double>(accepted) / n == doctest::Approx(expect).epsilon(0.05));
}

TEST_CASE("ts detection falls back after the cap") {
  // huge gaps, tiny posterior variance: no draw lands in the alternative
  const auto f = RewardFamily::gaussian({1.0, 1.0, 1.0});
  const auto stats = stats_with({20.0, 10.0, 0.0}, {400, 400, 400});
  const auto post = Posterior::from(stats, f);
  const std::vector<double> hat{20.0, 10.0, 0.0};
  const std::vector<double> p{0.4, 0.3, 0.3};
  Rng rng(5);
  bool fallback = false;
  const auto pf = detect_ts(Query::best_arm(), hat, post, rng, 50, p, ctx_of(f), &fallback);
  CHECK(fallback);
  CHECK(pf == Pitfall::arm(1));  // the kkt argmin (smaller gap)
}

TEST_CASE("pps weights match the posterior tail masses") {
  const auto f = RewardFamily::gaussian({1.0, 1.0, 1.0});

  SUBCASE("dominant pitfall wins") {
    // posterior means (1, 0.9, 0), variances 0.01
    const auto stats = stats_with({1.0, 0.9, 0.0}, {100, 100, 100});
    const auto post = Posterior::from(stats, f);
    const std::vector<double> hat{1.0, 0.9, 0.0};
    const auto w = pps_weights(Query::best_arm(), hat, post);
    REQUIRE(w.size() == 2);
    CHECK(w[0] / (w[0] + w[1]) >= 0.99);
    Rng rng(3);
    int first = 0;
    const int n = 2000;
    for (int i = 0; i < n; ++i)
      if (detect_pps(Query::best_arm(), hat, post, rng, std::vector<double>{0.4, 0.3, 0.3},
                     ctx_of(f)) == Pitfall::arm(1))
        ++first;
    CHECK(static_cast<double>(first) / n >= 0.99);
  }

  SUBCASE("symmetric posterior splits evenly") {
    const auto stats = stats_with({1.0, 0.5, 0.5}, {100, 100, 100});
    const auto post = Posterior::from(stats, f);
    const std::vector<double> hat{1.0, 0.5, 0.5};
    Rng rng(31);
    int first = 0;
    const int n = 100000;
    for (int i = 0; i < n; ++i)
      if (detect_pps(Query::best_arm(), hat, post, rng,
                     std::vector<double>{1.0 / 3, 1.0 / 3, 1.0 / 3},
                     ctx_of(f)) == Pitfall::arm(1))
        ++first;
    CHECK(static_cast<double>(first) / n == doctest::Approx(0.5).epsilon(0.02));
  }

  SUBCASE("weights match a monte-carlo estimate of the alternative mass") {
    const auto stats = stats_with({0.8, 0.5, 0.2}, {9, 16, 25});
    const auto post = Posterior::from(stats, f);
    const std::vector<double> hat{0.8, 0.5, 0.2};
    const auto w = pps_weights(Query::best_arm(), hat, post);
    Rng rng(41);
    std::vector<double> draw;
    const int n = 1000000;
    std::vector<int> hits(2, 0);
    for (int i = 0; i < n; ++i) {
      post.sample(rng, draw);
      if (draw[1] > draw[0]) ++hits[0];
      if (draw[2] > draw[0]) ++hits[1];
    }
    CHECK(static_cast<double>(hits[0]) / n == doctest::Approx(w[0]).epsilon(0.02));
    CHECK(std::abs(static_cast<double>(hits[1]) / n - w[1]) <= 0.005);
  }
}

TEST_CASE("ids selection samples the weight vector") {
  Rng rng(17);

  SUBCASE("point mass is deterministic") {
    ChernoffResult r;
    r.value = 1.0;
    r.weights = {0.0, 1.0, 0.0};
    for (int i = 0; i < 20; ++i) CHECK(select_ids(r, rng) == 1);
  }
  SUBCASE("even weights split evenly") {
    ChernoffResult r;
    r.value = 1.0;
    r.weights = {0.5, 0.5, 0.0};
    int first = 0;
    const int n = 100000;
    for (int i = 0; i < n; ++i)
      if (select_ids(r, rng) == 0) ++first;
    CHECK(static_cast<double>(first) / n == doctest::Approx(0.5).epsilon(0.02));
  }
  SUBCASE("best-arm leader weight follows the inverse-allocation formula") {
    const auto f = RewardFamily::gaussian({1.0, 1.0});
    const std::vector<double> hat{1.0, 0.0};
    // h_leader = (s^2/p_i) / (s^2/p_i + s^2/p_j)
    for (auto [pi, pj, expect] : {std::tuple{0.2, 0.8, 0.8}, std::tuple{0.25, 0.75, 0.75}}) {
      const auto r = chernoff(Query::best_arm(), hat, std::vector<double>{pi, pj},
                              Pitfall::arm(1), ctx_of(f));
      CHECK(r.weights[0] == doctest::Approx(expect).epsilon(1e-12));
      int leader = 0;
      const int n = 100000;
      for (int i = 0; i < n; ++i)
        if (select_ids(r, rng) == 0) ++leader;
      CHECK(static_cast<double>(leader) / n == doctest::Approx(expect).epsilon(0.02));
    }
  }
}

TEST_CASE("beta selection") {
  Rng rng(23);
  SUBCASE("frequency matches beta") {
    for (double beta : {0.5, 0.8}) {
      int leader = 0;
      const int n = 100000;
      for (int i = 0; i < n; ++i)
        if (select_beta(0, 1, beta, rng) == 0) ++leader;
      CHECK(static_cast<double>(leader) / n == doctest::Approx(beta).epsilon(0.02));
    }
  }
  SUBCASE("domain") {
    CHECK_THROWS_AS(select_beta(0, 1, 0.0, rng), std::domain_error);
    CHECK_THROWS_AS(select_beta(0, 1, 1.0, rng), std::domain_error);
  }
  SUBCASE("non-pair pitfalls have no top-two structure") {
    CHECK_FALSE(top_two_of(Query::signed_query(0.0), std::vector<double>{1.0, 2.0},
                           Pitfall::whole())
                    .has_value());
    CHECK_FALSE(top_two_of(Query::threshold_query(0.0), std::vector<double>{1.0, 2.0},
                           Pitfall::arm(0))
                    .has_value());
  }
}

TEST_CASE("pan steps") {
  SUBCASE("eb-kkt-ids on a threshold query samples the detected arm") {
    RuleConfig cfg;
    cfg.estimation = EstimationRule::EB;
    cfg.detection = DetectionRule::KKT;
    cfg.selection = SelectionRule::IDS;
    const auto f = RewardFamily::gaussian({1.0, 1.0, 1.0});
    auto stats = stats_with({1.0, 2.0, -3.0}, {2, 2, 2});
    Rng rng(3);
    StepRecord rec;
    const int arm = pan_step(cfg, Query::threshold_query(0.0), f, 0.0, stats, rng, &rec);
    CHECK(arm == rec.pitfall.i);
    CHECK(arm == 0);  // smallest p d
  }
  SUBCASE("ts detection + ids selection stay on the leader-challenger pair") {
    const auto f = RewardFamily::gaussian({1.0, 1.0, 1.0});
    const auto stats = stats_with({1.0, 0.5, 0.0}, {5, 5, 5});
    const auto post = Posterior::from(stats, f);
    const auto p = stats.empirical_allocation();
    Rng rng(4);
    std::vector<double> draw;
    const Query q = Query::best_arm();
    for (int i = 0; i < 60; ++i) {
      post.sample(rng, draw);
      const int leader = correct_answer(q, draw, TiePolicy::LowestIndex).arms[0];
      bool fallback = false;
      const auto pf = detect_ts(q, draw, post, rng, 10000, p, ctx_of(f), &fallback);
      CHECK(pf.i != leader);
      const auto r = detail::eval_pitfall(q, draw, p, pf, ctx_of(f));
      const int arm = select_ids(r, rng);
      CHECK((arm == leader || arm == pf.i));
    }
  }
  SUBCASE("seeded steps reproduce the identical arm sequence") {
    RuleConfig cfg;
    cfg.estimation = EstimationRule::TS;
    cfg.detection = DetectionRule::PPS;
    cfg.selection = SelectionRule::IDS;
    const auto f = RewardFamily::bernoulli();
    auto run = [&](std::uint64_t seed) {
      auto stats = stats_with({0.3, 0.5, 0.7}, {3, 3, 3});
      Rng rng(seed);
      std::vector<int> arms;
      for (int i = 0; i < 50; ++i)
        arms.push_back(pan_step(cfg, Query::best_arm(), f, 0.0, stats, rng));
      return arms;
    };
    CHECK(run(99) == run(99));
    CHECK(run(99) != run(100));
  }
  SUBCASE("uninitialized arms are rejected") {
    RuleConfig cfg;
    const auto f = RewardFamily::gaussian({1.0, 1.0});
    SufficientStats stats(2);
    stats.update(0, 1.0);
    Rng rng(1);
    CHECK_THROWS_AS(pan_step(cfg, Query::best_arm(), f, 0.0, stats, rng), std::logic_error);
  }
}

TEST_CASE("uniform step is a seed-independent round robin") {
  SufficientStats stats(3);
  std::vector<int> arms;
  for (int t = 0; t < 6; ++t) {
    const int arm = uniform_step(stats);
    arms.push_back(arm);
    stats.update(arm, 0.0);
  }
  CHECK(arms == std::vector<int>{0, 1, 2, 0, 1, 2});
  for (long long n : stats.counts) CHECK(n == 2);
}

TEST_CASE("ids stationarity trace with the truth frozen") {
  // Oracle mode: estimation replaced by the true means; kkt detection + ids
  // selection. Conditional arm frequencies within each pitfall must track the
  // running selection weights.
  const std::vector<double> theta{0.1, 0.2, 0.3, 0.4, 0.5};
  const auto f = RewardFamily::gaussian({1.0, 1.0, 1.0, 1.0, 1.0});
  const Query q = Query::best_arm();
  const auto ctx = ctx_of(f);

  SufficientStats stats(5);
  for (int i = 0; i < 5; ++i) stats.update(i, theta[static_cast<std::size_t>(i)]);
  Rng rng(2718);

  std::map<std::string, std::vector<double>> joint;     // pitfall -> arm counts
  std::map<std::string, std::vector<double>> h_totals;  // pitfall -> summed h
  std::map<std::string, long long> marginal;

  for (long long t = stats.t; t < 100000; ++t) {
    const auto p = stats.empirical_allocation();
    const auto pf = detect_kkt(q, theta, p, ctx);
    const auto r = detail::eval_pitfall(q, theta, p, pf, ctx);
    const int arm = select_ids(r, rng);
    const auto key = pf.to_string();
    auto& jc = joint[key];
    auto& ht = h_totals[key];
    if (jc.empty()) {
      jc.assign(5, 0.0);
      ht.assign(5, 0.0);
    }
    jc[static_cast<std::size_t>(arm)] += 1.0;
    for (int i = 0; i < 5; ++i) ht[static_cast<std::size_t>(i)] += r.weights[static_cast<std::size_t>(i)];
    ++marginal[key];
    stats.update(arm, theta[static_cast<std::size_t>(arm)]);
  }

  int compared = 0;
  for (const auto& [key, count] : marginal) {
    if (count < 1000) continue;
    for (int i = 0; i < 5; ++i) {
      const double freq = joint[key][static_cast<std::size_t>(i)] / static_cast<double>(count);
      const double mean_h = h_totals[key][static_cast<std::size_t>(i)] / static_cast<double>(count);
      CHECK(std::abs(freq - mean_h) <= 0.02);
      ++compared;
    }
  }
  CHECK(compared > 0);
}
