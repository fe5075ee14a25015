#include "doctest.h"
#include "pure_explore/query.hpp"

#include <stdexcept>
#include <vector>

using namespace pure_explore;

namespace {
const std::vector<double> kCase1{0.1, 0.2, 0.3, 0.4, 0.5};
}

TEST_CASE("correct answers per query kind") {
  // 1-indexed {4,5} = 0-indexed {3,4}
  auto a = correct_answer(Query::best_k(2), kCase1);
  CHECK(a.arms == std::vector<int>{3, 4});
  CHECK(a.to_string() == "{4,5}");

  a = correct_answer(Query::threshold_query(0.35), kCase1);
  CHECK(a.arms == std::vector<int>{3, 4});

  a = correct_answer(Query::signed_query(0.0), std::vector<double>{0.2, 0.5});
  CHECK(a.label == +1);
  CHECK(a.to_string() == "+");

  a = correct_answer(Query::murphy(0.0), std::vector<double>{-0.5, 1.0});
  CHECK(a.label == 1);
  CHECK(a.to_string() == "feasible");

  a = correct_answer(Query::best_arm(), std::vector<double>{0.5, 0.4, 0.3});
  CHECK(a.arms == std::vector<int>{0});

  a = correct_answer(Query::closest_to_threshold(0.35), kCase1);
  CHECK(a.arms == std::vector<int>{2});  // 0.3 is 0.05 away

  a = correct_answer(Query::all_epsilon_good(0.15), kCase1);
  CHECK(a.arms == std::vector<int>{3, 4});
}

TEST_CASE("tied answers are rejected under strict policy") {
  const std::vector<double> tied{0.5, 0.5};
  CHECK_THROWS_AS(correct_answer(Query::best_arm(), tied), std::invalid_argument);
  CHECK_NOTHROW(correct_answer(Query::best_arm(), tied, TiePolicy::LowestIndex));
  CHECK(correct_answer(Query::best_arm(), tied, TiePolicy::LowestIndex).arms ==
        std::vector<int>{0});
  CHECK_THROWS_AS(correct_answer(Query::threshold_query(0.5), tied), std::invalid_argument);
  CHECK_THROWS_AS(
      correct_answer(Query::signed_query(0.0), std::vector<double>{-0.5, 1.0}),
      std::invalid_argument);
}

TEST_CASE("pitfall sets") {
  auto set = pitfalls(Query::best_arm(), std::vector<double>{0.5, 0.4, 0.3});
  CHECK(set == std::vector<Pitfall>{Pitfall::arm(1), Pitfall::arm(2)});

  set = pitfalls(Query::best_k(2), kCase1);
  CHECK(set.size() == 6);  // {4,5} x {1,2,3}
  for (const auto& pf : set) {
    CHECK(pf.tag == Pitfall::Tag::Pair);
    CHECK((pf.i == 3 || pf.i == 4));
    CHECK(pf.j <= 2);
  }

  set = pitfalls(Query::murphy(0.0), std::vector<double>{-0.5, 1.0});
  CHECK(set == std::vector<Pitfall>{Pitfall::whole()});

  set = pitfalls(Query::murphy(0.0), std::vector<double>{0.5, 1.0});
  CHECK(set.size() == 2);  // infeasible: every arm is a pitfall

  set = pitfalls(Query::threshold_query(0.35), kCase1);
  CHECK(set.size() == 5);

  // all-eps-good j ranges over every other arm, including other good arms
  set = pitfalls(Query::all_epsilon_good(0.15), kCase1);
  CHECK(set.size() == 2 * 4);
}

TEST_CASE("pairwise classes validate and answer") {
  // class m: arm m is the largest among the first three
  std::vector<std::vector<std::pair<int, int>>> classes;
  for (int m = 0; m < 3; ++m) {
    std::vector<std::pair<int, int>> cls;
    for (int j = 0; j < 3; ++j)
      if (j != m) cls.emplace_back(m, j);
    classes.push_back(cls);
  }
  const auto q = Query::pairwise(classes);
  CHECK_NOTHROW(validate_query(q, 3, RewardFamily::bernoulli()));
  const auto a = correct_answer(q, std::vector<double>{0.2, 0.6, 0.4});
  CHECK(a.label == 1);
  const auto set = pitfalls(q, std::vector<double>{0.2, 0.6, 0.4});
  CHECK(set.size() == 2);

  // (i,j) and (j,i) in one class is inadmissible
  auto bad = classes;
  bad[0].emplace_back(1, 0);
  CHECK_THROWS_AS(validate_query(Query::pairwise(bad), 3, RewardFamily::bernoulli()),
                  std::invalid_argument);

  // non-exhaustive partition
  auto partial = classes;
  partial.pop_back();
  CHECK_THROWS_AS(validate_query(Query::pairwise(partial), 3, RewardFamily::bernoulli()),
                  std::invalid_argument);
}

TEST_CASE("query invariants") {
  const auto g = RewardFamily::gaussian({1.0, 1.0, 1.0});
  CHECK_THROWS_AS(validate_query(Query::best_k(0), 3, g), std::invalid_argument);
  CHECK_THROWS_AS(validate_query(Query::best_k(3), 3, g), std::invalid_argument);
  CHECK_THROWS_AS(validate_query(Query::all_epsilon_good(-0.1), 3, g), std::invalid_argument);
  CHECK_THROWS_AS(validate_query(Query::epsilon_best_arm(0.1), 3, RewardFamily::bernoulli()),
                  std::invalid_argument);
  const auto g2 = RewardFamily::gaussian({1.0, 2.0, 1.0});
  CHECK_THROWS_AS(validate_query(Query::epsilon_best_arm(0.1), 3, g2), std::invalid_argument);
  CHECK_NOTHROW(validate_query(Query::epsilon_best_arm(0.1), 3, g));
}

TEST_CASE("alternative membership drives detection") {
  const std::vector<double> hat{0.5, 0.4};
  const Query q = Query::best_arm();
  CHECK(in_alternative(q, Pitfall::arm(1), hat, std::vector<double>{0.3, 0.45}));
  CHECK_FALSE(in_alternative(q, Pitfall::arm(1), hat, std::vector<double>{0.5, 0.45}));

  const Query t = Query::threshold_query(0.0);
  const std::vector<double> hat_t{0.5, -0.5};
  CHECK(in_alternative(t, Pitfall::arm(0), hat_t, std::vector<double>{-0.1, -0.5}));
  CHECK_FALSE(in_alternative(t, Pitfall::arm(0), hat_t, std::vector<double>{0.1, -0.5}));
}

TEST_CASE("epsilon-best-arm correctness is any good arm") {
  const Query q = Query::epsilon_best_arm(0.15);
  Answer a;
  a.arms = {3};
  CHECK(is_correct(q, kCase1, a));  // 0.4 >= 0.5 - 0.15
  a.arms = {2};
  CHECK_FALSE(is_correct(q, kCase1, a));
  a.arms = {4};
  CHECK(is_correct(q, kCase1, a));
}
