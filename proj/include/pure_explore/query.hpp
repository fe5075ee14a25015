#pragma once
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pure_explore/divergences.hpp"

namespace pure_explore {

// An exploration query: the question asked about the unknown mean vector.
struct Query {
  enum class Kind {
    BestArm,
    BestK,
    Threshold,
    ClosestToThreshold,
    AllEpsilonGood,
    EpsilonBestArm,
    Signed,
    Murphy,
    Pairwise,
  };

  Kind kind = Kind::BestArm;
  int k = 1;               // BestK
  double threshold = 0.0;  // Threshold / ClosestToThreshold / Signed / Murphy
  double epsilon = 0.0;    // AllEpsilonGood / EpsilonBestArm
  // Pairwise: answer classes, each a set of ordered pairs (i, j) asserting
  // theta_i > theta_j. Classes must be mutually exclusive and exhaustive.
  std::vector<std::vector<std::pair<int, int>>> classes;

  static Query best_arm();
  static Query best_k(int k);
  static Query threshold_query(double t);
  static Query closest_to_threshold(double t);
  static Query all_epsilon_good(double eps);
  static Query epsilon_best_arm(double eps);
  static Query signed_query(double t);
  static Query murphy(double t);
  static Query pairwise(std::vector<std::vector<std::pair<int, int>>> classes);
};

// Discrete root cause by which an alternative instance would flip the answer.
struct Pitfall {
  enum class Tag { Arm, Pair, Whole };
  Tag tag = Tag::Whole;
  int i = -1;  // Arm index, or first member of a Pair
  int j = -1;  // second member of a Pair

  static Pitfall arm(int i) { return {Tag::Arm, i, -1}; }
  static Pitfall pair(int i, int j) { return {Tag::Pair, i, j}; }
  static Pitfall whole() { return {Tag::Whole, -1, -1}; }

  bool operator==(const Pitfall&) const = default;
  std::string to_string() const;  // 1-indexed, e.g. "arm(2)", "pair(4,1)", "whole"
};

struct Answer {
  enum class Kind { ArmSet, Sign, Feasibility, ClassIndex };
  Kind kind = Kind::ArmSet;
  std::vector<int> arms;  // sorted, ArmSet only
  int label = 0;          // Sign: +1/-1; Feasibility: 1 feasible / 0; ClassIndex: index

  bool operator==(const Answer&) const = default;
  std::string to_string() const;  // 1-indexed arms
};

// Strict rejects ties that make the answer ambiguous (instance validation);
// LowestIndex resolves them deterministically toward lower arm indices
// (the policy used on empirical means).
enum class TiePolicy { Strict, LowestIndex };

void validate_query(const Query& query, int num_arms, const RewardFamily& family);

Answer correct_answer(const Query& query, std::span<const double> theta,
                      TiePolicy policy = TiePolicy::Strict);

std::vector<Pitfall> pitfalls(const Query& query, std::span<const double> theta_hat,
                              TiePolicy policy = TiePolicy::Strict);

// Membership of theta_tilde in Alt_x(theta_hat), plus a violation margin used
// to break ties among pitfalls containing the same draw (larger = more
// violated; nonpositive = not in the alternative).
double violation_margin(const Query& query, const Pitfall& pitfall,
                        std::span<const double> theta_hat,
                        std::span<const double> theta_tilde);

// Same with the answer under theta_hat precomputed (hot loops).
double violation_margin(const Query& query, const Pitfall& pitfall, const Answer& answer,
                        std::span<const double> theta_tilde);

bool in_alternative(const Query& query, const Pitfall& pitfall,
                    std::span<const double> theta_hat, std::span<const double> theta_tilde);

// Whether a returned answer counts as correct under the true means. Equality
// with the unique answer everywhere except EpsilonBestArm, where any
// epsilon-good arm is acceptable.
bool is_correct(const Query& query, std::span<const double> theta_true, const Answer& answer);

}  // namespace pure_explore
