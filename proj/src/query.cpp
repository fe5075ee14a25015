#include "pure_explore/query.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace pure_explore {

Query Query::best_arm() { return Query{}; }
Query Query::best_k(int k) {
  Query q;
  q.kind = Kind::BestK;
  q.k = k;
  return q;
}
Query Query::threshold_query(double t) {
  Query q;
  q.kind = Kind::Threshold;
  q.threshold = t;
  return q;
}
Query Query::closest_to_threshold(double t) {
  Query q;
  q.kind = Kind::ClosestToThreshold;
  q.threshold = t;
  return q;
}
Query Query::all_epsilon_good(double eps) {
  Query q;
  q.kind = Kind::AllEpsilonGood;
  q.epsilon = eps;
  return q;
}
Query Query::epsilon_best_arm(double eps) {
  Query q;
  q.kind = Kind::EpsilonBestArm;
  q.epsilon = eps;
  return q;
}
Query Query::signed_query(double t) {
  Query q;
  q.kind = Kind::Signed;
  q.threshold = t;
  return q;
}
Query Query::murphy(double t) {
  Query q;
  q.kind = Kind::Murphy;
  q.threshold = t;
  return q;
}
Query Query::pairwise(std::vector<std::vector<std::pair<int, int>>> classes) {
  Query q;
  q.kind = Kind::Pairwise;
  q.classes = std::move(classes);
  return q;
}

std::string Pitfall::to_string() const {
  switch (tag) {
    case Tag::Arm:
      return "arm(" + std::to_string(i + 1) + ")";
    case Tag::Pair:
      return "pair(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")";
    case Tag::Whole:
      return "whole";
  }
  return "?";
}

std::string Answer::to_string() const {
  switch (kind) {
    case Kind::ArmSet: {
      std::string s = "{";
      for (std::size_t idx = 0; idx < arms.size(); ++idx) {
        if (idx) s += ",";
        s += std::to_string(arms[idx] + 1);
      }
      return s + "}";
    }
    case Kind::Sign:
      return label > 0 ? "+" : "-";
    case Kind::Feasibility:
      return label ? "feasible" : "infeasible";
    case Kind::ClassIndex:
      return "class:" + std::to_string(label + 1);
  }
  return "?";
}

namespace {

int arg_best(std::span<const double> theta) {
  int best = 0;
  for (int i = 1; i < static_cast<int>(theta.size()); ++i)
    if (theta[i] > theta[best]) best = i;
  return best;
}

// Indices sorted by descending mean; equal means keep the lower index first.
std::vector<int> order_desc(std::span<const double> theta) {
  std::vector<int> idx(theta.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(),
                   [&](int a, int b) { return theta[a] > theta[b]; });
  return idx;
}

// Does theta satisfy every ordering constraint of a pairwise class?
bool class_matches(const std::vector<std::pair<int, int>>& cls, std::span<const double> theta) {
  for (const auto& [i, j] : cls)
    if (!(theta[i] > theta[j])) return false;
  return true;
}

int count_class_violations(const std::vector<std::pair<int, int>>& cls,
                           std::span<const double> theta) {
  int v = 0;
  for (const auto& [i, j] : cls)
    if (!(theta[i] > theta[j])) ++v;
  return v;
}

[[noreturn]] void tie_error(const char* what) {
  throw std::invalid_argument(std::string("instance invalid: ") + what);
}

void check_perm_coverage(const Query& query, int num_arms) {
  // Exhaustive check over orderings is feasible only for small K.
  if (num_arms > 7) return;
  std::vector<int> perm(static_cast<std::size_t>(num_arms));
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<double> theta(static_cast<std::size_t>(num_arms));
  do {
    for (int r = 0; r < num_arms; ++r) theta[static_cast<std::size_t>(perm[r])] = -r;
    int matches = 0;
    for (const auto& cls : query.classes)
      if (class_matches(cls, theta)) ++matches;
    if (matches != 1)
      throw std::invalid_argument(
          "pairwise classes must be mutually exclusive and exhaustive over orderings");
  } while (std::next_permutation(perm.begin(), perm.end()));
}

}  // namespace

void validate_query(const Query& query, int num_arms, const RewardFamily& family) {
  if (num_arms < 2) throw std::invalid_argument("need at least two arms");
  switch (query.kind) {
    case Query::Kind::BestK:
      if (query.k < 1 || query.k >= num_arms)
        throw std::invalid_argument("best-k requires 1 <= k < K");
      break;
    case Query::Kind::AllEpsilonGood:
      if (!(query.epsilon >= 0.0)) throw std::invalid_argument("epsilon must be >= 0");
      if (family.kind == FamilyKind::Bernoulli && !(query.epsilon < 1.0))
        throw std::invalid_argument("bernoulli epsilon must be < 1");
      break;
    case Query::Kind::EpsilonBestArm: {
      if (!(query.epsilon >= 0.0)) throw std::invalid_argument("epsilon must be >= 0");
      if (family.kind != FamilyKind::GaussianKnownVariance)
        throw std::invalid_argument("epsilon-best-arm requires gaussian rewards");
      for (double v : family.variances)
        if (v != 1.0)
          throw std::invalid_argument("epsilon-best-arm requires unit common variance");
      break;
    }
    case Query::Kind::Pairwise: {
      if (query.classes.empty()) throw std::invalid_argument("pairwise needs answer classes");
      for (const auto& cls : query.classes) {
        for (const auto& [i, j] : cls) {
          if (i < 0 || j < 0 || i >= num_arms || j >= num_arms || i == j)
            throw std::invalid_argument("pairwise pair indices out of range");
          for (const auto& [a, b] : cls)
            if (a == j && b == i)
              throw std::invalid_argument("pairwise class contains both (i,j) and (j,i)");
        }
      }
      check_perm_coverage(query, num_arms);
      break;
    }
    case Query::Kind::Threshold:
    case Query::Kind::ClosestToThreshold:
    case Query::Kind::Signed:
    case Query::Kind::Murphy:
      if (family.kind == FamilyKind::Bernoulli &&
          !(query.threshold > 0.0 && query.threshold < 1.0))
        throw std::invalid_argument("bernoulli threshold must lie in (0, 1)");
      break;
    case Query::Kind::BestArm:
      break;
  }
}

Answer correct_answer(const Query& query, std::span<const double> theta, TiePolicy policy) {
  const int K = static_cast<int>(theta.size());
  const bool strict = policy == TiePolicy::Strict;
  Answer ans;
  switch (query.kind) {
    case Query::Kind::BestArm: {
      const auto idx = order_desc(theta);
      if (strict && theta[idx[0]] == theta[idx[1]]) tie_error("tied best arms");
      ans.arms = {idx[0]};
      return ans;
    }
    case Query::Kind::BestK: {
      const auto idx = order_desc(theta);
      if (strict && theta[idx[query.k - 1]] == theta[idx[query.k]])
        tie_error("tie at the best-k boundary");
      ans.arms.assign(idx.begin(), idx.begin() + query.k);
      std::sort(ans.arms.begin(), ans.arms.end());
      return ans;
    }
    case Query::Kind::Threshold: {
      for (int i = 0; i < K; ++i) {
        if (strict && theta[i] == query.threshold) tie_error("mean exactly at threshold");
        if (theta[i] > query.threshold) ans.arms.push_back(i);
      }
      return ans;
    }
    case Query::Kind::ClosestToThreshold: {
      int best = 0;
      for (int i = 1; i < K; ++i)
        if (std::abs(theta[i] - query.threshold) < std::abs(theta[best] - query.threshold))
          best = i;
      if (strict) {
        for (int i = 0; i < K; ++i)
          if (i != best &&
              std::abs(theta[i] - query.threshold) == std::abs(theta[best] - query.threshold))
            tie_error("tied distance to threshold");
      }
      ans.arms = {best};
      return ans;
    }
    case Query::Kind::AllEpsilonGood: {
      const double top = theta[static_cast<std::size_t>(arg_best(theta))];
      for (int i = 0; i < K; ++i) {
        if (strict && theta[i] == top - query.epsilon) tie_error("mean exactly epsilon-good");
        if (theta[i] >= top - query.epsilon) ans.arms.push_back(i);
      }
      return ans;
    }
    case Query::Kind::EpsilonBestArm: {
      const auto idx = order_desc(theta);
      if (strict && theta[idx[0]] == theta[idx[1]]) tie_error("tied best arms");
      ans.arms = {idx[0]};
      return ans;
    }
    case Query::Kind::Signed: {
      double lo = theta[0], hi = theta[0];
      for (double v : theta) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
      if (strict) {
        if (lo == query.threshold || hi == query.threshold) tie_error("mean exactly at threshold");
        if (lo < query.threshold && hi > query.threshold)
          tie_error("signed bandit means must lie on one side of the threshold");
      }
      ans.kind = Answer::Kind::Sign;
      ans.label = lo > query.threshold ? +1 : -1;
      return ans;
    }
    case Query::Kind::Murphy: {
      double lo = theta[0];
      for (double v : theta) lo = std::min(lo, v);
      if (strict && lo == query.threshold) tie_error("mean exactly at threshold");
      ans.kind = Answer::Kind::Feasibility;
      ans.label = lo < query.threshold ? 1 : 0;
      return ans;
    }
    case Query::Kind::Pairwise: {
      ans.kind = Answer::Kind::ClassIndex;
      int match = -1;
      for (int m = 0; m < static_cast<int>(query.classes.size()); ++m) {
        if (class_matches(query.classes[static_cast<std::size_t>(m)], theta)) {
          match = m;
          break;
        }
      }
      if (match < 0) {
        if (strict) tie_error("no pairwise class matches (tied means)");
        // Lenient fallback: fewest violated constraints, lowest class index.
        int best_m = 0, best_v = count_class_violations(query.classes[0], theta);
        for (int m = 1; m < static_cast<int>(query.classes.size()); ++m) {
          const int v = count_class_violations(query.classes[static_cast<std::size_t>(m)], theta);
          if (v < best_v) {
            best_v = v;
            best_m = m;
          }
        }
        match = best_m;
      }
      ans.label = match;
      return ans;
    }
  }
  throw std::logic_error("unreachable");
}

std::vector<Pitfall> pitfalls(const Query& query, std::span<const double> theta_hat,
                              TiePolicy policy) {
  const int K = static_cast<int>(theta_hat.size());
  const Answer ans = correct_answer(query, theta_hat, policy);
  std::vector<Pitfall> out;
  switch (query.kind) {
    case Query::Kind::BestArm:
    case Query::Kind::EpsilonBestArm:
    case Query::Kind::ClosestToThreshold: {
      const int star = ans.arms[0];
      for (int j = 0; j < K; ++j)
        if (j != star) out.push_back(Pitfall::arm(j));
      return out;
    }
    case Query::Kind::BestK: {
      std::vector<char> in_top(static_cast<std::size_t>(K), 0);
      for (int i : ans.arms) in_top[static_cast<std::size_t>(i)] = 1;
      for (int i : ans.arms)
        for (int j = 0; j < K; ++j)
          if (!in_top[static_cast<std::size_t>(j)]) out.push_back(Pitfall::pair(i, j));
      return out;
    }
    case Query::Kind::Threshold: {
      for (int i = 0; i < K; ++i) out.push_back(Pitfall::arm(i));
      return out;
    }
    case Query::Kind::AllEpsilonGood: {
      for (int i : ans.arms)
        for (int j = 0; j < K; ++j)
          if (j != i) out.push_back(Pitfall::pair(i, j));
      return out;
    }
    case Query::Kind::Signed:
      return {Pitfall::whole()};
    case Query::Kind::Murphy: {
      if (ans.label) return {Pitfall::whole()};
      for (int i = 0; i < K; ++i) out.push_back(Pitfall::arm(i));
      return out;
    }
    case Query::Kind::Pairwise: {
      for (const auto& [i, j] : query.classes[static_cast<std::size_t>(ans.label)])
        out.push_back(Pitfall::pair(i, j));
      return out;
    }
  }
  throw std::logic_error("unreachable");
}

double violation_margin(const Query& query, const Pitfall& pitfall, const Answer& answer,
                        std::span<const double> theta_tilde) {
  switch (query.kind) {
    case Query::Kind::BestArm:
      return theta_tilde[pitfall.i] - theta_tilde[answer.arms[0]];
    case Query::Kind::EpsilonBestArm:
      return theta_tilde[pitfall.i] - query.epsilon - theta_tilde[answer.arms[0]];
    case Query::Kind::ClosestToThreshold:
      return std::abs(theta_tilde[answer.arms[0]] - query.threshold) -
             std::abs(theta_tilde[pitfall.i] - query.threshold);
    case Query::Kind::BestK:
    case Query::Kind::Pairwise:
      return theta_tilde[pitfall.j] - theta_tilde[pitfall.i];
    case Query::Kind::AllEpsilonGood:
      return theta_tilde[pitfall.j] - query.epsilon - theta_tilde[pitfall.i];
    case Query::Kind::Threshold: {
      // Opposite side of the threshold from the estimate's side, recovered
      // from the answer set.
      const bool above =
          std::find(answer.arms.begin(), answer.arms.end(), pitfall.i) != answer.arms.end();
      const double s = above ? 1.0 : -1.0;
      return s * (query.threshold - theta_tilde[pitfall.i]);
    }
    case Query::Kind::Signed: {
      double lo = theta_tilde[0], hi = theta_tilde[0];
      for (double v : theta_tilde) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
      return answer.label > 0 ? query.threshold - hi : lo - query.threshold;
    }
    case Query::Kind::Murphy: {
      if (answer.label) {  // feasible; alternative = every mean above threshold
        double lo = theta_tilde[0];
        for (double v : theta_tilde) lo = std::min(lo, v);
        return lo - query.threshold;
      }
      return query.threshold - theta_tilde[pitfall.i];
    }
  }
  throw std::logic_error("unreachable");
}

double violation_margin(const Query& query, const Pitfall& pitfall,
                        std::span<const double> theta_hat,
                        std::span<const double> theta_tilde) {
  return violation_margin(query, pitfall,
                          correct_answer(query, theta_hat, TiePolicy::LowestIndex),
                          theta_tilde);
}

bool in_alternative(const Query& query, const Pitfall& pitfall,
                    std::span<const double> theta_hat, std::span<const double> theta_tilde) {
  return violation_margin(query, pitfall, theta_hat, theta_tilde) > 0.0;
}

bool is_correct(const Query& query, std::span<const double> theta_true, const Answer& answer) {
  if (query.kind == Query::Kind::EpsilonBestArm) {
    if (answer.kind != Answer::Kind::ArmSet || answer.arms.size() != 1) return false;
    const double top = theta_true[static_cast<std::size_t>(arg_best(theta_true))];
    return theta_true[static_cast<std::size_t>(answer.arms[0])] >= top - query.epsilon;
  }
  return answer == correct_answer(query, theta_true, TiePolicy::Strict);
}

}  // namespace pure_explore
