#include "pure_explore/config.hpp"

#include <cmath>
#include <set>

#include "json.hpp"

namespace pure_explore {

namespace {

using nlohmann::ordered_json;

struct Parser {
  std::vector<std::string> errors;

  void fail(const std::string& msg) { errors.push_back(msg); }

  void check_fields(const ordered_json& obj, const std::string& where,
                    const std::set<std::string>& allowed) {
    for (const auto& [key, value] : obj.items()) {
      (void)value;
      if (!allowed.contains(key)) fail(where + ": unknown field '" + key + "'");
    }
  }

  bool require_object(const ordered_json& root, const char* key, ordered_json& out) {
    if (!root.contains(key)) {
      fail(std::string("missing required object '") + key + "'");
      return false;
    }
    if (!root[key].is_object()) {
      fail(std::string("'") + key + "' must be an object");
      return false;
    }
    out = root[key];
    return true;
  }
};

}  // namespace

ParseResult parse_config(const std::string& json_text) {
  ParseResult out;
  Parser p;

  ordered_json root = ordered_json::parse(json_text, nullptr, false);
  if (root.is_discarded() || !root.is_object()) {
    out.errors = {"config is not a valid JSON object"};
    return out;
  }
  p.check_fields(root, "config",
                 {"instance", "query", "rule", "mode", "replications", "seed"});

  ExperimentConfig cfg;

  // --- instance ---
  ordered_json inst;
  if (p.require_object(root, "instance", inst)) {
    p.check_fields(inst, "instance", {"family", "means", "variances", "rho"});
    const std::string family = inst.value("family", "");
    std::vector<double> means;
    if (inst.contains("means") && inst["means"].is_array())
      means = inst["means"].get<std::vector<double>>();
    else
      p.fail("instance: 'means' must be a numeric array");
    cfg.instance.num_arms = static_cast<int>(means.size());
    cfg.instance.theta = means;
    std::vector<double> variances;
    if (inst.contains("variances")) {
      if (inst["variances"].is_array())
        variances = inst["variances"].get<std::vector<double>>();
      else
        p.fail("instance: 'variances' must be a numeric array");
    }
    cfg.instance.rho = inst.value("rho", 0.0);

    if (family == "gaussian") {
      if (variances.empty()) variances.assign(means.size(), 1.0);
      cfg.instance.family = RewardFamily{FamilyKind::GaussianKnownVariance, variances};
      cfg.instance.sampling_variances = variances;
    } else if (family == "bernoulli") {
      cfg.instance.family = RewardFamily::bernoulli();
      if (!variances.empty()) p.fail("instance: bernoulli takes no variances");
    } else if (family == "gaussian_unknown_variance") {
      cfg.instance.family = RewardFamily::gaussian_unknown_variance();
      if (variances.empty()) variances.assign(means.size(), 1.0);
      cfg.instance.sampling_variances = variances;
    } else {
      p.fail("instance: family must be one of gaussian | bernoulli | gaussian_unknown_variance");
    }
  }

  // --- query ---
  ordered_json q;
  if (p.require_object(root, "query", q)) {
    p.check_fields(q, "query", {"kind", "k", "threshold", "epsilon", "classes"});
    const std::string kind = q.value("kind", "");
    if (kind == "best_arm") {
      cfg.query = Query::best_arm();
    } else if (kind == "best_k") {
      if (!q.contains("k"))
        p.fail("query: best_k needs 'k'");
      else
        cfg.query = Query::best_k(q["k"].get<int>());
    } else if (kind == "threshold") {
      if (!q.contains("threshold"))
        p.fail("query: threshold needs 'threshold'");
      else
        cfg.query = Query::threshold_query(q["threshold"].get<double>());
    } else if (kind == "closest_to_threshold") {
      if (!q.contains("threshold"))
        p.fail("query: closest_to_threshold needs 'threshold'");
      else
        cfg.query = Query::closest_to_threshold(q["threshold"].get<double>());
    } else if (kind == "all_epsilon_good") {
      if (!q.contains("epsilon"))
        p.fail("query: all_epsilon_good needs 'epsilon'");
      else
        cfg.query = Query::all_epsilon_good(q["epsilon"].get<double>());
    } else if (kind == "epsilon_best_arm") {
      if (!q.contains("epsilon"))
        p.fail("query: epsilon_best_arm needs 'epsilon'");
      else
        cfg.query = Query::epsilon_best_arm(q["epsilon"].get<double>());
    } else if (kind == "signed") {
      if (!q.contains("threshold"))
        p.fail("query: signed needs 'threshold'");
      else
        cfg.query = Query::signed_query(q["threshold"].get<double>());
    } else if (kind == "murphy") {
      if (!q.contains("threshold"))
        p.fail("query: murphy needs 'threshold'");
      else
        cfg.query = Query::murphy(q["threshold"].get<double>());
    } else if (kind == "pairwise") {
      if (!q.contains("classes") || !q["classes"].is_array()) {
        p.fail("query: pairwise needs 'classes' (array of arrays of [i, j] pairs, 1-indexed)");
      } else {
        std::vector<std::vector<std::pair<int, int>>> classes;
        bool shape_ok = true;
        for (const auto& cls : q["classes"]) {
          std::vector<std::pair<int, int>> pairs;
          if (!cls.is_array()) {
            shape_ok = false;
            break;
          }
          for (const auto& pr : cls) {
            if (!pr.is_array() || pr.size() != 2) {
              shape_ok = false;
              break;
            }
            pairs.emplace_back(pr[0].get<int>() - 1, pr[1].get<int>() - 1);
          }
          classes.push_back(std::move(pairs));
        }
        if (shape_ok)
          cfg.query = Query::pairwise(std::move(classes));
        else
          p.fail("query: pairwise classes must be arrays of [i, j] pairs");
      }
    } else {
      p.fail("query: unknown kind '" + kind + "'");
    }
  }

  // --- rule ---
  ordered_json rule;
  if (p.require_object(root, "rule", rule)) {
    if (rule.contains("baseline")) {
      p.check_fields(rule, "rule", {"baseline"});
      if (rule["baseline"] != "uniform")
        p.fail("rule: the only baseline is 'uniform'");
      cfg.rule.uniform_baseline = true;
    } else {
      p.check_fields(rule, "rule", {"est", "det", "sel", "beta", "ts_detection_cap"});
      const std::string est = rule.value("est", "");
      const std::string det = rule.value("det", "");
      const std::string sel = rule.value("sel", "");
      if (est == "eb")
        cfg.rule.config.estimation = EstimationRule::EB;
      else if (est == "ts")
        cfg.rule.config.estimation = EstimationRule::TS;
      else
        p.fail("rule: est must be eb | ts");
      if (det == "kkt")
        cfg.rule.config.detection = DetectionRule::KKT;
      else if (det == "ts")
        cfg.rule.config.detection = DetectionRule::TS;
      else if (det == "pps")
        cfg.rule.config.detection = DetectionRule::PPS;
      else
        p.fail("rule: det must be kkt | ts | pps");
      if (sel == "ids") {
        cfg.rule.config.selection = SelectionRule::IDS;
      } else if (sel == "beta") {
        cfg.rule.config.selection = SelectionRule::FixedBeta;
        if (!rule.contains("beta"))
          p.fail("rule: sel 'beta' needs a 'beta' value");
      } else {
        p.fail("rule: sel must be ids | beta");
      }
      if (rule.contains("beta")) {
        cfg.rule.config.beta = rule["beta"].get<double>();
        if (!(cfg.rule.config.beta > 0.0 && cfg.rule.config.beta < 1.0))
          p.fail("rule: beta must lie in (0, 1)");
      }
      if (rule.contains("ts_detection_cap")) {
        cfg.rule.config.ts_detection_cap = rule["ts_detection_cap"].get<long long>();
        if (cfg.rule.config.ts_detection_cap < 1)
          p.fail("rule: ts_detection_cap must be >= 1");
      }
    }
  }

  // --- mode ---
  ordered_json mode;
  if (p.require_object(root, "mode", mode)) {
    p.check_fields(mode, "mode",
                   {"type", "delta", "threshold", "budget", "step_cap", "checkpoints"});
    const std::string type = mode.value("type", "");
    if (type == "fixed_confidence") {
      cfg.mode.type = Mode::Type::FixedConfidence;
      if (!mode.contains("delta"))
        p.fail("mode: fixed_confidence needs 'delta'");
    } else if (type == "fixed_budget") {
      cfg.mode.type = Mode::Type::FixedBudget;
      if (!mode.contains("budget")) p.fail("mode: fixed_budget needs 'budget'");
    } else if (type == "convergence") {
      cfg.mode.type = Mode::Type::Convergence;
      if (!mode.contains("budget")) p.fail("mode: convergence needs 'budget'");
    } else {
      p.fail("mode: type must be fixed_confidence | fixed_budget | convergence");
    }
    if (mode.contains("delta")) {
      cfg.mode.delta = mode["delta"].get<double>();
      if (!(cfg.mode.delta > 0.0 && cfg.mode.delta < 1.0))
        p.fail("mode: delta must lie in (0, 1)");
    }
    const std::string th = mode.value("threshold", "practical");
    if (th == "practical")
      cfg.mode.threshold = ThresholdKind::Practical;
    else if (th == "theoretical")
      cfg.mode.threshold = ThresholdKind::Theoretical;
    else if (th == "heuristic")
      cfg.mode.threshold = ThresholdKind::Heuristic;
    else
      p.fail("mode: threshold must be practical | theoretical | heuristic");
    if (mode.contains("budget")) cfg.mode.budget = mode["budget"].get<long long>();
    if (mode.contains("step_cap")) {
      cfg.mode.step_cap = mode["step_cap"].get<long long>();
      if (cfg.mode.step_cap < 1) p.fail("mode: step_cap must be >= 1");
    }
    if (mode.contains("checkpoints")) {
      if (mode["checkpoints"].is_array())
        cfg.mode.checkpoints = mode["checkpoints"].get<std::vector<long long>>();
      else
        p.fail("mode: checkpoints must be an integer array");
    }
  }

  // --- replications / seed ---
  if (!root.contains("replications")) {
    p.fail("missing required field 'replications'");
  } else {
    cfg.replications = root["replications"].get<int>();
    if (cfg.replications < 1) p.fail("replications must be >= 1");
  }
  if (!root.contains("seed"))
    p.fail("missing required field 'seed'");
  else
    cfg.master_seed = root["seed"].get<std::uint64_t>();

  // --- cross-field invariants ---
  if (p.errors.empty()) {
    try {
      cfg.instance.validate(cfg.query);
    } catch (const std::exception& e) {
      p.fail(e.what());
    }
    if (cfg.instance.family.kind == FamilyKind::GaussianUnknownVariance &&
        !cfg.rule.uniform_baseline &&
        (cfg.rule.config.estimation != EstimationRule::EB ||
         cfg.rule.config.detection != DetectionRule::KKT))
      p.fail("unknown-variance rewards support est 'eb' with det 'kkt' only");
    const long long floor_steps = init_rounds(cfg.instance.family) * cfg.instance.num_arms;
    if (cfg.mode.type == Mode::Type::FixedConfidence && cfg.mode.step_cap < floor_steps)
      p.fail("mode: step_cap must cover the initialization rounds (K * n0)");
    if (cfg.mode.type != Mode::Type::FixedConfidence && cfg.mode.budget < floor_steps)
      p.fail("mode: budget must cover the initialization rounds (K * n0)");
  }

  if (!p.errors.empty()) {
    out.errors = std::move(p.errors);
    return out;
  }
  out.ok = true;
  out.config = std::move(cfg);
  return out;
}

namespace {

ordered_json config_json(const ExperimentConfig& cfg) {
  ordered_json j;
  ordered_json inst;
  switch (cfg.instance.family.kind) {
    case FamilyKind::GaussianKnownVariance:
      inst["family"] = "gaussian";
      inst["means"] = cfg.instance.theta;
      inst["variances"] = cfg.instance.family.variances;
      break;
    case FamilyKind::Bernoulli:
      inst["family"] = "bernoulli";
      inst["means"] = cfg.instance.theta;
      break;
    case FamilyKind::GaussianUnknownVariance:
      inst["family"] = "gaussian_unknown_variance";
      inst["means"] = cfg.instance.theta;
      inst["variances"] = cfg.instance.sampling_variances;
      break;
  }
  if (cfg.instance.rho > 0.0) inst["rho"] = cfg.instance.rho;
  j["instance"] = inst;

  ordered_json q;
  switch (cfg.query.kind) {
    case Query::Kind::BestArm:
      q["kind"] = "best_arm";
      break;
    case Query::Kind::BestK:
      q["kind"] = "best_k";
      q["k"] = cfg.query.k;
      break;
    case Query::Kind::Threshold:
      q["kind"] = "threshold";
      q["threshold"] = cfg.query.threshold;
      break;
    case Query::Kind::ClosestToThreshold:
      q["kind"] = "closest_to_threshold";
      q["threshold"] = cfg.query.threshold;
      break;
    case Query::Kind::AllEpsilonGood:
      q["kind"] = "all_epsilon_good";
      q["epsilon"] = cfg.query.epsilon;
      break;
    case Query::Kind::EpsilonBestArm:
      q["kind"] = "epsilon_best_arm";
      q["epsilon"] = cfg.query.epsilon;
      break;
    case Query::Kind::Signed:
      q["kind"] = "signed";
      q["threshold"] = cfg.query.threshold;
      break;
    case Query::Kind::Murphy:
      q["kind"] = "murphy";
      q["threshold"] = cfg.query.threshold;
      break;
    case Query::Kind::Pairwise: {
      q["kind"] = "pairwise";
      ordered_json classes = ordered_json::array();
      for (const auto& cls : cfg.query.classes) {
        ordered_json pairs = ordered_json::array();
        for (const auto& [i, jj] : cls) pairs.push_back({i + 1, jj + 1});
        classes.push_back(pairs);
      }
      q["classes"] = classes;
      break;
    }
  }
  j["query"] = q;

  ordered_json rule;
  if (cfg.rule.uniform_baseline) {
    rule["baseline"] = "uniform";
  } else {
    rule["est"] = cfg.rule.config.estimation == EstimationRule::EB ? "eb" : "ts";
    rule["det"] = cfg.rule.config.detection == DetectionRule::KKT
                      ? "kkt"
                      : (cfg.rule.config.detection == DetectionRule::TS ? "ts" : "pps");
    rule["sel"] = cfg.rule.config.selection == SelectionRule::IDS ? "ids" : "beta";
    if (cfg.rule.config.selection == SelectionRule::FixedBeta)
      rule["beta"] = cfg.rule.config.beta;
  }
  j["rule"] = rule;

  ordered_json mode;
  switch (cfg.mode.type) {
    case Mode::Type::FixedConfidence:
      mode["type"] = "fixed_confidence";
      mode["delta"] = cfg.mode.delta;
      mode["threshold"] = cfg.mode.threshold == ThresholdKind::Practical
                              ? "practical"
                              : (cfg.mode.threshold == ThresholdKind::Theoretical ? "theoretical"
                                                                                  : "heuristic");
      mode["step_cap"] = cfg.mode.step_cap;
      break;
    case Mode::Type::FixedBudget:
      mode["type"] = "fixed_budget";
      mode["budget"] = cfg.mode.budget;
      break;
    case Mode::Type::Convergence:
      mode["type"] = "convergence";
      mode["budget"] = cfg.mode.budget;
      if (!cfg.mode.checkpoints.empty()) mode["checkpoints"] = cfg.mode.checkpoints;
      break;
  }
  j["mode"] = mode;
  j["replications"] = cfg.replications;
  j["seed"] = cfg.master_seed;
  return j;
}

}  // namespace

std::string config_to_json(const ExperimentConfig& config) {
  return config_json(config).dump(2);
}

std::string summary_json(const ExperimentConfig& config, const AggregateStats& stats) {
  ordered_json j;
  j["config"] = config_json(config);
  j["replications"] = stats.replications;
  j["mean"] = stats.mean;
  j["stderr"] = stats.stderr_;
  j["ci95"] = stats.ci95;
  j["q1"] = stats.q1;
  j["q3"] = stats.q3;
  j["pcs"] = stats.pcs;
  return j.dump(2);
}

}  // namespace pure_explore
