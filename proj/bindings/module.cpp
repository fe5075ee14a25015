#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "pure_explore/config.hpp"

namespace py = pybind11;
using namespace pure_explore;

namespace {

RewardFamily make_family(const std::string& kind, const std::vector<double>& variances) {
  if (kind == "gaussian") return RewardFamily::gaussian(variances);
  if (kind == "bernoulli") return RewardFamily::bernoulli();
  if (kind == "gaussian_unknown_variance") return RewardFamily::gaussian_unknown_variance();
  throw std::invalid_argument("unknown family: " + kind);
}

Query make_query(const std::string& kind, double param) {
  if (kind == "best_arm") return Query::best_arm();
  if (kind == "best_k") return Query::best_k(static_cast<int>(param));
  if (kind == "threshold") return Query::threshold_query(param);
  if (kind == "closest_to_threshold") return Query::closest_to_threshold(param);
  if (kind == "all_epsilon_good") return Query::all_epsilon_good(param);
  if (kind == "epsilon_best_arm") return Query::epsilon_best_arm(param);
  if (kind == "signed") return Query::signed_query(param);
  if (kind == "murphy") return Query::murphy(param);
  throw std::invalid_argument("unknown query kind: " + kind);
}

py::dict chernoff_dict(const ChernoffResult& r) {
  py::dict d;
  d["value"] = r.value;
  d["minimizer"] = r.minimizer;
  if (!r.minimizer_var.empty()) d["minimizer_var"] = r.minimizer_var;
  d["gradient"] = r.gradient;
  d["weights"] = r.weights;
  d["active_set"] = r.active_set;
  return d;
}

py::dict solve_dict(const SolveResult& r) {
  py::dict d;
  d["p_star"] = r.p;
  d["gamma_star"] = r.gamma;
  d["converged"] = r.converged;
  d["iterations"] = r.iterations;
  py::dict cert;
  cert["mu"] = r.certificate.mu;
  cert["stationarity_residual"] = r.certificate.stationarity_residual;
  cert["slackness_residual"] = r.certificate.slackness_residual;
  cert["mu_sum_error"] = r.certificate.mu_sum_error;
  d["certificate"] = cert;
  return d;
}

}  // namespace

PYBIND11_MODULE(_pure_explore, m) {
  m.doc() = "Dual-directed pure-exploration bandit engine";

  m.def(
      "kl",
      [](const std::string& family, double m1, double m2, double variance) {
        const RewardFamily f = make_family(family, {variance});
        return kl(f, 0, m1, m2);
      },
      py::arg("family"), py::arg("m1"), py::arg("m2"), py::arg("variance") = 1.0,
      "KL divergence between two family members identified by their means");

  m.def("kl_gaussian_two_param", &kl_gaussian_two_param, py::arg("theta"), py::arg("sigma2"),
        py::arg("vartheta"), py::arg("varsigma2"));

  m.def(
      "chernoff",
      [](const std::string& query_kind, double query_param, const std::string& family,
         std::vector<double> theta, std::vector<double> p, std::vector<double> variances,
         py::object pitfall_i, py::object pitfall_j) {
        const Query q = make_query(query_kind, query_param);
        if (variances.empty()) variances.assign(theta.size(), 1.0);
        const RewardFamily f = make_family(family, variances);
        ChernoffContext ctx;
        ctx.family = &f;
        Pitfall pf = Pitfall::whole();
        if (!pitfall_i.is_none()) {
          if (pitfall_j.is_none())
            pf = Pitfall::arm(pitfall_i.cast<int>() - 1);
          else
            pf = Pitfall::pair(pitfall_i.cast<int>() - 1, pitfall_j.cast<int>() - 1);
        }
        return chernoff_dict(chernoff(q, theta, p, pf, ctx));
      },
      py::arg("query_kind"), py::arg("query_param"), py::arg("family"), py::arg("theta"),
      py::arg("p"), py::arg("variances") = std::vector<double>{},
      py::arg("pitfall_i") = py::none(), py::arg("pitfall_j") = py::none(),
      "Generalized Chernoff information of one pitfall (1-indexed arms)");

  m.def(
      "glrt",
      [](const std::string& query_kind, double query_param, const std::string& family,
         std::vector<double> theta, std::vector<double> p, std::vector<double> variances) {
        const Query q = make_query(query_kind, query_param);
        if (variances.empty()) variances.assign(theta.size(), 1.0);
        const RewardFamily f = make_family(family, variances);
        ChernoffContext ctx;
        ctx.family = &f;
        auto [value, pf] = glrt_statistic(q, theta, p, ctx, TiePolicy::LowestIndex);
        return py::make_tuple(value, pf.to_string());
      },
      py::arg("query_kind"), py::arg("query_param"), py::arg("family"), py::arg("theta"),
      py::arg("p"), py::arg("variances") = std::vector<double>{});

  m.def(
      "solve",
      [](const std::string& query_kind, double query_param, const std::string& family,
         std::vector<double> theta, std::vector<double> variances) {
        const Query q = make_query(query_kind, query_param);
        if (variances.empty() && family != "bernoulli") variances.assign(theta.size(), 1.0);
        const RewardFamily f = make_family(family, variances);
        ChernoffContext ctx;
        ctx.family = &f;
        return solve_dict(solve(q, theta, ctx));
      },
      py::arg("query_kind"), py::arg("query_param"), py::arg("family"), py::arg("theta"),
      py::arg("variances") = std::vector<double>{},
      "Maximin optimal allocation with its KKT certificate");

  m.def(
      "chernoff_unknown_variance",
      [](std::vector<double> theta, std::vector<double> variance_estimates,
         std::vector<double> p, int pitfall_arm) {
        return chernoff_dict(
            chernoff_unknown_variance(theta, variance_estimates, p,
                                      Pitfall::arm(pitfall_arm - 1)));
      },
      py::arg("theta"), py::arg("variance_estimates"), py::arg("p"), py::arg("pitfall_arm"),
      "Best-arm pitfall with variances estimated from data (1-indexed arm)");

  m.def(
      "chernoff_crn",
      [](std::vector<double> theta, std::vector<double> sigma, double rho,
         std::vector<double> p, int pitfall_arm) {
        return chernoff_dict(chernoff_crn(theta, sigma, rho, p, Pitfall::arm(pitfall_arm - 1)));
      },
      py::arg("theta"), py::arg("sigma"), py::arg("rho"), py::arg("p"), py::arg("pitfall_arm"),
      "Best-arm pitfall under equicorrelated rewards (1-indexed arm)");

  m.def("stopping_threshold",
        [](const std::string& kind, long long t, double delta, std::vector<long long> counts) {
          ThresholdKind k = ThresholdKind::Practical;
          if (kind == "theoretical") k = ThresholdKind::Theoretical;
          else if (kind == "heuristic") k = ThresholdKind::Heuristic;
          else if (kind != "practical") throw std::invalid_argument("unknown threshold kind");
          return threshold(k, t, delta, static_cast<int>(counts.size()), counts);
        },
        py::arg("kind"), py::arg("t"), py::arg("delta"), py::arg("counts"));

  m.def("normal_quantile", &normal_quantile, py::arg("q"));

  m.def(
      "run_experiment",
      [](const std::string& config_json, int workers) {
        auto parsed = parse_config(config_json);
        if (!parsed.ok) {
          std::string msg = "config validation failed:";
          for (const auto& e : parsed.errors) msg += "\n  - " + e;
          throw std::invalid_argument(msg);
        }
        const auto result = run_replications(parsed.config, workers);
        py::dict d;
        d["mean"] = result.stats.mean;
        d["stderr"] = result.stats.stderr_;
        d["ci95"] = result.stats.ci95;
        d["q1"] = result.stats.q1;
        d["q3"] = result.stats.q3;
        d["pcs"] = result.stats.pcs;
        d["replications"] = result.stats.replications;
        py::list runs;
        for (const auto& rec : result.records) {
          py::dict r;
          r["replication"] = rec.replication + 1;
          r["tau_or_T"] = rec.tau_or_t;
          r["answer"] = rec.answer.to_string();
          r["correct"] = rec.correct;
          r["censored"] = rec.censored;
          r["fallback_count"] = rec.ts_fallbacks;
          runs.append(r);
        }
        d["runs"] = runs;
        return d;
      },
      py::arg("config_json"), py::arg("workers") = 1,
      "Run a replicated experiment from a JSON config string");

  m.attr("__version__") = "0.1.0";
}
