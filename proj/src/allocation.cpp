#include "pure_explore/allocation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace pure_explore {

Allocation::Allocation(std::vector<double> w) : weights(std::move(w)) {
  double sum = 0.0;
  for (double v : weights) {
    if (!(v >= 0.0)) throw std::invalid_argument("allocation weights must be nonnegative");
    sum += v;
  }
  if (std::abs(sum - 1.0) > 1e-12)
    throw std::invalid_argument("allocation weights must sum to 1");
}

namespace detail {

// Dense LU with partial pivoting; returns false when singular.
static bool solve_linear(std::vector<std::vector<double>> a, std::vector<double> b,
                         std::vector<double>& x) {
  const int n = static_cast<int>(b.size());
  for (int c = 0; c < n; ++c) {
    int piv = c;
    for (int r = c + 1; r < n; ++r)
      if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
    if (std::abs(a[piv][c]) < 1e-14) return false;
    std::swap(a[piv], a[c]);
    std::swap(b[piv], b[c]);
    for (int r = c + 1; r < n; ++r) {
      const double f = a[r][c] / a[c][c];
      if (f == 0.0) continue;
      for (int k = c; k < n; ++k) a[r][k] -= f * a[c][k];
      b[r] -= f * b[c];
    }
  }
  x.assign(static_cast<std::size_t>(n), 0.0);
  for (int r = n - 1; r >= 0; --r) {
    double acc = b[static_cast<std::size_t>(r)];
    for (int k = r + 1; k < n; ++k) acc -= a[r][k] * x[static_cast<std::size_t>(k)];
    x[static_cast<std::size_t>(r)] = acc / a[r][r];
  }
  return true;
}

bool nnls(const std::vector<std::vector<double>>& cols, std::span<const double> b,
          std::vector<double>& mu) {
  const int n = static_cast<int>(cols.size());
  const int m = static_cast<int>(b.size());
  mu.assign(static_cast<std::size_t>(n), 0.0);
  if (n == 0) return true;

  std::vector<char> passive(static_cast<std::size_t>(n), 0);
  bool clean = true;

  auto residual_grad = [&](std::vector<double>& g) {
    std::vector<double> r(b.begin(), b.end());
    for (int c = 0; c < n; ++c)
      for (int i = 0; i < m; ++i) r[static_cast<std::size_t>(i)] -= mu[static_cast<std::size_t>(c)] * cols[static_cast<std::size_t>(c)][static_cast<std::size_t>(i)];
    g.assign(static_cast<std::size_t>(n), 0.0);
    for (int c = 0; c < n; ++c)
      for (int i = 0; i < m; ++i)
        g[static_cast<std::size_t>(c)] += cols[static_cast<std::size_t>(c)][static_cast<std::size_t>(i)] * r[static_cast<std::size_t>(i)];
  };

  auto solve_passive = [&](std::vector<double>& z) -> bool {
    std::vector<int> idx;
    for (int c = 0; c < n; ++c)
      if (passive[static_cast<std::size_t>(c)]) idx.push_back(c);
    const int k = static_cast<int>(idx.size());
    z.assign(static_cast<std::size_t>(n), 0.0);
    if (k == 0) return true;
    std::vector<std::vector<double>> ata(static_cast<std::size_t>(k),
                                         std::vector<double>(static_cast<std::size_t>(k), 0.0));
    std::vector<double> atb(static_cast<std::size_t>(k), 0.0);
    for (int a = 0; a < k; ++a) {
      for (int c = a; c < k; ++c) {
        double dot = 0.0;
        for (int i = 0; i < m; ++i)
          dot += cols[static_cast<std::size_t>(idx[static_cast<std::size_t>(a)])][static_cast<std::size_t>(i)] *
                 cols[static_cast<std::size_t>(idx[static_cast<std::size_t>(c)])][static_cast<std::size_t>(i)];
        ata[static_cast<std::size_t>(a)][static_cast<std::size_t>(c)] = dot;
        ata[static_cast<std::size_t>(c)][static_cast<std::size_t>(a)] = dot;
      }
      for (int i = 0; i < m; ++i)
        atb[static_cast<std::size_t>(a)] +=
            cols[static_cast<std::size_t>(idx[static_cast<std::size_t>(a)])][static_cast<std::size_t>(i)] *
            b[static_cast<std::size_t>(i)];
    }
    std::vector<double> zk;
    if (!solve_linear(ata, atb, zk)) {
      // Ridge fallback: least-norm-flavored solution on a singular passive set.
      clean = false;
      for (int a = 0; a < k; ++a) ata[static_cast<std::size_t>(a)][static_cast<std::size_t>(a)] += 1e-12;
      if (!solve_linear(ata, atb, zk)) return false;
    }
    for (int a = 0; a < k; ++a)
      z[static_cast<std::size_t>(idx[static_cast<std::size_t>(a)])] = zk[static_cast<std::size_t>(a)];
    return true;
  };

  std::vector<double> g, z;
  for (int outer = 0; outer < 6 * n + 12; ++outer) {
    residual_grad(g);
    int best = -1;
    double best_g = 1e-11;
    for (int c = 0; c < n; ++c)
      if (!passive[static_cast<std::size_t>(c)] && g[static_cast<std::size_t>(c)] > best_g) {
        best_g = g[static_cast<std::size_t>(c)];
        best = c;
      }
    if (best < 0) break;
    passive[static_cast<std::size_t>(best)] = 1;

    for (int inner = 0; inner < 6 * n + 12; ++inner) {
      if (!solve_passive(z)) return false;
      double alpha = 1.0;
      int blocker = -1;
      for (int c = 0; c < n; ++c) {
        if (!passive[static_cast<std::size_t>(c)]) continue;
        if (z[static_cast<std::size_t>(c)] <= 0.0) {
          const double denom = mu[static_cast<std::size_t>(c)] - z[static_cast<std::size_t>(c)];
          const double a = denom > 0.0 ? mu[static_cast<std::size_t>(c)] / denom : 0.0;
          if (a < alpha) {
            alpha = a;
            blocker = c;
          }
        }
      }
      if (blocker < 0) {
        mu = z;
        break;
      }
      for (int c = 0; c < n; ++c)
        mu[static_cast<std::size_t>(c)] += alpha * (z[static_cast<std::size_t>(c)] - mu[static_cast<std::size_t>(c)]);
      mu[static_cast<std::size_t>(blocker)] = 0.0;
      passive[static_cast<std::size_t>(blocker)] = 0;
    }
  }
  return clean;
}

void project_to_simplex(std::vector<double>& v) {
  std::vector<double> u(v);
  std::sort(u.begin(), u.end(), std::greater<double>());
  double cssv = 0.0, theta = 0.0;
  for (int i = 0; i < static_cast<int>(u.size()); ++i) {
    cssv += u[static_cast<std::size_t>(i)];
    const double t = (cssv - 1.0) / static_cast<double>(i + 1);
    if (u[static_cast<std::size_t>(i)] - t > 0.0) theta = t;
  }
  for (double& x : v) x = std::max(0.0, x - theta);
}

}  // namespace detail

namespace {

struct PitfallEvals {
  std::vector<ChernoffResult> results;
  double gamma = std::numeric_limits<double>::infinity();
  int argmin = 0;
};

PitfallEvals eval_all(const Query& query, std::span<const double> theta,
                      const ChernoffContext& ctx, const std::vector<Pitfall>& set,
                      std::span<const double> p) {
  PitfallEvals out;
  out.results.reserve(set.size());
  for (std::size_t x = 0; x < set.size(); ++x) {
    out.results.push_back(detail::eval_pitfall(query, theta, p, set[x], ctx));
    if (out.results.back().value < out.gamma) {
      out.gamma = out.results.back().value;
      out.argmin = static_cast<int>(x);
    }
  }
  return out;
}

DualCertificate certify_impl(const Query& query, std::span<const double> theta,
                             const ChernoffContext& ctx, std::span<const double> p) {
  const int K = static_cast<int>(p.size());
  const auto set = pitfalls(query, theta, TiePolicy::Strict);
  const auto evals = eval_all(query, theta, ctx, set, p);

  DualCertificate cert;
  cert.gamma = evals.gamma;

  // Complementary slackness pins mu = 0 off the near-binding set.
  constexpr double slack_tol = 1e-7;
  const double slack = slack_tol * std::max(1.0, evals.gamma);
  std::vector<int> active;
  for (std::size_t x = 0; x < set.size(); ++x)
    if (evals.results[x].value - evals.gamma <= slack) active.push_back(static_cast<int>(x));

  std::vector<std::vector<double>> cols;
  cols.reserve(active.size());
  for (int x : active) cols.push_back(evals.results[static_cast<std::size_t>(x)].weights);
  std::vector<double> mu_active;
  cert.degenerate = !detail::nnls(cols, p, mu_active);

  cert.mu.assign(set.size(), 0.0);
  for (std::size_t a = 0; a < active.size(); ++a)
    cert.mu[static_cast<std::size_t>(active[a])] = mu_active[a];

  double mu_sum = 0.0;
  std::vector<double> fitted(static_cast<std::size_t>(K), 0.0);
  for (std::size_t x = 0; x < set.size(); ++x) {
    mu_sum += cert.mu[x];
    for (int i = 0; i < K; ++i)
      fitted[static_cast<std::size_t>(i)] += cert.mu[x] * evals.results[x].weights[static_cast<std::size_t>(i)];
    cert.slackness_residual =
        std::max(cert.slackness_residual, cert.mu[x] * (evals.results[x].value - evals.gamma));
  }
  for (int i = 0; i < K; ++i)
    cert.stationarity_residual = std::max(
        cert.stationarity_residual, std::abs(p[static_cast<std::size_t>(i)] - fitted[static_cast<std::size_t>(i)]));
  cert.mu_sum_error = std::abs(mu_sum - 1.0);
  return cert;
}

// ---------------------------------------------------------------------------
// Closed form: per-arm pitfalls C_i = p_i d_i equalize at p_i proportional to
// 1/d_i (Threshold, and the infeasible Murphy case).
SolveResult solve_per_arm(const Query& query, std::span<const double> theta,
                          const ChernoffContext& ctx, const std::vector<Pitfall>& set) {
  const int K = static_cast<int>(theta.size());
  std::vector<double> inv(static_cast<std::size_t>(K), 0.0);
  std::vector<double> unit(static_cast<std::size_t>(K), 1.0);  // gradient probe
  double total = 0.0;
  for (const Pitfall& x : set) {
    const auto r = detail::eval_pitfall(query, theta, unit, x, ctx);
    const double d = r.gradient[static_cast<std::size_t>(x.i)];
    if (!(d > 0.0)) throw std::invalid_argument("degenerate per-arm divergence");
    inv[static_cast<std::size_t>(x.i)] = 1.0 / d;
    total += 1.0 / d;
  }
  SolveResult out;
  out.p.assign(static_cast<std::size_t>(K), 0.0);
  for (int i = 0; i < K; ++i) out.p[static_cast<std::size_t>(i)] = inv[static_cast<std::size_t>(i)] / total;
  out.gamma = 1.0 / total;
  out.converged = true;
  return out;
}

// Single whole-set pitfall: maximize sum_i p_i d_i -> vertex on argmax d_i.
SolveResult solve_vertex(const Query& query, std::span<const double> theta,
                         const ChernoffContext& ctx) {
  const int K = static_cast<int>(theta.size());
  std::vector<double> unit(static_cast<std::size_t>(K), 1.0);
  const auto r = detail::eval_pitfall(query, theta, unit, Pitfall::whole(), ctx);
  int best = 0;
  for (int i = 1; i < K; ++i)
    if (r.gradient[static_cast<std::size_t>(i)] > r.gradient[static_cast<std::size_t>(best)]) best = i;
  SolveResult out;
  out.p.assign(static_cast<std::size_t>(K), 0.0);
  out.p[static_cast<std::size_t>(best)] = 1.0;
  out.gamma = r.gradient[static_cast<std::size_t>(best)];
  out.converged = true;
  return out;
}

// ---------------------------------------------------------------------------
// Star-shaped pair structures (every pitfall pair shares one common arm):
// best-arm, epsilon-best-arm, closest-to-threshold, best-k with k = 1 or K-1,
// all-epsilon-good with a single good arm. Solved by the classical nested
// bisection: for a tentative per-unit value y, the satellite ratios x_s
// solve C(p_c = 1, p_s = x_s) = y, and the stationarity condition
// sum_s grad_c / grad_s = 1 pins y.
struct StarPair {
  Pitfall pitfall;
  int satellite;
};

bool star_structure(const std::vector<Pitfall>& set, std::span<const double>,
                    const Query& query, std::span<const double> theta, int* common,
                    std::vector<StarPair>* sats) {
  // Expand Arm-tagged star pitfalls (pair partner implicit) and Pair pitfalls.
  std::vector<std::pair<int, int>> pairs;
  for (const Pitfall& x : set) {
    if (x.tag == Pitfall::Tag::Whole) return false;
    if (x.tag == Pitfall::Tag::Arm) {
      if (query.kind == Query::Kind::Threshold || query.kind == Query::Kind::Murphy)
        return false;  // per-arm, not a pair structure
      const int star = correct_answer(query, theta, TiePolicy::LowestIndex).arms[0];
      pairs.emplace_back(star, x.i);
    } else {
      pairs.emplace_back(x.i, x.j);
    }
  }
  if (pairs.empty()) return false;
  for (int side = 0; side < 2; ++side) {
    const int c0 = side == 0 ? pairs[0].first : pairs[0].second;
    bool ok = true;
    for (const auto& pr : pairs)
      if ((side == 0 ? pr.first : pr.second) != c0) {
        ok = false;
        break;
      }
    if (ok) {
      *common = c0;
      sats->clear();
      for (std::size_t idx = 0; idx < set.size(); ++idx)
        sats->push_back({set[idx], side == 0 ? pairs[idx].second : pairs[idx].first});
      return true;
    }
  }
  return false;
}

SolveResult solve_star(const Query& query, std::span<const double> theta,
                       const ChernoffContext& ctx, int common,
                       const std::vector<StarPair>& sats) {
  const int K = static_cast<int>(theta.size());
  std::vector<double> probe(static_cast<std::size_t>(K), 0.0);

  auto pair_eval = [&](const StarPair& sp, double pc, double ps) {
    std::fill(probe.begin(), probe.end(), 0.0);
    probe[static_cast<std::size_t>(common)] = pc;
    probe[static_cast<std::size_t>(sp.satellite)] = ps;
    return detail::eval_pitfall(query, theta, probe, sp.pitfall, ctx);
  };

  // Value of the pair at (p_common = 1, p_sat = x), increasing in x with a
  // finite limit; invert by bisection with geometric bracket growth.
  auto ratio_for_value = [&](const StarPair& sp, double y) -> double {
    double hi = 1.0;
    for (int it = 0; it < 200 && pair_eval(sp, 1.0, hi).value < y; ++it) hi *= 2.0;
    double lo = 0.0;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (pair_eval(sp, 1.0, mid).value < y)
        lo = mid;
      else
        hi = mid;
    }
    return 0.5 * (lo + hi);
  };

  // Limit of the pair value as the satellite allocation grows unboundedly.
  double y_max = std::numeric_limits<double>::infinity();
  for (const auto& sp : sats)
    y_max = std::min(y_max, pair_eval(sp, 1.0, 1e12).value);

  auto stationarity_gap = [&](double y) -> double {
    double acc = 0.0;
    for (const auto& sp : sats) {
      const double x = ratio_for_value(sp, y);
      const auto r = pair_eval(sp, 1.0, x);
      const double gc = r.gradient[static_cast<std::size_t>(common)];
      const double gs = r.gradient[static_cast<std::size_t>(sp.satellite)];
      if (!(gs > 0.0)) return std::numeric_limits<double>::infinity();
      acc += gc / gs;
    }
    return acc - 1.0;
  };

  double lo = 0.0, hi = y_max * (1.0 - 1e-12);
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (stationarity_gap(mid) < 0.0)
      lo = mid;
    else
      hi = mid;
  }
  const double y = 0.5 * (lo + hi);

  SolveResult out;
  out.p.assign(static_cast<std::size_t>(K), 0.0);
  out.p[static_cast<std::size_t>(common)] = 1.0;
  for (const auto& sp : sats)
    out.p[static_cast<std::size_t>(sp.satellite)] = ratio_for_value(sp, y);
  const double total = std::accumulate(out.p.begin(), out.p.end(), 0.0);
  for (double& v : out.p) v /= total;
  out.gamma = y / total;
  out.converged = true;
  return out;
}

// ---------------------------------------------------------------------------
// General structures: the prescribed projected subgradient ascent, polished by
// a damped Newton solve of the active-set KKT system (the ascent alone stalls
// around 1e-3 of the optimum, far short of certification accuracy).
struct NewtonOutcome {
  std::vector<double> p;
  double gamma = 0.0;
  bool ok = false;
};

NewtonOutcome newton_polish(const Query& query, std::span<const double> theta,
                            const ChernoffContext& ctx, const std::vector<Pitfall>& set,
                            std::vector<double> p) {
  const int K = static_cast<int>(p.size());
  NewtonOutcome out;

  auto evals_at = [&](std::span<const double> q) { return eval_all(query, theta, ctx, set, q); };

  // Active-set guess: the near-binding pitfalls, expanded so that every arm
  // appears in some member (stationarity zeroes any uncovered arm, and the
  // cheapest binding pitfall per arm is the Corollary-1 candidate).
  auto pick_active = [&](const PitfallEvals& ev) {
    const double slack = std::max(1e-9, 1e-3 * std::max(1.0, ev.gamma));
    std::vector<int> active;
    std::vector<char> in_active(set.size(), 0);
    for (std::size_t x = 0; x < set.size(); ++x)
      if (ev.results[x].value - ev.gamma <= slack) {
        active.push_back(static_cast<int>(x));
        in_active[x] = 1;
      }
    for (int i = 0; i < K; ++i) {
      bool covered = false;
      for (int x : active)
        if (ev.results[static_cast<std::size_t>(x)].gradient[static_cast<std::size_t>(i)] > 0.0)
          covered = true;
      if (covered) continue;
      int best = -1;
      for (std::size_t x = 0; x < set.size(); ++x)
        if (!in_active[x] && ev.results[x].gradient[static_cast<std::size_t>(i)] > 0.0 &&
            (best < 0 || ev.results[x].value < ev.results[static_cast<std::size_t>(best)].value))
          best = static_cast<int>(x);
      if (best >= 0) {
        active.push_back(best);
        in_active[static_cast<std::size_t>(best)] = 1;
      }
    }
    std::sort(active.begin(), active.end());
    return active;
  };

  std::vector<int> forced_out;  // dropped after a negative dual
  for (int attempt = 0; attempt < 10; ++attempt) {
    auto ev = evals_at(p);
    std::vector<int> active = pick_active(ev);
    active.erase(std::remove_if(active.begin(), active.end(),
                                [&](int x) {
                                  return std::find(forced_out.begin(), forced_out.end(), x) !=
                                         forced_out.end();
                                }),
                 active.end());
    if (active.empty()) return out;
    const int A = static_cast<int>(active.size());

    // NNLS warm start for the duals.
    std::vector<std::vector<double>> cols;
    for (int x : active) cols.push_back(ev.results[static_cast<std::size_t>(x)].weights);
    std::vector<double> mu;
    detail::nnls(cols, p, mu);

    const int dim = K + A + 1;
    std::vector<double> z(static_cast<std::size_t>(dim), 0.0);
    for (int i = 0; i < K; ++i) z[static_cast<std::size_t>(i)] = p[static_cast<std::size_t>(i)];
    for (int a = 0; a < A; ++a) z[static_cast<std::size_t>(K + a)] = mu[static_cast<std::size_t>(a)];
    z[static_cast<std::size_t>(K + A)] = ev.gamma;

    auto residual = [&](const std::vector<double>& zz, std::vector<double>& r) -> bool {
      std::span<const double> q(zz.data(), static_cast<std::size_t>(K));
      for (double v : q)
        if (!(v >= 0.0)) return false;
      auto e = evals_at(q);
      r.assign(static_cast<std::size_t>(dim), 0.0);
      // stationarity rows
      for (int i = 0; i < K; ++i) {
        double fit = 0.0;
        for (int a = 0; a < A; ++a)
          fit += zz[static_cast<std::size_t>(K + a)] *
                 e.results[static_cast<std::size_t>(active[static_cast<std::size_t>(a)])]
                     .weights[static_cast<std::size_t>(i)];
        r[static_cast<std::size_t>(i)] = zz[static_cast<std::size_t>(i)] - fit;
      }
      // equalization rows
      for (int a = 0; a < A; ++a)
        r[static_cast<std::size_t>(K + a)] =
            e.results[static_cast<std::size_t>(active[static_cast<std::size_t>(a)])].value -
            zz[static_cast<std::size_t>(K + A)];
      // simplex row
      double s = 0.0;
      for (int i = 0; i < K; ++i) s += zz[static_cast<std::size_t>(i)];
      r[static_cast<std::size_t>(K + A)] = s - 1.0;
      return true;
    };

    std::vector<double> r0;
    if (!residual(z, r0)) return out;
    double rnorm = 0.0;
    for (double v : r0) rnorm = std::max(rnorm, std::abs(v));

    bool newton_ok = true;
    for (int iter = 0; iter < 60 && rnorm > 1e-12; ++iter) {
      // Jacobian by forward differences on the residual map (tiny system).
      std::vector<std::vector<double>> J(static_cast<std::size_t>(dim),
                                         std::vector<double>(static_cast<std::size_t>(dim), 0.0));
      for (int c = 0; c < dim; ++c) {
        const double h = 1e-7 * std::max(1.0, std::abs(z[static_cast<std::size_t>(c)]));
        std::vector<double> zp = z;
        zp[static_cast<std::size_t>(c)] += h;
        std::vector<double> rp;
        if (!residual(zp, rp)) {
          zp = z;
          zp[static_cast<std::size_t>(c)] -= h;
          if (!residual(zp, rp)) {
            newton_ok = false;
            break;
          }
          for (int rr = 0; rr < dim; ++rr)
            J[static_cast<std::size_t>(rr)][static_cast<std::size_t>(c)] =
                (r0[static_cast<std::size_t>(rr)] - rp[static_cast<std::size_t>(rr)]) / h;
          continue;
        }
        for (int rr = 0; rr < dim; ++rr)
          J[static_cast<std::size_t>(rr)][static_cast<std::size_t>(c)] =
              (rp[static_cast<std::size_t>(rr)] - r0[static_cast<std::size_t>(rr)]) / h;
      }
      if (!newton_ok) break;

      std::vector<double> neg_r(r0.size());
      for (std::size_t i = 0; i < r0.size(); ++i) neg_r[i] = -r0[i];
      std::vector<double> dz;
      if (!detail::solve_linear(J, neg_r, dz)) {
        for (int d = 0; d < dim; ++d) J[static_cast<std::size_t>(d)][static_cast<std::size_t>(d)] += 1e-10;
        if (!detail::solve_linear(J, neg_r, dz)) {
          newton_ok = false;
          break;
        }
      }

      double step = 1.0;
      bool accepted = false;
      for (int bt = 0; bt < 30; ++bt, step *= 0.5) {
        std::vector<double> zn = z;
        for (int d = 0; d < dim; ++d) zn[static_cast<std::size_t>(d)] += step * dz[static_cast<std::size_t>(d)];
        bool feasible = true;
        for (int i = 0; i < K; ++i)
          if (zn[static_cast<std::size_t>(i)] < 1e-12) feasible = false;
        if (!feasible) continue;
        std::vector<double> rn;
        if (!residual(zn, rn)) continue;
        double rn_norm = 0.0;
        for (double v : rn) rn_norm = std::max(rn_norm, std::abs(v));
        if (rn_norm < rnorm * (1.0 - 1e-4 * step) || rn_norm < 1e-12) {
          z = std::move(zn);
          r0 = std::move(rn);
          rnorm = rn_norm;
          accepted = true;
          break;
        }
      }
      if (!accepted) break;
    }

    if (rnorm <= 1e-9) {
      int neg_mu = -1;
      for (int a = 0; a < A; ++a)
        if (z[static_cast<std::size_t>(K + a)] < -1e-9) neg_mu = a;
      std::vector<double> q(z.begin(), z.begin() + K);
      auto ev2 = evals_at(q);
      // Gamma must be the overall minimum: a pitfall outside the active set
      // dipping below it means the set was too small.
      const double gap = z[static_cast<std::size_t>(K + A)] - ev2.gamma;
      if (neg_mu < 0 && std::abs(gap) <= 1e-8 * std::max(1.0, ev2.gamma)) {
        out.p = q;
        out.gamma = ev2.gamma;
        out.ok = true;
        return out;
      }
      if (neg_mu >= 0) forced_out.push_back(active[static_cast<std::size_t>(neg_mu)]);
      double s = 0.0;
      for (double v : q) s += std::max(v, 0.0);
      if (s > 0.0) {
        for (double& v : q) v = std::max(v, 0.0) / s;
        p = q;
      }
      continue;
    }
    // Re-seed from the best current point and retry with a fresh active set.
    std::vector<double> q(z.begin(), z.begin() + K);
    double s = 0.0;
    for (double v : q) s += std::max(v, 0.0);
    if (s > 0.0) {
      for (double& v : q) v = std::max(v, 0.0) / s;
      p = q;
    }
  }
  return out;
}

SolveResult solve_general(const Query& query, std::span<const double> theta,
                          const ChernoffContext& ctx, const std::vector<Pitfall>& set) {
  const int K = static_cast<int>(theta.size());
  constexpr long long kIterCap = 50000;
  constexpr double kStepScale = 0.5;

  SolveResult out;
  std::vector<double> p(static_cast<std::size_t>(K), 1.0 / static_cast<double>(K));
  std::vector<double> best_p = p;
  double best_obj = eval_all(query, theta, ctx, set, p).gamma;
  out.best_trace.push_back(best_obj);

  long long iter = 0;
  while (iter < kIterCap) {
    for (long long chunk = 0; chunk < 2000 && iter < kIterCap; ++chunk) {
      ++iter;
      const auto ev = eval_all(query, theta, ctx, set, p);
      if (ev.gamma > best_obj) {
        best_obj = ev.gamma;
        best_p = p;
      }
      const auto& g = ev.results[static_cast<std::size_t>(ev.argmin)].gradient;
      const double step = kStepScale / std::sqrt(static_cast<double>(iter));
      for (int i = 0; i < K; ++i) p[static_cast<std::size_t>(i)] += step * g[static_cast<std::size_t>(i)];
      detail::project_to_simplex(p);
    }
    out.best_trace.push_back(best_obj);

    auto polish = newton_polish(query, theta, ctx, set, best_p);
    if (polish.ok) {
      out.p = polish.p;
      out.gamma = polish.gamma;
      out.iterations = iter;
      out.converged = true;
      return out;
    }
  }

  out.p = best_p;
  out.gamma = best_obj;
  out.iterations = iter;
  out.converged = false;
  return out;
}

}  // namespace

SolveResult solve(const Query& query, std::span<const double> theta, const ChernoffContext& ctx) {
  validate_query(query, static_cast<int>(theta.size()), *ctx.family);
  const auto set = pitfalls(query, theta, TiePolicy::Strict);

  SolveResult out;
  if (set.size() == 1 && set[0].tag == Pitfall::Tag::Whole) {
    out = solve_vertex(query, theta, ctx);
  } else if (query.kind == Query::Kind::Threshold ||
             (query.kind == Query::Kind::Murphy && set[0].tag == Pitfall::Tag::Arm)) {
    out = solve_per_arm(query, theta, ctx, set);
  } else {
    int common = -1;
    std::vector<StarPair> sats;
    if (star_structure(set, theta, query, theta, &common, &sats)) {
      out = solve_star(query, theta, ctx, common, sats);
    } else {
      out = solve_general(query, theta, ctx, set);
    }
  }

  bool positive = true;
  for (double v : out.p)
    if (!(v > 0.0)) positive = false;
  if (positive) out.certificate = certify_impl(query, theta, ctx, out.p);
  return out;
}

DualCertificate certify(const Query& query, std::span<const double> theta,
                        const ChernoffContext& ctx, const Allocation& p) {
  for (double v : p.weights)
    if (!(v > 0.0))
      throw std::invalid_argument("certify requires a component-wise strictly positive allocation");
  return certify_impl(query, theta, ctx, p.weights);
}

double overall_balance_residual(const Allocation& p, int star,
                                std::span<const double> variances) {
  const int K = static_cast<int>(p.weights.size());
  if (star < 0 || star >= K) throw std::invalid_argument("invalid best-arm index");
  double acc = p.weights[static_cast<std::size_t>(star)] * p.weights[static_cast<std::size_t>(star)] /
               variances[static_cast<std::size_t>(star)];
  for (int j = 0; j < K; ++j) {
    if (j == star) continue;
    acc -= p.weights[static_cast<std::size_t>(j)] * p.weights[static_cast<std::size_t>(j)] /
           variances[static_cast<std::size_t>(j)];
  }
  return acc;
}

}  // namespace pure_explore
