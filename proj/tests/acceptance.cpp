// Acceptance checks. One PASS/FAIL line per criterion; exit status is nonzero
// if any gating criterion fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "taufpl/bench.hpp"
#include "taufpl/data.hpp"
#include "taufpl/eval.hpp"
#include "taufpl/grid.hpp"
#include "taufpl/parallel.hpp"
#include "taufpl/projection.hpp"
#include "taufpl/solver.hpp"
#include "taufpl/thresholding.hpp"

using namespace taufpl;
using V = std::vector<double>;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
  bool gating = true;
  bool skipped = false;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof(buf), f, args...);
  return buf;
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

V uniform(std::mt19937_64& rng, std::size_t n, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  V v(n);
  for (double& x : v) x = u(rng);
  return v;
}

double sum(const V& v) { return std::accumulate(v.begin(), v.end(), 0.0); }

double dist2(const V& a, const V& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return s;
}

// ------------------------------------------------------------------ 1

Outcome oracle_equivalence() {
  std::mt19937_64 rng(1001);
  const auto t0 = Clock::now();
  double worst = 0.0;
  std::size_t projections = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t m = 1 + rng() % 6, n = 1 + rng() % 6;
    const V a0 = uniform(rng, m, -2, 2), b0 = uniform(rng, n, -2, 2);
    for (std::size_t k = 1; k <= n; ++k) {
      const auto r = project_top_k(a0, b0, k);
      const auto o = oracle::project_enumerate(a0, b0, k);
      worst = std::max({worst, oracle::max_abs_diff(r.alpha, o.alpha), oracle::max_abs_diff(r.beta, o.beta)});
      ++projections;
    }
  }
  const double secs = seconds_since(t0);
  return {worst <= 1e-6 && secs < 10.0,
          fmt("%zu projections, max coordinate diff %.2e, %.2f s", projections, worst, secs)};
}

// ------------------------------------------------------------------ 2

Outcome feasibility_certificates() {
  std::mt19937_64 rng(1002);
  double worst_gap = 0.0, worst_cap = 0.0, worst_kkt = 0.0, worst_neg = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t m = 1 + rng() % 1000, n = 1 + rng() % 1000;
    const double scale = std::pow(10.0, static_cast<double>(rng() % 5) - 2.0);
    const V a0 = uniform(rng, m, -scale, scale), b0 = uniform(rng, n, -scale, scale);
    const std::size_t k = 1 + rng() % n;
    const auto r = project_top_k(a0, b0, k);
    const double sa = sum(r.alpha), sb = sum(r.beta);
    worst_gap = std::max(worst_gap, std::abs(sa - sb) / std::max(1.0, sa));
    for (double b : r.beta) worst_cap = std::max(worst_cap, b - sa / static_cast<double>(k));
    for (double a : r.alpha) worst_neg = std::max(worst_neg, -a);
    for (double b : r.beta) worst_neg = std::max(worst_neg, -b);
    const double kkt = kkt_residuals(a0, b0, k, r.lambda, r.mu, r.C).max() / (1.0 + r.C);
    worst_kkt = std::max(worst_kkt, kkt);
  }
  return {worst_gap <= 1e-8 && worst_cap <= 1e-8 && worst_kkt <= 1e-6 && worst_neg <= 0.0,
          fmt("coupling gap %.2e, cap slack %.2e, scaled KKT residual %.2e", worst_gap, worst_cap, worst_kkt)};
}

// ------------------------------------------------------------------ 3

Outcome zero_case_iff() {
  std::mt19937_64 rng(1003);
  std::size_t mismatches = 0, zeros = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t m = 1 + rng() % 5, n = 1 + rng() % 5;
    const double shift = -1.5 * static_cast<double>(rng() % 3) / 2.0;
    const V a0 = uniform(rng, m, -2 + shift, 1 + shift), b0 = uniform(rng, n, -2 + shift, 1 + shift);
    const std::size_t k = 1 + rng() % n;
    const auto o = oracle::project_enumerate(a0, b0, k);
    const bool oracle_zero = sum(o.alpha) <= 1e-12 && sum(o.beta) <= 1e-12;
    zeros += oracle_zero ? 1 : 0;
    mismatches += zero_case(a0, b0, k) != oracle_zero ? 1 : 0;
  }
  return {mismatches == 0, fmt("%zu mismatches; %zu of 1000 instances are zero cases", mismatches, zeros)};
}

// ------------------------------------------------------------------ 4

Outcome idempotent_nonexpansive() {
  std::mt19937_64 rng(1004);
  double worst_idem = 0.0, worst_exp = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t m = 1 + rng() % 40, n = 1 + rng() % 40;
    const std::size_t k = 1 + rng() % n;
    const V a0 = uniform(rng, m, -2, 2), b0 = uniform(rng, n, -2, 2);
    const V a1 = uniform(rng, m, -2, 2), b1 = uniform(rng, n, -2, 2);
    const auto p = project_top_k(a0, b0, k);
    const auto pp = project_top_k(p.alpha, p.beta, k);
    worst_idem = std::max({worst_idem, oracle::max_abs_diff(p.alpha, pp.alpha), oracle::max_abs_diff(p.beta, pp.beta)});
    const auto q = project_top_k(a1, b1, k);
    const double lhs = std::sqrt(dist2(p.alpha, q.alpha) + dist2(p.beta, q.beta));
    const double rhs = std::sqrt(dist2(a0, a1) + dist2(b0, b1));
    worst_exp = std::max(worst_exp, lhs - rhs);
  }
  return {worst_idem <= 1e-9 && worst_exp <= 1e-12,
          fmt("idempotence error %.2e, worst ||P(x)-P(y)|| - ||x-y|| = %.2e", worst_idem, worst_exp)};
}

// ------------------------------------------------------------------ 5

// lambda with C(lambda) = C, for 0 < C.
double lambda_of_C(double C, V a) {
  std::sort(a.begin(), a.end(), std::greater<>());
  double prefix = 0.0;
  for (std::size_t r = 1; r <= a.size(); ++r) {
    prefix += a[r - 1];
    const double lam = (prefix - C) / static_cast<double>(r);
    const double next = r < a.size() ? a[r] : -INFINITY;
    if (lam >= next && lam < a[r - 1]) return lam;
  }
  return (prefix - C) / static_cast<double>(a.size());
}

Outcome monotonicity_suite() {
  std::mt19937_64 rng(1005);
  const double slack = 1e-10;
  std::size_t c_viol = 0, d_viol = 0, f_viol = 0, cvx_viol = 0, checks = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t m = 1 + rng() % 30, n = 2 + rng() % 30;
    const V a0 = uniform(rng, m, -1, 1), b0 = uniform(rng, n, -1, 1);
    const std::size_t k = 1 + rng() % n;
    const double lo = -*std::max_element(b0.begin(), b0.end());
    const double hi = *std::max_element(a0.begin(), a0.end());
    if (!(lo < hi)) continue;

    double prev_c = INFINITY, prev_f = -INFINITY;
    for (int i = 1; i < 400; ++i) {
      const double lam = lo + (hi - lo) * i / 400.0;
      const double C = eval_C(lam, a0);
      c_viol += C > prev_c + slack ? 1 : 0;
      prev_c = C;
      if (C > 0.0) {
        const double f = eval_f(lam, a0, b0, k);
        f_viol += !(f > prev_f - slack) ? 1 : 0;
        prev_f = f;
      }
      ++checks;
    }

    // delta is strictly increasing when some b0 lies below the k-th largest.
    if (k < n) {
      double prev_d = -INFINITY;
      for (int i = 1; i < 400; ++i) {
        const double d = eval_delta(0.01 * i, b0, k);
        d_viol += !(d > prev_d) ? 1 : 0;
        prev_d = d;
      }
    }

    // Midpoint convexity of f(lambda(C)) over the C-range of the bracket.
    const double c_max = eval_C(lo, a0);
    auto h = [&](double C) { return eval_f(lambda_of_C(C, a0), a0, b0, k); };
    for (int i = 0; i < 200; ++i) {
      std::uniform_real_distribution<double> u(1e-6 * c_max, c_max);
      const double c1 = u(rng), c2 = u(rng);
      const double mid = h(0.5 * (c1 + c2));
      const double chord = 0.5 * (h(c1) + h(c2));
      cvx_viol += mid > chord + slack * (1.0 + std::abs(chord)) ? 1 : 0;
    }
  }
  const std::size_t total = c_viol + d_viol + f_viol + cvx_viol;
  return {total == 0, fmt("violations: C %zu, delta %zu, f %zu, convexity %zu (%zu grid points)", c_viol, d_viol,
                          f_viol, cvx_viol, checks)};
}

// ------------------------------------------------------------------ 6

Outcome linear_time() {
  ProjectionBenchConfig cfg;
  cfg.sizes = {{10000, 10000}, {100000, 100000}, {1000000, 1000000}};
  cfg.k_rule = {true, 0.1};
  cfg.trials = 5;
  cfg.seed = 1006;
  cfg.variants = {BenchVariant::kDac, BenchVariant::kPlainBisection};
  const auto recs = bench_projection(cfg);
  const double slope = fit_loglog_slope(recs, BenchVariant::kDac);
  const auto dac = median_nanos(recs, BenchVariant::kDac, 1000000, 1000000);
  const auto plain = median_nanos(recs, BenchVariant::kPlainBisection, 1000000, 1000000);
  return {slope >= 0.8 && slope <= 1.3,
          fmt("slope %.3f; at n=1e6 dac %.1f ms, plain bisection %.1f ms (recorded only)", slope, dac / 1e6,
              plain / 1e6)};
}

// ------------------------------------------------------------------ 7

Outcome gradient_check() {
  std::mt19937_64 rng(1007);
  const Dataset ds = synth_gaussians(10, 10, 5, 1.0, 1007);
  const double R = 0.5;
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t k = 1 + rng() % 10;
    auto p = project_top_k(uniform(rng, 10, -0.5, 2.0), uniform(rng, 10, -0.5, 2.0), k);
    DualState s{p.alpha, p.beta};
    for (double& a : s.alpha) a += 1e-3;  // central differences need alpha > 0
    const auto g = dual_gradient(s, ds, R);
    V fd, an;
    const double h = 1e-6;
    for (std::size_t i = 0; i < 20; ++i) {
      DualState plus = s, minus = s;
      double& xp = i < 10 ? plus.alpha[i] : plus.beta[i - 10];
      double& xm = i < 10 ? minus.alpha[i] : minus.beta[i - 10];
      xp += h;
      xm -= h;
      fd.push_back((dual_objective(plus, ds, R) - dual_objective(minus, ds, R)) / (2 * h));
      an.push_back(i < 10 ? g.alpha[i] : g.beta[i - 10]);
    }
    const double err = std::sqrt(dist2(fd, an)) / std::max(1e-12, std::sqrt(std::inner_product(an.begin(), an.end(), an.begin(), 0.0)));
    worst = std::max(worst, err);
  }
  return {worst <= 1e-5, fmt("worst relative error %.2e over 20 states", worst)};
}

// ------------------------------------------------------------------ 8

Outcome solver_optimality() {
  const Dataset ds = synth_gaussians(5, 5, 2, 1.0, 1008);
  TrainConfig cfg;
  cfg.tau = 0.2;
  cfg.R = 1.0;
  cfg.eps = 1e-14;
  const auto model = train_ranker(ds, cfg);
  const double p_model = oracle::primal(model.weights, ds, cfg.tau, cfg.R);
  const double p_ref = oracle::primal_subgradient_min(ds, cfg.tau, cfg.R, 2000000);
  const double gap = std::abs(p_model - p_ref);

  std::mt19937_64 rng(8);
  std::normal_distribution<double> normal;
  std::size_t violations = 0;
  const double m = static_cast<double>(ds.num_positive());
  for (int probe = 0; probe < 100; ++probe) {
    V w(2);
    for (double& v : w) v = normal(rng) * (probe % 2 ? 0.1 : 3.0);
    if (-model.final_dual / m > oracle::primal(w, ds, cfg.tau, cfg.R) + 1e-12) ++violations;
  }
  return {gap <= 1e-4 && violations == 0,
          fmt("primal at w %.8f, subgradient reference %.8f, |diff| %.2e; weak duality violations %zu/100", p_model,
              p_ref, gap, violations)};
}

// ------------------------------------------------------------------ 9

Outcome convergence_shape() {
  std::size_t violations = 0, checks = 0;
  std::string worst;
  const std::vector<std::tuple<std::size_t, std::size_t, std::size_t, double, double>> instances{
      {8, 8, 2, 3.0, 0.05}, {12, 20, 3, 2.5, 0.01}, {20, 15, 4, 2.0, 0.002}};
  int id = 0;
  for (const auto& [m, n, d, sep, R] : instances) {
    const Dataset ds = synth_gaussians(m, n, d, sep, 1009 + id++);
    TrainConfig cfg;
    cfg.tau = 0.1;
    cfg.R = R;
    cfg.eps = 1e-300;
    cfg.max_iters = 20000;
    cfg.record_trace = true;
    const auto model = train_ranker(ds, cfg);
    const double g_star = *std::min_element(model.objective_trace.begin(), model.objective_trace.end());
    auto iters_to = [&](double eps) {
      for (std::size_t t = 0; t < model.objective_trace.size(); ++t) {
        if (model.objective_trace[t] - g_star <= eps) return t;
      }
      return model.objective_trace.size();
    };
    const double scale = std::max(1.0, std::abs(g_star));
    for (double eps = 1e-2 * scale; eps >= 1e-10 * scale; eps /= 2.0) {
      const std::size_t a = iters_to(eps), b = iters_to(eps / 2.0);
      ++checks;
      if (b > 2 * a + 20) {
        ++violations;
        worst = fmt(" (eps %.1e: %zu -> %zu)", eps, a, b);
      }
    }
  }
  return {violations == 0, fmt("%zu of %zu halvings exceed 2*it + 20%s", violations, checks, worst.c_str())};
}

// ------------------------------------------------------------------ 10

Outcome fpr_control() {
  const Dataset all = synth_gaussians(4000, 4000, 10, 6.0, 1010);
  const auto [train, test] = stratified_split(all, 0.5, 1010);
  TrainConfig cfg;
  cfg.tau = 0.05;
  cfg.R = 0.01;
  cfg.eps = 1e-8;
  OOBConfig oob;
  oob.rounds = 31;
  oob.seed = 1010;
  oob.threads = thread_budget();
  const Classifier clf = oob_train(train, cfg, oob);
  const auto pos = score_rows(clf.model, test.positives, FeatureSpace::kScaled);
  const auto neg = score_rows(clf.model, test.negatives, FeatureSpace::kScaled);
  const auto c = confusion(pos, neg, clf.threshold);
  return {c.fpr <= 0.07 && c.tpr >= 0.90,
          fmt("held-out fpr %.4f, tpr %.4f (threshold %.4f +- %.4f)", c.fpr, c.tpr, clf.threshold,
              clf.threshold_std)};
}

// ------------------------------------------------------------------ 11

Outcome metric_exactness() {
  std::size_t failures = 0;
  auto expect = [&](bool ok) { failures += ok ? 0 : 1; };
  auto c = confusion(V{1, 1}, V{-1, -1}, 0.0);
  expect(c.fpr == 0.0 && c.tpr == 1.0);
  c = confusion(V{0}, V{0}, 0.0);
  expect(c.fpr == 0.0 && c.tpr == 0.0);
  c = confusion(V{1, 2}, V{3, 4}, -5.0);
  expect(c.fpr == 1.0 && c.tpr == 1.0);
  expect(np_score(0.1, 0.8, 0.05) == 1.2);
  expect(np_score(0.03, 0.75, 0.05) == 0.25);
  expect(np_score(0.05, 0.6, 0.05) == 1.0 - 0.6);
  expect(std::abs(np_score(0.053, 0.582, 0.05) - 0.478) <= 1e-15);
  expect(ranking_at_tau(V{2, 2}, V{1, 0, -1}, 0.0) == 1.0);
  expect(ranking_at_tau(V{0.5}, V{1, 0}, 0.5) == 1.0);
  expect(ranking_at_tau(V{0.0, 3.0}, V{1, 0}, 0.5) == 0.5);
  const auto sep = relaxation_check(V{5, 6}, V{0, 1, 2}, 0.0);
  expect(sep.r0 == 0.0 && sep.r1 == 0.0);
  const auto flat = relaxation_check(V{1, 1, 1}, V{1, 1}, 0.2);
  expect(flat.r0 == 1.0 && flat.r1 == 1.0);
  return {failures == 0, fmt("%zu of 13 hand-computed values differ", failures)};
}

// ------------------------------------------------------------------ 12

Outcome relaxation_ordering() {
  std::mt19937_64 rng(1012);
  std::normal_distribution<double> normal;
  std::size_t violations = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t m = 1 + rng() % 50, n = 1 + rng() % 50;
    const double spread = std::pow(10.0, normal(rng));
    V pos(m), neg(n);
    for (double& v : pos) v = spread * normal(rng) + normal(rng);
    for (double& v : neg) v = spread * normal(rng);
    if (trial % 10 == 0) std::fill(neg.begin(), neg.end(), pos[0]);
    const double tau = static_cast<double>(rng() % 100) / 100.0;
    violations += relaxation_check(pos, neg, tau).ordered() ? 0 : 1;
  }
  return {violations == 0, fmt("%zu violations in 1000 configurations", violations)};
}

// ------------------------------------------------------------------ 13

Outcome spambase_reproduction() {
  Outcome out;
  out.gating = false;
  const char* path = std::getenv("TAU_FPL_SPAMBASE");
  if (path == nullptr || *path == '\0') {
    out.skipped = true;
    out.detail = "TAU_FPL_SPAMBASE not set; no spambase file available";
    return out;
  }
  const Dataset ds = normalize(read_libsvm_file(path)).first;
  TrainConfig cfg;
  cfg.tau = 0.1;
  double total = 0.0;
  for (std::uint64_t round = 0; round < 10; ++round) {
    const auto [train, test] = stratified_split(ds, 2.0 / 3.0, 2000 + round);
    const auto grid = grid_search(default_reg_grid(), GridObjective::kRank, [&](double R) {
      TrainConfig c = cfg;
      c.R = R;
      return cross_validate(train, c, 5, GridObjective::kRank, round, thread_budget());
    });
    TrainConfig best = cfg;
    best.R = grid.best_R;
    const auto model = train_ranker(train, best);
    total += ranking_at_tau(score_rows(model, test.positives, FeatureSpace::kScaled),
                            score_rows(model, test.negatives, FeatureSpace::kScaled), cfg.tau);
  }
  const double mean = total / 10.0;
  out.pass = std::abs(mean - 0.929) <= 0.05;
  out.detail = fmt("mean ranking-at-tau %.4f (reference 0.929)", mean);
  return out;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "projection matches KKT enumeration oracle", oracle_equivalence},
      {2, "projection feasibility and certificates", feasibility_certificates},
      {3, "zero-case test matches oracle", zero_case_iff},
      {4, "projection idempotent and non-expansive", idempotent_nonexpansive},
      {5, "dual function monotonicity and convexity", monotonicity_suite},
      {6, "projection time grows linearly", linear_time},
      {7, "dual gradient matches finite differences", gradient_check},
      {8, "solver reaches primal optimum; weak duality", solver_optimality},
      {9, "accelerated convergence shape", convergence_shape},
      {10, "end-to-end FPR control on held-out data", fpr_control},
      {11, "metric values match hand computation", metric_exactness},
      {12, "0-1 loss bounded by surrogate relaxation", relaxation_ordering},
      {13, "spambase ranking reproduction (non-gating)", spambase_reproduction},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = Clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
      o.gating = c.id != 13;
    }
    const char* tag = o.skipped ? "SKIP" : o.pass ? "PASS" : "FAIL";
    std::printf("[%s] %2d %s: %s [%.1f s]\n", tag, c.id, c.name, o.detail.c_str(), seconds_since(t0));
    std::fflush(stdout);
    if (!o.pass && !o.skipped && o.gating) ++failed;
  }
  std::printf("%d gating criteria failed\n", failed);
  return failed == 0 ? 0 : 1;
}
