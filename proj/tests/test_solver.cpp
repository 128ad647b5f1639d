#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "taufpl/error.hpp"
#include "taufpl/projection.hpp"
#include "taufpl/solver.hpp"

using namespace taufpl;

namespace {

DualState random_feasible(std::mt19937_64& rng, std::size_t m, std::size_t n, std::size_t k) {
  std::uniform_real_distribution<double> u(-0.5, 2.0);
  std::vector<double> a(m), b(n);
  for (double& v : a) v = u(rng);
  for (double& v : b) v = u(rng);
  auto p = project_top_k(a, b, k);
  return {p.alpha, p.beta};
}

}  // namespace

TEST_CASE("top k from tau") {
  CHECK(top_k_from_tau(0.0, 10) == 1);
  CHECK(top_k_from_tau(0.05, 100) == 6);
  CHECK(top_k_from_tau(0.29, 100) == 30);
  CHECK(top_k_from_tau(0.1, 10) == 2);
  CHECK(top_k_from_tau(0.99, 10) == 10);
  CHECK_THROWS(top_k_from_tau(1.0, 10));
  CHECK_THROWS(top_k_from_tau(-0.1, 10));
}

TEST_CASE("gradient matches finite differences") {
  std::mt19937_64 rng(5);
  const Dataset ds = synth_gaussians(10, 10, 5, 1.0, 5);
  for (int trial = 0; trial < 10; ++trial) {
    DualState s = random_feasible(rng, 10, 10, 3);
    for (double& a : s.alpha) a += 0.01;  // keep away from the alpha >= 0 boundary
    const auto g = dual_gradient(s, ds, 0.7);
    const double h = 1e-6;
    for (std::size_t i = 0; i < 10; ++i) {
      DualState p = s, q = s;
      p.alpha[i] += h;
      q.alpha[i] -= h;
      const double fd = (dual_objective(p, ds, 0.7) - dual_objective(q, ds, 0.7)) / (2 * h);
      CHECK(fd == doctest::Approx(g.alpha[i]).epsilon(1e-5));
      p = s;
      q = s;
      p.beta[i] += h;
      q.beta[i] -= h;
      const double fb = (dual_objective(p, ds, 0.7) - dual_objective(q, ds, 0.7)) / (2 * h);
      CHECK(fb == doctest::Approx(g.beta[i]).epsilon(1e-5).scale(1e-3));
    }
  }
}

TEST_CASE("dual objective domain") {
  const Dataset ds = synth_gaussians(2, 2, 2, 1.0, 1);
  CHECK_THROWS_AS(dual_objective({{-0.1, 0.0}, {0.0, 0.0}}, ds, 1.0), DomainError);
  CHECK(dual_objective({{0.0, 0.0}, {0.0, 0.0}}, ds, 1.0) == 0.0);
  CHECK_THROWS(dual_objective({{0.0}, {0.0, 0.0}}, ds, 1.0));
}

TEST_CASE("training reaches the primal optimum on a tiny instance") {
  const Dataset ds = synth_gaussians(5, 5, 2, 1.5, 21);
  TrainConfig cfg;
  cfg.tau = 0.2;
  cfg.R = 1.0;
  cfg.eps = 1e-13;
  const auto model = train_ranker(ds, cfg);
  CHECK(model.converged);
  const double p_model = oracle::primal(model.weights, ds, 0.2, 1.0);
  const double p_ref = oracle::primal_subgradient_min(ds, 0.2, 1.0, 400000);
  CHECK(p_model == doctest::Approx(p_ref).epsilon(1e-4).scale(1.0));
  CHECK(primal_objective(model.weights, ds, 0.2, 1.0) == doctest::Approx(p_model).epsilon(1e-12));
  // Strong duality: -g / m equals the primal optimum.
  CHECK(-model.final_dual / 5.0 == doctest::Approx(p_model).epsilon(1e-5));
}

TEST_CASE("weak duality on random feasible points") {
  std::mt19937_64 rng(6);
  const Dataset ds = synth_gaussians(8, 12, 3, 1.0, 6);
  const std::size_t k = top_k_from_tau(0.2, 12);
  std::normal_distribution<double> normal;
  for (int trial = 0; trial < 50; ++trial) {
    const DualState s = random_feasible(rng, 8, 12, k);
    std::vector<double> w(3);
    for (double& v : w) v = normal(rng);
    CHECK(-dual_objective(s, ds, 0.5) / 8.0 <= primal_objective(w, ds, 0.2, 0.5) + 1e-12);
  }
}

TEST_CASE("weights from the final dual") {
  const Dataset ds = synth_gaussians(20, 30, 4, 2.0, 8);
  TrainConfig cfg;
  cfg.R = 0.1;
  const auto model = train_ranker(ds, cfg);
  const auto w = weights_from_dual(model.dual, ds, 0.1);
  CHECK(oracle::max_abs_diff(w, model.weights) <= 1e-12);
  const std::size_t k = top_k_from_tau(cfg.tau, 30);
  double sa = 0, sb = 0;
  for (double a : model.dual.alpha) sa += a;
  for (double b : model.dual.beta) {
    sb += b;
    CHECK(b <= sa / static_cast<double>(k) + 1e-8);
  }
  CHECK(sa == doctest::Approx(sb));
}

TEST_CASE("step rules and starts reach the same objective") {
  const Dataset ds = synth_gaussians(30, 40, 3, 1.0, 9);
  TrainConfig cfg;
  cfg.R = 0.05;
  cfg.eps = 1e-12;
  const auto a = train_ranker(ds, cfg);
  cfg.step_rule = StepRule::kPowerIteration;
  const auto b = train_ranker(ds, cfg);
  cfg.random_init = true;
  cfg.seed = 3;
  const auto c = train_ranker(ds, cfg);
  CHECK(a.final_dual == doctest::Approx(b.final_dual).epsilon(1e-7));
  CHECK(a.final_dual == doctest::Approx(c.final_dual).epsilon(1e-7));
}

TEST_CASE("trace is nonincreasing after restarts and deterministic") {
  const Dataset ds = synth_gaussians(25, 25, 3, 1.0, 10);
  TrainConfig cfg;
  cfg.record_trace = true;
  const auto a = train_ranker(ds, cfg);
  const auto b = train_ranker(ds, cfg);
  CHECK(a.objective_trace == b.objective_trace);
  CHECK(a.objective_trace.size() == a.iterations + 1);
  for (std::size_t i = 1; i < a.objective_trace.size(); ++i) {
    CHECK(a.objective_trace[i] <= a.objective_trace[i - 1] + 1e-12);
  }
}

TEST_CASE("iteration cap and input checks") {
  const Dataset ds = synth_gaussians(20, 20, 3, 1.0, 11);
  TrainConfig cfg;
  cfg.max_iters = 3;
  cfg.eps = 1e-15;
  const auto m = train_ranker(ds, cfg);
  CHECK(m.iterations == 3);
  CHECK_FALSE(m.converged);

  cfg = TrainConfig{};
  cfg.R = 0.0;
  CHECK_THROWS(train_ranker(ds, cfg));
  Dataset big{ds.positives.scaled(3.0), ds.negatives.scaled(3.0)};
  CHECK_THROWS_AS(train_ranker(big, TrainConfig{}), DataError);
  Dataset empty{FeatureMatrix::dense(0, 3, {}), ds.negatives};
  CHECK_THROWS_AS(train_ranker(empty, TrainConfig{}), DataError);
}

TEST_CASE("scoring applies the scale once") {
  RankerModel m;
  m.weights = {1.0, -1.0};
  m.scale.factor = 0.5;
  const std::vector<double> x{4.0, 2.0};
  CHECK(score(m, x, FeatureSpace::kRaw) == 1.0);
  CHECK(score(m, x, FeatureSpace::kScaled) == 2.0);
  const auto fm = FeatureMatrix::dense(1, 2, {4.0, 2.0});
  CHECK(score_rows(m, fm)[0] == 1.0);
}
