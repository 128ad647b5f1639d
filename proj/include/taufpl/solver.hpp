#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "taufpl/data.hpp"

namespace taufpl {

enum class StepRule {
  /// Start from L = 1 and double until the sufficient-decrease test holds.
  kBacktracking,
  /// Seed L from a power-iteration estimate of the largest singular value,
  /// still backtracking if the test fails.
  kPowerIteration,
};

struct TrainConfig {
  double tau = 0.05;             // FPR tolerance in [0, 1)
  double R = 1.0;                // L2 regularization, > 0
  double eps = 1e-8;             // stop when |g_t - g_{t-1}| <= eps
  std::size_t max_iters = 10000;
  std::uint64_t seed = 0;
  bool random_init = false;      // default start is alpha = beta = 0
  StepRule step_rule = StepRule::kBacktracking;
  double projection_eps = 1e-10;
  bool record_trace = false;     // keep g(alpha_t, beta_t) for every iterate
};

/// Rank of the pivotal negative, floor(tau * n) + 1. The product is nudged by
/// 1e-9 before flooring so that e.g. 0.29 * 100 maps to 29.
std::size_t top_k_from_tau(double tau, std::size_t n);

struct DualState {
  std::vector<double> alpha;  // m, >= 0
  std::vector<double> beta;   // n, >= 0
};

struct DualGradient {
  std::vector<double> alpha;
  std::vector<double> beta;
};

struct RankerModel {
  std::vector<double> weights;
  double tau = 0.0;
  double R = 1.0;
  std::size_t iterations = 0;
  double final_dual = 0.0;
  bool converged = false;
  ScaleInfo scale;
  DualState dual;                        // final iterate
  std::vector<double> objective_trace;   // when TrainConfig::record_trace
};

/// g(a, b) = ||a^T X+ - b^T X-||^2 / (2 m R) + sum_i (a_i^2 / 4 - a_i),
/// the dual of the truncated-quadratic ranking objective.
/// Throws DomainError if some alpha_i < 0.
double dual_objective(const DualState& state, const Dataset& ds, double R);

/// Gradient of g. With r = X+^T a - X-^T b:
///   d/da = X+ r / (m R) + a / 2 - 1,   d/db = -X- r / (m R).
DualGradient dual_gradient(const DualState& state, const Dataset& ds, double R);

/// w = (a^T X+ - b^T X-)^T / (m R).
std::vector<double> weights_from_dual(const DualState& state, const Dataset& ds, double R);

/// (1/m) sum_i l(w.x_i+ - mean of the k largest w.x-) + (R/2) ||w||^2 with
/// l(u) = [1 - u]_+^2 and k = floor(tau n) + 1.
double primal_objective(std::span<const double> w, const Dataset& ds, double tau, double R);

/// Nesterov-accelerated projected gradient on g over the top-k simplex, with
/// backtracking line search and adaptive momentum restart. Requires a
/// normalized dataset (every row norm <= 1).
RankerModel train_ranker(const Dataset& ds, const TrainConfig& cfg);

enum class FeatureSpace {
  kRaw,     // features as read from disk; the model's scale factor is applied
  kScaled,  // caller already multiplied by the scale factor
};

/// w^T (scale * x), applying the scale exactly once.
double score(const RankerModel& model, std::span<const double> x, FeatureSpace space = FeatureSpace::kRaw);
std::vector<double> score_rows(const RankerModel& model, const FeatureMatrix& x,
                               FeatureSpace space = FeatureSpace::kRaw);

}  // namespace taufpl
