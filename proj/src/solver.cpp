#include "taufpl/solver.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

#include "taufpl/error.hpp"
#include "taufpl/projection.hpp"
#include "taufpl/selection.hpp"

namespace taufpl {

std::size_t top_k_from_tau(double tau, std::size_t n) {
  if (!(tau >= 0.0 && tau < 1.0)) throw std::invalid_argument("tau must lie in [0, 1)");
  if (n == 0) throw std::invalid_argument("no negative instances");
  const auto k = static_cast<std::size_t>(std::floor(tau * static_cast<double>(n) + 1e-9)) + 1;
  return std::min(k, n);
}

namespace {

void check_dims(const DualState& s, const Dataset& ds) {
  if (s.alpha.size() != ds.num_positive() || s.beta.size() != ds.num_negative()) {
    throw std::invalid_argument("dual state does not match dataset shape");
  }
}

// r = X+^T a - X-^T b
std::vector<double> residual(std::span<const double> alpha, std::span<const double> beta, const Dataset& ds) {
  std::vector<double> r(ds.dim(), 0.0);
  ds.positives.accumulate_transposed(alpha, r);
  std::vector<double> neg(beta.size());
  std::transform(beta.begin(), beta.end(), neg.begin(), [](double b) { return -b; });
  ds.negatives.accumulate_transposed(neg, r);
  return r;
}

double squared_norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return s;
}

double objective_from_residual(std::span<const double> r, std::span<const double> alpha, double mR) {
  double conj = 0.0;
  for (double a : alpha) conj += a * a / 4.0 - a;
  return squared_norm(r) / (2.0 * mR) + conj;
}

// Packed iterate: alpha (m) followed by beta (n).
struct Point {
  std::vector<double> x;
  std::vector<double> r;
  double g = 0.0;
};

class DualProblem {
 public:
  DualProblem(const Dataset& ds, double R, std::size_t k, double proj_eps)
      : ds_(ds), m_(ds.num_positive()), n_(ds.num_negative()), k_(k),
        mR_(static_cast<double>(ds.num_positive()) * R) {
    proj_.eps = proj_eps;
  }

  std::size_t size() const { return m_ + n_; }

  Point evaluate(std::vector<double> x) const {
    Point p;
    p.x = std::move(x);
    p.r = residual(alpha(p.x), beta(p.x), ds_);
    p.g = objective_from_residual(p.r, alpha(p.x), mR_);
    return p;
  }

  std::vector<double> gradient(const Point& p) const {
    std::vector<double> grad(size());
    std::span<double> ga(grad.data(), m_);
    std::span<double> gb(grad.data() + m_, n_);
    ds_.positives.multiply(p.r, ga);
    ds_.negatives.multiply(p.r, gb);
    for (std::size_t i = 0; i < m_; ++i) ga[i] = ga[i] / mR_ + p.x[i] / 2.0 - 1.0;
    for (std::size_t j = 0; j < n_; ++j) gb[j] = -gb[j] / mR_;
    return grad;
  }

  std::vector<double> project(const std::vector<double>& x) const {
    auto res = project_top_k(std::span<const double>(x.data(), m_), std::span<const double>(x.data() + m_, n_),
                             k_, proj_);
    std::vector<double> out(size());
    std::copy(res.alpha.begin(), res.alpha.end(), out.begin());
    std::copy(res.beta.begin(), res.beta.end(), out.begin() + static_cast<std::ptrdiff_t>(m_));
    return out;
  }

  double lipschitz_estimate() const {
    // Power iteration on A^T A with A = [X+; -X-]; the sign does not change A^T A.
    const std::size_t d = ds_.dim();
    std::vector<double> v(d, 1.0 / std::sqrt(static_cast<double>(d)));
    std::vector<double> up(m_), un(n_);
    double sigma2 = 0.0;
    for (int it = 0; it < 50; ++it) {
      ds_.positives.multiply(v, up);
      ds_.negatives.multiply(v, un);
      std::vector<double> w(d, 0.0);
      ds_.positives.accumulate_transposed(up, w);
      ds_.negatives.accumulate_transposed(un, w);
      const double norm = std::sqrt(squared_norm(w));
      if (norm == 0.0) break;
      sigma2 = norm;
      for (std::size_t j = 0; j < d; ++j) v[j] = w[j] / norm;
    }
    return 1.05 * (sigma2 / mR_ + 0.5);
  }

  std::span<const double> alpha(const std::vector<double>& x) const { return {x.data(), m_}; }
  std::span<const double> beta(const std::vector<double>& x) const { return {x.data() + m_, n_}; }

 private:
  const Dataset& ds_;
  std::size_t m_, n_, k_;
  double mR_;
  ProjectionOptions proj_;
};

}  // namespace

double dual_objective(const DualState& state, const Dataset& ds, double R) {
  check_dims(state, ds);
  for (double a : state.alpha) {
    if (a < 0.0) throw DomainError("dual objective is +inf for negative alpha");
  }
  const auto r = residual(state.alpha, state.beta, ds);
  return objective_from_residual(r, state.alpha, static_cast<double>(ds.num_positive()) * R);
}

DualGradient dual_gradient(const DualState& state, const Dataset& ds, double R) {
  check_dims(state, ds);
  const double mR = static_cast<double>(ds.num_positive()) * R;
  const auto r = residual(state.alpha, state.beta, ds);
  DualGradient g;
  g.alpha.resize(ds.num_positive());
  g.beta.resize(ds.num_negative());
  ds.positives.multiply(r, g.alpha);
  ds.negatives.multiply(r, g.beta);
  for (std::size_t i = 0; i < g.alpha.size(); ++i) g.alpha[i] = g.alpha[i] / mR + state.alpha[i] / 2.0 - 1.0;
  for (double& v : g.beta) v = -v / mR;
  return g;
}

std::vector<double> weights_from_dual(const DualState& state, const Dataset& ds, double R) {
  check_dims(state, ds);
  auto w = residual(state.alpha, state.beta, ds);
  const double mR = static_cast<double>(ds.num_positive()) * R;
  for (double& v : w) v /= mR;
  return w;
}

double primal_objective(std::span<const double> w, const Dataset& ds, double tau, double R) {
  const std::size_t m = ds.num_positive();
  const std::size_t n = ds.num_negative();
  if (m == 0 || n == 0) throw DataError("primal objective needs both classes");
  const std::size_t k = top_k_from_tau(tau, n);
  std::vector<double> neg(n), pos(m);
  ds.negatives.multiply(w, neg);
  ds.positives.multiply(w, pos);
  const double pivot = sum_top_k(neg, k) / static_cast<double>(k);
  double loss = 0.0;
  for (double s : pos) {
    const double u = std::max(1.0 - (s - pivot), 0.0);
    loss += u * u;
  }
  return loss / static_cast<double>(m) + 0.5 * R * squared_norm(w);
}

RankerModel train_ranker(const Dataset& ds, const TrainConfig& cfg) {
  const std::size_t m = ds.num_positive();
  const std::size_t n = ds.num_negative();
  if (m == 0 || n == 0) throw DataError("training needs at least one positive and one negative instance");
  if (!(cfg.R > 0.0)) throw std::invalid_argument("R must be positive");
  if (!(cfg.eps > 0.0)) throw std::invalid_argument("eps must be positive");
  if (cfg.max_iters == 0) throw std::invalid_argument("max_iters must be positive");
  if (ds.max_row_norm() > 1.0 + 1e-9) throw DataError("dataset is not normalized (row norm > 1)");
  const std::size_t k = top_k_from_tau(cfg.tau, n);

  DualProblem problem(ds, cfg.R, k, cfg.projection_eps);
  std::vector<double> x0(m + n, 0.0);
  if (cfg.random_init) {
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (double& v : x0) v = unif(rng);
    x0 = problem.project(x0);
  }

  double L = cfg.step_rule == StepRule::kPowerIteration ? problem.lipschitz_estimate() : 1.0;
  Point x = problem.evaluate(std::move(x0));
  Point y = x;
  double t = 1.0;
  bool momentum = false;

  RankerModel model;
  model.tau = cfg.tau;
  model.R = cfg.R;
  if (cfg.record_trace) model.objective_trace.push_back(x.g);

  std::size_t iter = 0;
  while (iter < cfg.max_iters) {
    const auto grad = problem.gradient(y);
    Point z;
    while (true) {
      std::vector<double> step(y.x.size());
      for (std::size_t i = 0; i < step.size(); ++i) step[i] = y.x[i] - grad[i] / L;
      z = problem.evaluate(problem.project(step));
      double lin = 0.0, dist2 = 0.0;
      for (std::size_t i = 0; i < step.size(); ++i) {
        const double d = z.x[i] - y.x[i];
        lin += grad[i] * d;
        dist2 += d * d;
      }
      const double bound = y.g + lin + 0.5 * L * dist2;
      if (z.g <= bound + 1e-12 * (1.0 + std::abs(y.g)) || L > 1e300) break;
      L *= 2.0;
    }

    if (z.g > x.g && momentum) {
      // Adaptive restart: drop momentum and take a plain projected step from x.
      y = x;
      t = 1.0;
      momentum = false;
      continue;
    }
    ++iter;
    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    const double beta_m = (t - 1.0) / t_next;
    std::vector<double> yx(z.x.size());
    for (std::size_t i = 0; i < yx.size(); ++i) yx[i] = z.x[i] + beta_m * (z.x[i] - x.x[i]);
    const double prev_g = x.g;
    x = std::move(z);
    t = t_next;
    if (beta_m > 0.0) {
      // The extrapolated point can leave G_k; the next step projects anyway.
      y = problem.evaluate(std::move(yx));
      momentum = true;
    } else {
      y = x;
      momentum = false;
    }
    if (cfg.record_trace) model.objective_trace.push_back(x.g);
    if (std::abs(x.g - prev_g) <= cfg.eps) {
      model.converged = true;
      break;
    }
  }

  model.iterations = iter;
  model.final_dual = x.g;
  model.dual.alpha.assign(x.x.begin(), x.x.begin() + static_cast<std::ptrdiff_t>(m));
  model.dual.beta.assign(x.x.begin() + static_cast<std::ptrdiff_t>(m), x.x.end());
  model.weights = x.r;
  const double mR = static_cast<double>(m) * cfg.R;
  for (double& v : model.weights) v /= mR;
  return model;
}

double score(const RankerModel& model, std::span<const double> x, FeatureSpace space) {
  if (x.size() != model.weights.size()) throw std::invalid_argument("score: dimension mismatch");
  double s = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) s += model.weights[j] * x[j];
  return space == FeatureSpace::kRaw ? s * model.scale.factor : s;
}

std::vector<double> score_rows(const RankerModel& model, const FeatureMatrix& x, FeatureSpace space) {
  if (x.cols() != model.weights.size()) throw std::invalid_argument("score: dimension mismatch");
  std::vector<double> out(x.rows());
  x.multiply(model.weights, out);
  if (space == FeatureSpace::kRaw) {
    for (double& v : out) v *= model.scale.factor;
  }
  return out;
}

}  // namespace taufpl
