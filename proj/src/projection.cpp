#include "taufpl/projection.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "breakpoint_cache.hpp"
#include "taufpl/error.hpp"
#include "taufpl/selection.hpp"

namespace taufpl {

using detail::AlphaSide;
using detail::BetaSide;
using detail::kInf;

namespace {

void check_finite(std::span<const double> v, const char* name) {
  for (double x : v) {
    if (!std::isfinite(x)) throw std::invalid_argument(std::string(name) + " has a non-finite entry");
  }
}

void check_k(std::size_t k, std::size_t n) {
  if (k < 1 || k > n) throw std::invalid_argument("k must lie in [1, n]");
}

}  // namespace

bool zero_case(std::span<const double> alpha0, std::span<const double> beta0, std::size_t k) {
  check_k(k, beta0.size());
  if (alpha0.empty()) throw std::invalid_argument("alpha0 is empty");
  const double amax = *std::max_element(alpha0.begin(), alpha0.end());
  return static_cast<double>(k) * amax + sum_top_k(beta0, k) <= 0.0;
}

double eval_C(double lambda, std::span<const double> alpha0) {
  double s = 0.0;
  for (double a : alpha0) {
    if (a > lambda) s += a - lambda;
  }
  return s;
}

double eval_mu(double C, std::span<const double> beta0, std::size_t k) {
  check_k(k, beta0.size());
  BetaSide side(beta0, k);
  return side.mu(C);
}

double eval_delta(double C, std::span<const double> beta0, std::size_t k) {
  return eval_mu(C, beta0, k) + C / static_cast<double>(k);
}

double eval_f(double lambda, std::span<const double> alpha0, std::span<const double> beta0,
              std::size_t k) {
  check_k(k, beta0.size());
  const double C = eval_C(lambda, alpha0);
  if (!(C > 0.0)) throw DomainError("f(lambda) requires C(lambda) > 0");
  BetaSide side(beta0, k);
  const double mu = side.mu(C);
  return static_cast<double>(k) * lambda + side.tail(C, mu);
}

double KktResiduals::max() const {
  return std::max({c_equation, mu_equation, coupling_equation});
}

KktResiduals kkt_residuals(std::span<const double> alpha0, std::span<const double> beta0,
                           std::size_t k, double lambda, double mu, double C) {
  const double kd = static_cast<double>(k);
  KktResiduals r;
  r.c_equation = std::abs(C - eval_C(lambda, alpha0));
  double capped = 0.0, over = 0.0;
  for (double b : beta0) {
    capped += std::min(std::max(b - mu, 0.0), C / kd);
    over += std::max(b - mu - C / kd, 0.0);
  }
  r.mu_equation = C > 0.0 ? std::abs(C - capped) : 0.0;
  r.coupling_equation = std::abs(lambda + mu + over / kd);
  return r;
}

ProjectionResult project_top_k(std::span<const double> alpha0, std::span<const double> beta0,
                               std::size_t k, const ProjectionOptions& opts) {
  const std::size_t m = alpha0.size();
  const std::size_t n = beta0.size();
  if (m == 0 || n == 0) throw std::invalid_argument("projection needs nonempty alpha0 and beta0");
  check_k(k, n);
  check_finite(alpha0, "alpha0");
  check_finite(beta0, "beta0");
  if (!(opts.eps > 0.0)) throw std::invalid_argument("eps must be positive");

  const double kd = static_cast<double>(k);
  const double amax = *std::max_element(alpha0.begin(), alpha0.end());
  BetaSide beta_side(beta0, k);

  ProjectionResult res;
  if (kd * amax + beta_side.top_k_sum() <= 0.0) {
    res.alpha.assign(m, 0.0);
    res.beta.assign(n, 0.0);
    res.zero_case = true;
    res.C = 0.0;
    res.mu = beta_side.kth();
    res.lambda = -beta_side.top_k_sum() / kd;
    return res;
  }

  AlphaSide alpha_side(alpha0);
  double lo = -beta_side.max();
  double hi = amax;
  double mu_lo = -kInf, mu_hi = kInf, delta_lo = -kInf, delta_hi = kInf;
  if (opts.use_caches) alpha_side.shrink(lo, hi);

  auto f_at = [&](double lambda, double& C, double& mu) {
    C = alpha_side.C(lambda);
    mu = beta_side.mu(C);
    return kd * lambda + beta_side.tail(C, mu);
  };

  double f_lo = std::nan(""), f_hi = std::nan("");
  double lambda = 0.5 * (lo + hi);
  double lambda_star = lambda;
  constexpr std::size_t kMaxIterations = 400;
  for (std::size_t it = 1;; ++it) {
    res.iterations = it;
    double C = 0.0, mu = 0.0;
    const double f = f_at(lambda, C, mu);
    if (f == 0.0) {
      lambda_star = lambda;
      break;
    }
    const double delta = mu + C / kd;
    if (f > 0.0) {
      // Root lies left: C* > C, so mu* <= mu and delta* >= delta.
      hi = lambda;
      f_hi = f;
      mu_hi = std::min(mu_hi, mu);
      delta_lo = std::max(delta_lo, delta);
    } else {
      lo = lambda;
      f_lo = f;
      mu_lo = std::max(mu_lo, mu);
      delta_hi = std::min(delta_hi, delta);
    }

    if (opts.use_caches) {
      alpha_side.shrink(lo, hi);
      beta_side.shrink(mu_lo, mu_hi, delta_lo, delta_hi);
      if (opts.record_cache_sizes) res.cache_sizes.push_back(alpha_side.cached() + beta_side.cached());
      if (alpha_side.cached() == 0 && beta_side.cached() == 0) {
        // f is linear on [lo, hi]; solve it exactly.
        // An endpoint never evaluated may sit where C = 0; use the midpoint instead.
        double c_tmp, mu_tmp;
        double x0 = lo, x1 = hi, f0 = f_lo, f1 = f_hi;
        if (std::isnan(f0)) {
          x0 = 0.5 * (lo + hi);
          f0 = f_at(x0, c_tmp, mu_tmp);
        } else if (std::isnan(f1)) {
          x1 = 0.5 * (lo + hi);
          f1 = f_at(x1, c_tmp, mu_tmp);
        }
        lambda_star = f1 > f0 && x1 > x0 ? std::clamp(x0 - f0 * (x1 - x0) / (f1 - f0), lo, hi) : 0.5 * (lo + hi);
        break;
      }
    } else if (opts.record_cache_sizes) {
      res.cache_sizes.push_back(m + n);
    }

    double next = 0.5 * (lo + hi);
    if (opts.secant && (it % 2 == 1) && !std::isnan(f_lo) && !std::isnan(f_hi)) {
      const double s = lo - f_lo * (hi - lo) / (f_hi - f_lo);
      const double guard = 0.05 * (hi - lo);
      if (s > lo + guard && s < hi - guard) next = s;
    }
    if (hi - lo <= opts.eps || next <= lo || next >= hi || it >= kMaxIterations) {
      lambda_star = 0.5 * (lo + hi);
      if (!std::isnan(f_lo) && !std::isnan(f_hi)) {
        // f is piecewise linear; Illinois steps finish the root to rounding
        // error even when it sits on a breakpoint.
        double fl = f_lo, fh = f_hi;
        int side = 0;
        for (int polish = 0; polish < 100; ++polish) {
          const double s = (lo * fh - hi * fl) / (fh - fl);
          if (!(s > lo && s < hi)) break;
          double c_tmp, mu_tmp;
          const double fs = f_at(s, c_tmp, mu_tmp);
          lambda_star = s;
          if (fs == 0.0) break;
          if (fs > 0.0) {
            hi = s;
            fh = fs;
            if (side == 1) fl *= 0.5;
            side = 1;
          } else {
            lo = s;
            fl = fs;
            if (side == -1) fh *= 0.5;
            side = -1;
          }
        }
      }
      break;
    }
    lambda = next;
  }

  const double C_star = eval_C(lambda_star, alpha0);
  res.lambda = lambda_star;
  res.C = C_star;
  res.alpha.resize(m);
  for (std::size_t i = 0; i < m; ++i) res.alpha[i] = std::max(alpha0[i] - lambda_star, 0.0);
  if (!(C_star > 0.0)) {
    res.beta.assign(n, 0.0);
    res.mu = beta_side.kth();
    return res;
  }
  res.mu = beta_side.mu(C_star);
  const double cap = C_star / kd;
  res.beta.resize(n);
  double beta_sum = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    res.beta[j] = std::min(std::max(beta0[j] - res.mu, 0.0), cap);
    beta_sum += res.beta[j];
  }
  const double alpha_sum = std::accumulate(res.alpha.begin(), res.alpha.end(), 0.0);
  if (beta_sum > 0.0) {
    const double scale = alpha_sum / beta_sum;
    for (double& b : res.beta) b *= scale;
  }
  return res;
}

ProjectionResult project_top_k(const ProjectionInput& input) {
  ProjectionOptions opts;
  opts.eps = input.eps;
  return project_top_k(input.alpha0, input.beta0, input.k, opts);
}

}  // namespace taufpl
