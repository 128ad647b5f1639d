#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <stdexcept>

#include "breakpoint_cache.hpp"
#include "taufpl/projection.hpp"

namespace taufpl {

using detail::BetaSide;
using detail::kInf;

namespace {

void validate(std::span<const double> beta0, std::size_t k) {
  if (beta0.empty()) throw std::invalid_argument("beta0 is empty");
  if (k < 1 || k > beta0.size()) throw std::invalid_argument("k must lie in [1, n]");
  for (double b : beta0) {
    if (!std::isfinite(b)) throw std::invalid_argument("beta0 has a non-finite entry");
  }
}

void recover(CappedSimplexResult& res, std::span<const double> beta0, std::size_t k) {
  const double cap = res.C / static_cast<double>(k);
  res.beta.resize(beta0.size());
  for (std::size_t j = 0; j < beta0.size(); ++j) {
    res.beta[j] = std::min(std::max(beta0[j] - res.mu, 0.0), cap);
  }
}

}  // namespace

CappedSimplexResult project_capped_simplex(std::span<const double> beta0, std::size_t k,
                                           const ProjectionOptions& opts) {
  validate(beta0, k);
  if (!(opts.eps > 0.0)) throw std::invalid_argument("eps must be positive");
  const double kd = static_cast<double>(k);
  BetaSide side(beta0, k);

  CappedSimplexResult res;
  if (side.top_k_sum() <= 0.0) {
    res.beta.assign(beta0.size(), 0.0);
    res.mu = side.kth();
    return res;
  }

  // T(C) = k mu(C) + sum_j [b_j - delta(C)]_+ is strictly decreasing with
  // T(0+) = sum of the k largest entries > 0.
  auto T = [&](double C, double& mu) {
    mu = side.mu(C);
    return side.tail(C, mu);
  };

  double positive_mass = 0.0;
  for (double b : beta0) positive_mass += std::max(b, 0.0);
  double hi = std::max(positive_mass, 1e-300);
  double mu_tmp;
  for (int guard = 0; T(hi, mu_tmp) > 0.0 && guard < 2100; ++guard) hi *= 2.0;

  double lo = 0.0;
  double t_lo = side.top_k_sum();
  double t_hi = std::nan("");
  double mu_lo = -kInf, mu_hi = kInf, delta_lo = -kInf, delta_hi = kInf;
  double C_star = 0.5 * (lo + hi);
  double C = C_star;
  for (std::size_t it = 1;; ++it) {
    res.iterations = it;
    double mu;
    const double t = T(C, mu);
    if (t == 0.0) {
      C_star = C;
      break;
    }
    const double delta = mu + C / kd;
    if (t > 0.0) {
      lo = C;
      t_lo = t;
      mu_hi = std::min(mu_hi, mu);
      delta_lo = std::max(delta_lo, delta);
    } else {
      hi = C;
      t_hi = t;
      mu_lo = std::max(mu_lo, mu);
      delta_hi = std::min(delta_hi, delta);
    }
    if (opts.use_caches) {
      side.shrink(mu_lo, mu_hi, delta_lo, delta_hi);
      if (side.cached() == 0) {
        if (std::isnan(t_hi)) t_hi = T(hi, mu_tmp);
        C_star = t_lo > t_hi ? std::clamp(lo + t_lo * (hi - lo) / (t_lo - t_hi), lo, hi) : 0.5 * (lo + hi);
        break;
      }
    }
    const double next = 0.5 * (lo + hi);
    if (hi - lo <= opts.eps * std::max(1.0, hi) || next <= lo || next >= hi || it >= 400) {
      C_star = next;
      break;
    }
    C = next;
  }
  if (!(C_star > 0.0)) C_star = hi;
  res.C = C_star;
  res.mu = side.mu(C_star);
  recover(res, beta0, k);
  return res;
}

CappedSimplexResult project_capped_simplex_sorted(std::span<const double> beta0, std::size_t k) {
  validate(beta0, k);
  const std::size_t n = beta0.size();
  const double kd = static_cast<double>(k);
  std::vector<double> b(beta0.begin(), beta0.end());
  std::sort(b.begin(), b.end(), std::greater<>());
  std::vector<double> prefix(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + b[i];

  CappedSimplexResult res;
  if (prefix[k] <= 0.0) {
    res.beta.assign(n, 0.0);
    res.mu = b[k - 1];
    return res;
  }
  const double tol = 1e-12 * (1.0 + std::abs(b.front()) + std::abs(b.back()));

  // c capped coordinates (the c largest), then free coordinates c+1..r, rest zero.
  for (std::size_t c = 0; c < k; ++c) {
    const double cd = static_cast<double>(c);
    const double S = prefix[c];
    for (std::size_t r = c + 1; r <= n; ++r) {
      const double free = static_cast<double>(r - c);
      const double denom = (kd - cd) / kd + free * cd / (kd * (kd - cd));
      const double C = (prefix[r] - S + free * S / (kd - cd)) / denom;
      if (!(C > 0.0)) continue;
      const double mu = (cd * C / kd - S) / (kd - cd);
      const double cap = C / kd;
      if (c >= 1 && b[c - 1] - mu < cap - tol) continue;
      if (b[c] - mu > cap + tol) continue;
      if (b[r - 1] - mu < -tol) continue;
      if (r < n && b[r] - mu > tol) continue;
      res.C = C;
      res.mu = mu;
      recover(res, beta0, k);
      return res;
    }
  }
  // Exactly k capped coordinates and no free ones: sum = C, any mu in
  // [b[k+1], b[k] - C/k] works; use the same representative as mu(C).
  res.C = prefix[k];
  res.mu = k < n ? b[k] : b[k - 1] - res.C / kd;
  recover(res, beta0, k);
  return res;
}

}  // namespace taufpl
