#include "breakpoint_cache.hpp"

#include <algorithm>

#include "taufpl/error.hpp"
#include "taufpl/selection.hpp"

namespace taufpl::detail {

AlphaSide::AlphaSide(std::span<const double> alpha0) : cache_(alpha0.begin(), alpha0.end()) {}

double AlphaSide::C(double lambda) const {
  double s = active_sum_ - static_cast<double>(active_count_) * lambda;
  for (double a : cache_) {
    if (a > lambda) s += a - lambda;
  }
  return s;
}

void AlphaSide::shrink(double lo, double hi) {
  std::size_t keep = 0;
  for (double a : cache_) {
    if (a >= hi) {
      ++active_count_;
      active_sum_ += a;
    } else if (a > lo) {
      cache_[keep++] = a;
    }
  }
  cache_.resize(keep);
}

BetaSide::BetaSide(std::span<const double> beta0, std::size_t k)
    : k_(k), n_(beta0.size()), cache_(beta0.begin(), beta0.end()) {
  kth_ = partition_kth_largest(cache_, k);
  for (std::size_t j = 0; j < k; ++j) {
    top_k_sum_ += cache_[j];
    max_ = std::max(max_, cache_[j]);
  }
  if (k < n_) {
    kth_next_ = *std::max_element(cache_.begin() + static_cast<std::ptrdiff_t>(k), cache_.end());
    c0_ = static_cast<double>(k) * (kth_ - kth_next_);
  }
}

double BetaSide::mu(double C) {
  if (!(C > 0.0)) throw DomainError("mu(C) requires C > 0");
  const double kd = static_cast<double>(k_);
  if (k_ == n_) return kth_ - C / kd;
  if (C < c0_) return kth_next_;
  return root(C);
}

double BetaSide::root(double C) {
  const double kd = static_cast<double>(k_);
  const double cap = C / kd;
  // For C >= C0 the root lies in [b[k] - C/k, b[k+1]].
  double lo = std::max(kth_ - cap, mu_lo_);
  double hi = std::min(kth_next_, mu_hi_);
  if (lo >= hi) return lo == hi ? lo : 0.5 * (lo + hi);

  double cap_count = static_cast<double>(cap_count_);
  double lin_count = static_cast<double>(lin_count_);
  double lin_sum = lin_sum_;
  work_.assign(cache_.begin(), cache_.end());

  while (true) {
    std::size_t keep = 0;
    for (double b : work_) {
      if (b <= lo) continue;
      if (b - cap >= hi) {
        cap_count += 1.0;
      } else if (b - cap <= lo && b >= hi) {
        lin_count += 1.0;
        lin_sum += b;
      } else {
        work_[keep++] = b;
      }
    }
    work_.resize(keep);
    if (work_.empty()) break;

    rng_ ^= rng_ << 13;
    rng_ ^= rng_ >> 7;
    rng_ ^= rng_ << 17;
    const double b = work_[rng_ % work_.size()];
    const bool lower_inside = b - cap > lo && b - cap < hi;
    const bool upper_inside = b > lo && b < hi;
    double pivot;
    if (lower_inside && upper_inside) {
      pivot = (rng_ >> 32) & 1u ? b : b - cap;
    } else {
      pivot = lower_inside ? b - cap : b;
    }

    double h = cap_count * cap + lin_sum - lin_count * pivot - C;
    for (double v : work_) {
      const double t = v - pivot;
      if (t >= cap) {
        h += cap;
      } else if (t > 0.0) {
        h += t;
      }
    }
    if (h > 0.0) {
      lo = pivot;
    } else if (h < 0.0) {
      hi = pivot;
    } else {
      return pivot;
    }
  }
  // No breakpoint left inside (lo, hi): the equation is linear there.
  if (lin_count > 0.0) {
    const double m = (cap_count * cap + lin_sum - C) / lin_count;
    return std::clamp(m, lo, hi);
  }
  return lo;
}

double BetaSide::tail(double C, double mu) const {
  const double kd = static_cast<double>(k_);
  const double delta = mu + C / kd;
  double t = kd * mu + cap_sum_ - static_cast<double>(cap_count_) * delta;
  for (double b : cache_) {
    if (b > delta) t += b - delta;
  }
  return t;
}

void BetaSide::shrink(double mu_lo, double mu_hi, double delta_lo, double delta_hi) {
  mu_lo_ = std::max(mu_lo_, mu_lo);
  mu_hi_ = std::min(mu_hi_, mu_hi);
  std::size_t keep = 0;
  for (double b : cache_) {
    if (b <= mu_lo_) continue;
    if (b >= delta_hi) {
      ++cap_count_;
      cap_sum_ += b;
    } else if (b >= mu_hi_ && b <= delta_lo) {
      ++lin_count_;
      lin_sum_ += b;
    } else {
      cache_[keep++] = b;
    }
  }
  cache_.resize(keep);
}

}  // namespace taufpl::detail
