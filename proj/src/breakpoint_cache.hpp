#pragma once

// Breakpoint caches shared by the top-k and capped-simplex projections.
//
// Each side keeps the breakpoints whose contribution is still undecided for
// the current uncertainty intervals, plus partial sums of everything already
// decided. Shrinking the intervals moves entries out of the cache, so later
// evaluations only touch surviving breakpoints.

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

namespace taufpl::detail {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// C(lambda) = sum_i [alpha0_i - lambda]_+ for lambda in [lo, hi].
class AlphaSide {
 public:
  explicit AlphaSide(std::span<const double> alpha0);

  double C(double lambda) const;
  /// Restrict to lambda in [lo, hi] and move decided entries into the partial sums.
  void shrink(double lo, double hi);
  std::size_t cached() const noexcept { return cache_.size(); }

 private:
  std::vector<double> cache_;
  std::size_t active_count_ = 0;  // alpha0_i >= hi: always contributes alpha0_i - lambda
  double active_sum_ = 0.0;
};

/// mu(C), delta(C) and the beta part of f for a fixed beta0 and k.
class BetaSide {
 public:
  BetaSide(std::span<const double> beta0, std::size_t k);

  std::size_t k() const noexcept { return k_; }
  double kth() const noexcept { return kth_; }
  double kth_next() const noexcept { return kth_next_; }
  double top_k_sum() const noexcept { return top_k_sum_; }
  double max() const noexcept { return max_; }

  /// Single-valued mu(C) for C > 0.
  double mu(double C);
  /// k*mu + sum_j [beta0_j - mu - C/k]_+.
  double tail(double C, double mu) const;

  /// Record that every future query has mu in [mu_lo, mu_hi] and
  /// delta in [delta_lo, delta_hi], then prune.
  void shrink(double mu_lo, double mu_hi, double delta_lo, double delta_hi);
  std::size_t cached() const noexcept { return cache_.size(); }

 private:
  double root(double C);

  std::size_t k_;
  std::size_t n_;
  double kth_ = 0.0;
  double kth_next_ = -kInf;  // b[k+1], -inf when k == n
  double top_k_sum_ = 0.0;
  double max_ = -kInf;
  double c0_ = kInf;

  std::vector<double> cache_;
  std::vector<double> work_;
  std::size_t cap_count_ = 0;  // beta0_j >= delta: capped at C/k
  double cap_sum_ = 0.0;
  std::size_t lin_count_ = 0;  // mu <= beta0_j <= delta: contributes beta0_j - mu
  double lin_sum_ = 0.0;
  double mu_lo_ = -kInf, mu_hi_ = kInf;
  std::uint64_t rng_ = 0x2545F4914F6CDD1Dull;
};

}  // namespace taufpl::detail
