#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "taufpl/data.hpp"

namespace oracle {

struct Pair {
  std::vector<double> alpha;
  std::vector<double> beta;
};

/// Projection onto the top-k simplex by enumerating every face: each alpha_i is
/// zero or free, each beta_j is zero, free or at its cap sum(alpha)/k. The
/// stationary point of each face is a 3x3 linear solve; the closest primal
/// feasible candidate wins. Exponential; meant for m, n <= 6.
Pair project_enumerate(std::span<const double> alpha0, std::span<const double> beta0, std::size_t k);

/// k = 1 projection. The caps are implied by the coupling there, so the
/// problem is {a >= 0, b >= 0, sum a = sum b}: a = [a0 - v]_+, b = [b0 + v]_+
/// with v found by bisection.
Pair project_k1(std::span<const double> alpha0, std::span<const double> beta0);

/// Primal truncated-quadratic ranking objective computed from scratch with a
/// full sort (long double accumulation).
double primal(std::span<const double> w, const taufpl::Dataset& ds, double tau, double R);

/// Subgradient descent on the primal with step 1/(R t); returns the best
/// objective value seen.
double primal_subgradient_min(const taufpl::Dataset& ds, double tau, double R, std::size_t iters,
                              std::vector<double>* best_w = nullptr);

double max_abs_diff(std::span<const double> a, std::span<const double> b);

}  // namespace oracle
