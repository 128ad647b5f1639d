#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace taufpl {

/// Point to project onto the top-k simplex
///   G_k = { a >= 0, b >= 0 : sum(a) = sum(b), b_j <= sum(a)/k }.
struct ProjectionInput {
  std::vector<double> alpha0;  // length m
  std::vector<double> beta0;   // length n
  std::size_t k = 1;           // 1 <= k <= n
  double eps = 1e-10;          // bisection tolerance on lambda
};

struct ProjectionOptions {
  double eps = 1e-10;
  /// Breakpoint caches with partial sums (divide and conquer). When false every
  /// evaluation scans all breakpoints: plain bisection, used as a reference.
  bool use_caches = true;
  /// Guarded secant steps on f(lambda), alternated with midpoint steps.
  bool secant = false;
  /// Record the number of live cache entries after each iteration.
  bool record_cache_sizes = false;
};

struct ProjectionResult {
  std::vector<double> alpha;
  std::vector<double> beta;
  double lambda = 0.0;
  double mu = 0.0;
  double C = 0.0;
  bool zero_case = false;
  std::size_t iterations = 0;
  std::vector<std::size_t> cache_sizes;  // filled when record_cache_sizes
};

/// Zero test: the projection is the zero pair iff
/// k*max(alpha0) + (sum of the k largest beta0) <= 0.
bool zero_case(std::span<const double> alpha0, std::span<const double> beta0, std::size_t k);

/// C(lambda) = sum_i [alpha0_i - lambda]_+.
double eval_C(double lambda, std::span<const double> alpha0);

/// Single-valued mu(C): for C below C0 = k*(b[k] - b[k+1]) the root set is an
/// interval and its lower end b[k+1] is returned; otherwise the unique root of
///   sum_j min([beta0_j - mu]_+, C/k) = C.
/// For k = n (no b[k+1]) the upper end b[n] - C/n of the root set is returned.
/// Throws DomainError for C <= 0.
double eval_mu(double C, std::span<const double> beta0, std::size_t k);

/// delta(C) = mu(C) + C/k.
double eval_delta(double C, std::span<const double> beta0, std::size_t k);

/// f(lambda) = k*lambda + k*mu(C(lambda)) + sum_j [beta0_j - delta(C(lambda))]_+.
/// Throws DomainError when C(lambda) = 0.
double eval_f(double lambda, std::span<const double> alpha0, std::span<const double> beta0,
              std::size_t k);

/// Exact Euclidean projection onto G_k in expected linear time: bisection on
/// f(lambda) over (-max(beta0), max(alpha0)) with shrinking intervals for
/// lambda, C, mu and delta, pruned breakpoint caches, and an exact linear
/// solve once every cache is empty. Throws std::invalid_argument on
/// non-finite input, k outside [1, n], or eps <= 0.
ProjectionResult project_top_k(std::span<const double> alpha0, std::span<const double> beta0,
                               std::size_t k, const ProjectionOptions& opts = {});
ProjectionResult project_top_k(const ProjectionInput& input);

/// Residuals of the three optimality equations at (lambda, mu, C):
/// C = sum [a0 - lambda]_+, C = sum min([b0 - mu]_+, C/k), and
/// 0 = lambda + mu + (1/k) sum [b0 - mu - C/k]_+.
struct KktResiduals {
  double c_equation = 0.0;
  double mu_equation = 0.0;
  double coupling_equation = 0.0;
  double max() const;
};
KktResiduals kkt_residuals(std::span<const double> alpha0, std::span<const double> beta0,
                           std::size_t k, double lambda, double mu, double C);

struct CappedSimplexResult {
  std::vector<double> beta;
  double mu = 0.0;
  double C = 0.0;
  std::size_t iterations = 0;
};

/// Projection onto { b >= 0 : b_j <= sum(b)/k } with the same cached
/// bisection, driven by C instead of lambda. Expected linear time.
CappedSimplexResult project_capped_simplex(std::span<const double> beta0, std::size_t k,
                                           const ProjectionOptions& opts = {});

/// Reference solver for the same problem: sort, then search over the number
/// of capped and free coordinates. O(n log n + k n).
CappedSimplexResult project_capped_simplex_sorted(std::span<const double> beta0, std::size_t k);

}  // namespace taufpl
