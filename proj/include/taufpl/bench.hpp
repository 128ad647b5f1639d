#pragma once

#include <cstddef>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "taufpl/data.hpp"
#include "taufpl/solver.hpp"

namespace taufpl {

enum class BenchVariant {
  kDac,              // cached bisection on the top-k simplex
  kPlainBisection,   // same bisection without caches
  kSortSearch,       // sort-based capped-simplex reference, O(n log n + kn)
  kCappedSimplex,    // cached bisection on the capped simplex
  kTraining,         // full solver run (training-time scaling)
};

const char* variant_name(BenchVariant v);
std::optional<BenchVariant> variant_from_name(const std::string& name);

struct BenchRecord {
  BenchVariant variant = BenchVariant::kDac;
  std::size_t m = 0, n = 0, k = 0;
  std::size_t trial = 0;
  std::int64_t wall_nanos = 0;
};

/// k as a fraction of n (rounded down, at least 1) or a constant clipped to n.
struct KRule {
  bool is_fraction = true;
  double value = 0.1;
  std::size_t k_for(std::size_t n) const;
};

struct ProjectionBenchConfig {
  std::vector<std::pair<std::size_t, std::size_t>> sizes;  // (m, n)
  KRule k_rule;
  std::size_t trials = 5;
  std::uint64_t seed = 0;
  std::vector<BenchVariant> variants = {BenchVariant::kDac, BenchVariant::kPlainBisection,
                                        BenchVariant::kCappedSimplex, BenchVariant::kSortSearch};
  /// Cells where k*n exceeds this skip the quadratic sort-search variant.
  double sort_search_max_work = 2e8;
  double agreement_tol = 1e-8;
};

/// Times each variant on identical N(0,1) inputs per cell. Before any time is
/// recorded, the variants' outputs on that cell are compared and a
/// std::runtime_error is thrown if they disagree. One warm-up run per variant
/// is discarded. Requires trials >= 3.
std::vector<BenchRecord> bench_projection(const ProjectionBenchConfig& cfg);

/// Fixed-iteration training on upsampled copies of `ds`.
std::vector<BenchRecord> bench_training(const Dataset& ds, const std::vector<std::size_t>& ratios,
                                        const TrainConfig& cfg, std::size_t trials = 3);

/// Median wall time of one (variant, m, n) cell.
std::int64_t median_nanos(const std::vector<BenchRecord>& records, BenchVariant v, std::size_t m, std::size_t n);

/// Least-squares slope of log(time) against log(size). Needs >= 3 distinct sizes.
double fit_loglog_slope(const std::vector<std::pair<double, double>>& size_time);
/// Same, over per-cell medians of one variant with size = m + n.
double fit_loglog_slope(const std::vector<BenchRecord>& records, BenchVariant v);

void write_bench_csv(std::ostream& out, const std::vector<BenchRecord>& records, bool header = true);
std::vector<BenchRecord> read_bench_csv(std::istream& in);

}  // namespace taufpl
