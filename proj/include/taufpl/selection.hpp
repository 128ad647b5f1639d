#pragma once

#include <cstddef>
#include <span>

namespace taufpl {

/// Rearranges `v` so that v[k-1] holds the k-th largest value (1-based,
/// duplicates occupy adjacent ranks), every element before it is >= v[k-1]
/// and every element after it is <= v[k-1]. Randomized quickselect with a
/// deterministic pivot sequence; falls back to median-of-medians pivots when
/// the partitioning stops making progress, so the worst case stays O(n).
/// Throws std::out_of_range unless 1 <= k <= v.size().
double partition_kth_largest(std::span<double> v, std::size_t k);

/// k-th largest value of `v` (multiset semantics). Expected O(len) time.
double select_kth_largest(std::span<const double> v, std::size_t k);

/// Sum of the k largest values.
double sum_top_k(std::span<const double> v, std::size_t k);

}  // namespace taufpl
