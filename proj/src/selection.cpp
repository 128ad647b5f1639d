#include "taufpl/selection.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace taufpl {

namespace {

// Descending order throughout: "left" means larger.

double median_of_five_desc(double* a, std::size_t len) {
  std::sort(a, a + len, std::greater<>());
  return a[len / 2];
}

// Median of medians of a[lo, hi). Reorders that range.
double median_of_medians(double* a, std::size_t len) {
  if (len <= 5) return median_of_five_desc(a, len);
  std::size_t groups = 0;
  for (std::size_t g = 0; g < len; g += 5) {
    const std::size_t glen = std::min<std::size_t>(5, len - g);
    const double med = median_of_five_desc(a + g, glen);
    // Park group medians at the front; their original slots are refilled by the swap.
    const auto it = std::find(a + g, a + g + glen, med);
    std::iter_swap(a + groups, it);
    ++groups;
  }
  std::span<double> medians(a, groups);
  return partition_kth_largest(medians, (groups + 1) / 2);
}

// Three-way partition of a[0, len) around pivot: [> pivot | == pivot | < pivot].
std::pair<std::size_t, std::size_t> partition3(double* a, std::size_t len, double pivot) {
  std::size_t gt = 0, i = 0, lt = len;
  while (i < lt) {
    if (a[i] > pivot) {
      std::swap(a[gt++], a[i++]);
    } else if (a[i] < pivot) {
      std::swap(a[i], a[--lt]);
    } else {
      ++i;
    }
  }
  return {gt, lt};
}

}  // namespace

double partition_kth_largest(std::span<double> v, std::size_t k) {
  if (k < 1 || k > v.size()) throw std::out_of_range("select: k out of range");
  double* a = v.data();
  std::size_t lo = 0, hi = v.size();
  std::size_t target = k - 1;
  // SplitMix64 pivot stream; fixed seed keeps results reproducible and the call reentrant.
  std::uint64_t state = 0x9E3779B97F4A7C15ull ^ v.size();
  auto next = [&state] {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  };
  const int budget = 2 * (std::bit_width(v.size()) + 1);
  int rounds = 0;
  while (true) {
    const std::size_t len = hi - lo;
    if (len == 1) return a[lo];
    double pivot;
    if (rounds++ < budget) {
      pivot = a[lo + next() % len];
    } else {
      std::vector<double> scratch(a + lo, a + hi);
      pivot = median_of_medians(scratch.data(), scratch.size());
    }
    const auto [gt, lt] = partition3(a + lo, len, pivot);
    const std::size_t rel = target - lo;
    if (rel < gt) {
      hi = lo + gt;
    } else if (rel < lt) {
      return pivot;
    } else {
      lo += lt;
    }
  }
}

double select_kth_largest(std::span<const double> v, std::size_t k) {
  std::vector<double> copy(v.begin(), v.end());
  return partition_kth_largest(copy, k);
}

double sum_top_k(std::span<const double> v, std::size_t k) {
  std::vector<double> copy(v.begin(), v.end());
  partition_kth_largest(copy, k);
  double s = 0.0;
  for (std::size_t i = 0; i < k; ++i) s += copy[i];
  return s;
}

}  // namespace taufpl
