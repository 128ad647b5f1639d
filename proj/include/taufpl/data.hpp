#pragma once

#include <cstddef>
#include <cstdint>
#include <istream>
#include <ostream>
#include <span>
#include <utility>
#include <vector>

namespace taufpl {

/// Dense switch-over point: sparse input with at most this many columns is
/// materialized densely.
inline constexpr std::size_t kDefaultDenseMaxDim = 4096;

/// Row-major feature matrix, stored either densely or as compressed sparse rows.
/// Immutable once built; all products are single-threaded with a fixed
/// summation order.
class FeatureMatrix {
 public:
  struct Entry {
    std::size_t col;  // 0-based
    double value;
  };

  FeatureMatrix() = default;
  static FeatureMatrix dense(std::size_t rows, std::size_t cols, std::vector<double> values);
  static FeatureMatrix sparse(std::size_t cols, std::vector<std::vector<Entry>> rows);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool is_dense() const noexcept { return dense_; }

  /// Same contents in the other storage layout.
  FeatureMatrix to_dense() const;
  FeatureMatrix to_sparse() const;

  double row_dot(std::size_t row, std::span<const double> w) const;
  double row_squared_norm(std::size_t row) const;
  /// Nonzero entries of one row in increasing column order.
  std::vector<Entry> row_entries(std::size_t row) const;

  /// out[i] = <x_i, w> for every row.
  void multiply(std::span<const double> w, std::span<double> out) const;
  /// out += sum_i coeff[i] * x_i.
  void accumulate_transposed(std::span<const double> coeff, std::span<double> out) const;

  FeatureMatrix scaled(double factor) const;
  FeatureMatrix select_rows(std::span<const std::size_t> indices) const;
  /// Each row repeated `times` times, in blocks (all rows, then all rows again...).
  FeatureMatrix repeated(std::size_t times) const;
  FeatureMatrix with_cols(std::size_t cols) const;

  bool operator==(const FeatureMatrix& other) const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  bool dense_ = true;
  std::vector<double> values_;         // dense: rows*cols; sparse: nnz
  std::vector<std::size_t> col_idx_;   // sparse only
  std::vector<std::size_t> row_ptr_;   // sparse only, rows+1
};

/// Binary labeled sample split by class.
struct Dataset {
  FeatureMatrix positives;  // m x d
  FeatureMatrix negatives;  // n x d

  std::size_t num_positive() const noexcept { return positives.rows(); }
  std::size_t num_negative() const noexcept { return negatives.rows(); }
  std::size_t dim() const noexcept { return positives.cols(); }

  /// Both classes stored densely iff dim <= dense_max_dim.
  Dataset with_storage(std::size_t dense_max_dim) const;
  double max_row_norm() const;

  bool operator==(const Dataset& other) const {
    return positives == other.positives && negatives == other.negatives;
  }
};

/// Multiplicative feature scaling recorded for inference-time reuse.
struct ScaleInfo {
  double factor = 1.0;
};

struct ParseOptions {
  int positive_label = 1;
  bool allow_empty = false;
  std::size_t dense_max_dim = kDefaultDenseMaxDim;
  /// Pad the dimension up to this value (0 = use the maximum index seen).
  std::size_t min_dim = 0;
};

/// Reads "label idx:val idx:val ..." lines. Instances whose label equals
/// `positive_label` are positives; every other label is negative.
Dataset parse_libsvm(std::istream& in, const ParseOptions& opts = {});
Dataset read_libsvm_file(const std::string& path, const ParseOptions& opts = {});

/// Writes positives (label +1) then negatives (label -1), zeros omitted,
/// values in shortest round-trip form.
void write_libsvm(std::ostream& out, const Dataset& ds);

/// Divides every feature by the largest instance norm when it exceeds 1.
std::pair<Dataset, ScaleInfo> normalize(const Dataset& ds);

/// First part gets round(fraction*m) positives and round(fraction*n)
/// negatives drawn uniformly without replacement; rows keep their original order.
std::pair<Dataset, Dataset> stratified_split(const Dataset& ds, double fraction, std::uint64_t seed);

/// Per-class fold assignment for stratified k-fold cross validation;
/// returns (train, test) for the given fold.
std::pair<Dataset, Dataset> stratified_fold(const Dataset& ds, std::size_t folds, std::size_t fold,
                                            std::uint64_t seed);

/// Spherical unit Gaussians centered at +/- separation/2 along the first
/// axis, normalized afterwards.
Dataset synth_gaussians(std::size_t m, std::size_t n, std::size_t d, double separation,
                        std::uint64_t seed);

/// Every instance duplicated `ratio` times.
Dataset upsample(const Dataset& ds, std::size_t ratio);

}  // namespace taufpl
