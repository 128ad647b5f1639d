#include "taufpl/data.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>

#include "taufpl/error.hpp"

namespace taufpl {

FeatureMatrix FeatureMatrix::dense(std::size_t rows, std::size_t cols, std::vector<double> values) {
  if (values.size() != rows * cols) {
    throw std::invalid_argument("dense matrix: value count does not match shape");
  }
  FeatureMatrix m;
  m.rows_ = rows;
  m.cols_ = cols;
  m.dense_ = true;
  m.values_ = std::move(values);
  return m;
}

FeatureMatrix FeatureMatrix::sparse(std::size_t cols, std::vector<std::vector<Entry>> rows) {
  FeatureMatrix m;
  m.rows_ = rows.size();
  m.cols_ = cols;
  m.dense_ = false;
  m.row_ptr_.reserve(rows.size() + 1);
  m.row_ptr_.push_back(0);
  for (const auto& row : rows) {
    for (const auto& e : row) {
      if (e.col >= cols) throw std::invalid_argument("sparse matrix: column out of range");
      if (e.value == 0.0) continue;
      m.col_idx_.push_back(e.col);
      m.values_.push_back(e.value);
    }
    m.row_ptr_.push_back(m.values_.size());
  }
  return m;
}

FeatureMatrix FeatureMatrix::to_dense() const {
  if (dense_) return *this;
  std::vector<double> values(rows_ * cols_, 0.0);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p) {
      values[i * cols_ + col_idx_[p]] = values_[p];
    }
  }
  return dense(rows_, cols_, std::move(values));
}

FeatureMatrix FeatureMatrix::to_sparse() const {
  if (!dense_) return *this;
  std::vector<std::vector<Entry>> rows(rows_);
  for (std::size_t i = 0; i < rows_; ++i) rows[i] = row_entries(i);
  return sparse(cols_, std::move(rows));
}

double FeatureMatrix::row_dot(std::size_t row, std::span<const double> w) const {
  double s = 0.0;
  if (dense_) {
    const double* x = values_.data() + row * cols_;
    for (std::size_t j = 0; j < cols_; ++j) s += x[j] * w[j];
  } else {
    for (std::size_t p = row_ptr_[row]; p < row_ptr_[row + 1]; ++p) s += values_[p] * w[col_idx_[p]];
  }
  return s;
}

double FeatureMatrix::row_squared_norm(std::size_t row) const {
  double s = 0.0;
  if (dense_) {
    const double* x = values_.data() + row * cols_;
    for (std::size_t j = 0; j < cols_; ++j) s += x[j] * x[j];
  } else {
    for (std::size_t p = row_ptr_[row]; p < row_ptr_[row + 1]; ++p) s += values_[p] * values_[p];
  }
  return s;
}

std::vector<FeatureMatrix::Entry> FeatureMatrix::row_entries(std::size_t row) const {
  std::vector<Entry> out;
  if (dense_) {
    const double* x = values_.data() + row * cols_;
    for (std::size_t j = 0; j < cols_; ++j) {
      if (x[j] != 0.0) out.push_back({j, x[j]});
    }
  } else {
    for (std::size_t p = row_ptr_[row]; p < row_ptr_[row + 1]; ++p) out.push_back({col_idx_[p], values_[p]});
  }
  return out;
}

void FeatureMatrix::multiply(std::span<const double> w, std::span<double> out) const {
  for (std::size_t i = 0; i < rows_; ++i) out[i] = row_dot(i, w);
}

void FeatureMatrix::accumulate_transposed(std::span<const double> coeff, std::span<double> out) const {
  for (std::size_t i = 0; i < rows_; ++i) {
    const double c = coeff[i];
    if (c == 0.0) continue;
    if (dense_) {
      const double* x = values_.data() + i * cols_;
      for (std::size_t j = 0; j < cols_; ++j) out[j] += c * x[j];
    } else {
      for (std::size_t p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p) out[col_idx_[p]] += c * values_[p];
    }
  }
}

FeatureMatrix FeatureMatrix::scaled(double factor) const {
  FeatureMatrix m = *this;
  for (double& v : m.values_) v *= factor;
  return m;
}

FeatureMatrix FeatureMatrix::select_rows(std::span<const std::size_t> indices) const {
  if (dense_) {
    std::vector<double> values;
    values.reserve(indices.size() * cols_);
    for (std::size_t i : indices) {
      const auto first = values_.begin() + static_cast<std::ptrdiff_t>(i * cols_);
      values.insert(values.end(), first, first + static_cast<std::ptrdiff_t>(cols_));
    }
    return dense(indices.size(), cols_, std::move(values));
  }
  std::vector<std::vector<Entry>> rows;
  rows.reserve(indices.size());
  for (std::size_t i : indices) rows.push_back(row_entries(i));
  return sparse(cols_, std::move(rows));
}

FeatureMatrix FeatureMatrix::repeated(std::size_t times) const {
  std::vector<std::size_t> idx;
  idx.reserve(rows_ * times);
  for (std::size_t t = 0; t < times; ++t) {
    for (std::size_t i = 0; i < rows_; ++i) idx.push_back(i);
  }
  return select_rows(idx);
}

FeatureMatrix FeatureMatrix::with_cols(std::size_t cols) const {
  if (cols < cols_) throw std::invalid_argument("with_cols: cannot drop columns");
  if (cols == cols_) return *this;
  std::vector<std::vector<Entry>> rows(rows_);
  for (std::size_t i = 0; i < rows_; ++i) rows[i] = row_entries(i);
  FeatureMatrix m = sparse(cols, std::move(rows));
  return dense_ ? m.to_dense() : m;
}

bool FeatureMatrix::operator==(const FeatureMatrix& other) const {
  if (rows_ != other.rows_ || cols_ != other.cols_) return false;
  for (std::size_t i = 0; i < rows_; ++i) {
    const auto a = row_entries(i);
    const auto b = other.row_entries(i);
    if (a.size() != b.size()) return false;
    for (std::size_t p = 0; p < a.size(); ++p) {
      if (a[p].col != b[p].col || a[p].value != b[p].value) return false;
    }
  }
  return true;
}

Dataset Dataset::with_storage(std::size_t dense_max_dim) const {
  const bool want_dense = dim() <= dense_max_dim;
  if (want_dense) return {positives.to_dense(), negatives.to_dense()};
  return {positives.to_sparse(), negatives.to_sparse()};
}

double Dataset::max_row_norm() const {
  double best = 0.0;
  for (std::size_t i = 0; i < positives.rows(); ++i) best = std::max(best, positives.row_squared_norm(i));
  for (std::size_t j = 0; j < negatives.rows(); ++j) best = std::max(best, negatives.row_squared_norm(j));
  return std::sqrt(best);
}

std::pair<Dataset, ScaleInfo> normalize(const Dataset& ds) {
  if (ds.num_positive() + ds.num_negative() == 0) throw DataError("normalize: empty dataset");
  const double norm = ds.max_row_norm();
  if (norm <= 1.0) return {ds, ScaleInfo{1.0}};
  const double factor = 1.0 / norm;
  Dataset out{ds.positives.scaled(factor), ds.negatives.scaled(factor)};
  // Rounding can leave the largest row a hair above 1.
  const double after = out.max_row_norm();
  if (after > 1.0) {
    const double fix = 1.0 / after;
    out = Dataset{out.positives.scaled(fix), out.negatives.scaled(fix)};
    return {out, ScaleInfo{factor * fix}};
  }
  return {out, ScaleInfo{factor}};
}

namespace {

std::vector<std::size_t> sample_sorted(std::size_t total, std::size_t count, std::mt19937_64& rng) {
  std::vector<std::size_t> idx(total);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::shuffle(idx.begin(), idx.end(), rng);
  idx.resize(count);
  std::sort(idx.begin(), idx.end());
  return idx;
}

std::vector<std::size_t> complement(std::size_t total, const std::vector<std::size_t>& chosen) {
  std::vector<std::size_t> out;
  out.reserve(total - chosen.size());
  std::size_t p = 0;
  for (std::size_t i = 0; i < total; ++i) {
    if (p < chosen.size() && chosen[p] == i) {
      ++p;
    } else {
      out.push_back(i);
    }
  }
  return out;
}

}  // namespace

std::pair<Dataset, Dataset> stratified_split(const Dataset& ds, double fraction, std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction < 1.0)) throw std::invalid_argument("split fraction must lie in (0, 1)");
  const std::size_t m = ds.num_positive();
  const std::size_t n = ds.num_negative();
  if (m < 2 || n < 2) throw DataError("stratified split needs at least two instances per class");
  const auto mp = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(m)));
  const auto np = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(n)));
  if (mp == 0 || mp == m || np == 0 || np == n) {
    throw DataError("split fraction leaves an empty class in one part");
  }
  std::mt19937_64 rng(seed);
  const auto pos_first = sample_sorted(m, mp, rng);
  const auto neg_first = sample_sorted(n, np, rng);
  const auto pos_second = complement(m, pos_first);
  const auto neg_second = complement(n, neg_first);
  return {Dataset{ds.positives.select_rows(pos_first), ds.negatives.select_rows(neg_first)},
          Dataset{ds.positives.select_rows(pos_second), ds.negatives.select_rows(neg_second)}};
}

std::pair<Dataset, Dataset> stratified_fold(const Dataset& ds, std::size_t folds, std::size_t fold,
                                            std::uint64_t seed) {
  if (folds < 2 || fold >= folds) throw std::invalid_argument("invalid fold specification");
  if (ds.num_positive() < folds || ds.num_negative() < folds) {
    throw DataError("fewer instances than folds in a class");
  }
  std::mt19937_64 rng(seed);
  auto assign = [&](std::size_t total, std::vector<std::size_t>& train, std::vector<std::size_t>& test) {
    std::vector<std::size_t> perm(total);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<std::size_t> fold_of(total);
    for (std::size_t r = 0; r < total; ++r) fold_of[perm[r]] = r % folds;
    for (std::size_t i = 0; i < total; ++i) (fold_of[i] == fold ? test : train).push_back(i);
  };
  std::vector<std::size_t> pos_train, pos_test, neg_train, neg_test;
  assign(ds.num_positive(), pos_train, pos_test);
  assign(ds.num_negative(), neg_train, neg_test);
  return {Dataset{ds.positives.select_rows(pos_train), ds.negatives.select_rows(neg_train)},
          Dataset{ds.positives.select_rows(pos_test), ds.negatives.select_rows(neg_test)}};
}

Dataset synth_gaussians(std::size_t m, std::size_t n, std::size_t d, double separation,
                        std::uint64_t seed) {
  if (m == 0 || n == 0 || d == 0) throw std::invalid_argument("synth_gaussians: m, n, d must be >= 1");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  auto draw = [&](std::size_t rows, double shift) {
    std::vector<double> v(rows * d);
    for (std::size_t i = 0; i < rows; ++i) {
      for (std::size_t j = 0; j < d; ++j) v[i * d + j] = normal(rng);
      v[i * d] += shift;
    }
    return FeatureMatrix::dense(rows, d, std::move(v));
  };
  Dataset raw{draw(m, separation / 2.0), draw(n, -separation / 2.0)};
  return normalize(raw).first;
}

Dataset upsample(const Dataset& ds, std::size_t ratio) {
  if (ratio < 1) throw std::invalid_argument("upsample ratio must be >= 1");
  if (ratio == 1) return ds;
  return {ds.positives.repeated(ratio), ds.negatives.repeated(ratio)};
}

}  // namespace taufpl
