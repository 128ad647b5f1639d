#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "taufpl/data.hpp"
#include "taufpl/solver.hpp"

namespace taufpl {

enum class GridObjective {
  kRank,  // maximize mean ranking-at-tau
  kNp,    // minimize mean NP-score
};

struct GridCell {
  double R = 0.0;
  double mean = 0.0;                 // mean objective over folds (raw, not sign-flipped)
  std::vector<double> fold_values;
};

struct GridResult {
  double best_R = 0.0;
  std::vector<GridCell> cells;       // ascending R
  std::size_t extensions = 0;
};

std::vector<double> default_reg_grid();

/// Evaluates every R in `grid`; while the best cell sits on the boundary of a
/// grid with more than one cell, adds one cell beyond that edge (times or
/// divided by `factor`), at most `max_extensions` times. Ties keep the
/// smaller R. `evaluate` returns the per-fold values for one R.
GridResult grid_search(std::vector<double> grid, GridObjective objective,
                       const std::function<std::vector<double>(double)>& evaluate,
                       std::size_t max_extensions = 3, double factor = 10.0);

/// Stratified k-fold values for one R. kRank scores ranking-at-tau on the
/// held-out fold; kNp thresholds on the training-fold scores (NP criterion)
/// and reports the held-out NP-score.
std::vector<double> cross_validate(const Dataset& ds, const TrainConfig& cfg, std::size_t folds,
                                   GridObjective objective, std::uint64_t seed, std::size_t threads = 1);

}  // namespace taufpl
