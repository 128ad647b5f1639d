#include "taufpl/grid.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "taufpl/error.hpp"
#include "taufpl/eval.hpp"
#include "taufpl/parallel.hpp"
#include "taufpl/thresholding.hpp"

namespace taufpl {

std::vector<double> default_reg_grid() { return {1e-4, 1e-3, 1e-2, 1e-1, 1.0, 1e1, 1e2}; }

namespace {

GridCell make_cell(double R, std::vector<double> values) {
  GridCell c;
  c.R = R;
  c.mean = values.empty() ? 0.0 : std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
  c.fold_values = std::move(values);
  return c;
}

}  // namespace

GridResult grid_search(std::vector<double> grid, GridObjective objective,
                       const std::function<std::vector<double>(double)>& evaluate, std::size_t max_extensions,
                       double factor) {
  if (grid.empty()) throw std::invalid_argument("empty regularization grid");
  for (double R : grid) {
    if (!(R > 0.0)) throw std::invalid_argument("grid values must be positive");
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  GridResult res;
  for (double R : grid) res.cells.push_back(make_cell(R, evaluate(R)));

  auto better = [objective](double a, double b) { return objective == GridObjective::kRank ? a > b : a < b; };
  auto best_index = [&] {
    std::size_t best = 0;
    for (std::size_t i = 1; i < res.cells.size(); ++i) {
      if (better(res.cells[i].mean, res.cells[best].mean)) best = i;
    }
    return best;
  };

  std::size_t best = best_index();
  while (res.cells.size() > 1 && res.extensions < max_extensions) {
    if (best == 0) {
      const double R = res.cells.front().R / factor;
      res.cells.insert(res.cells.begin(), make_cell(R, evaluate(R)));
    } else if (best == res.cells.size() - 1) {
      const double R = res.cells.back().R * factor;
      res.cells.push_back(make_cell(R, evaluate(R)));
    } else {
      break;
    }
    ++res.extensions;
    best = best_index();
  }
  res.best_R = res.cells[best].R;
  return res;
}

std::vector<double> cross_validate(const Dataset& ds, const TrainConfig& cfg, std::size_t folds,
                                   GridObjective objective, std::uint64_t seed, std::size_t threads) {
  if (folds < 2) throw std::invalid_argument("need at least 2 folds");
  if (ds.num_positive() < folds || ds.num_negative() < folds) {
    throw DataError("fewer instances than folds in a class");
  }
  std::vector<double> values(folds);
  parallel_for(folds, threads, [&](std::size_t f) {
    const auto [train, test] = stratified_fold(ds, folds, f, seed);
    const RankerModel model = train_ranker(train, cfg);
    const auto pos = score_rows(model, test.positives, FeatureSpace::kScaled);
    const auto neg = score_rows(model, test.negatives, FeatureSpace::kScaled);
    if (objective == GridObjective::kRank) {
      values[f] = ranking_at_tau(pos, neg, cfg.tau);
    } else {
      const auto tr_pos = score_rows(model, train.positives, FeatureSpace::kScaled);
      const auto tr_neg = score_rows(model, train.negatives, FeatureSpace::kScaled);
      const double b = pick_threshold(tr_pos, tr_neg, cfg.tau, ThresholdCriterion::kNpScoreMin);
      const Confusion c = confusion(pos, neg, b);
      values[f] = np_score(c.fpr, c.tpr, cfg.tau);
    }
  });
  return values;
}

}  // namespace taufpl
