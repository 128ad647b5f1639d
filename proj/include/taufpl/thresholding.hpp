#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "taufpl/data.hpp"
#include "taufpl/solver.hpp"

namespace taufpl {

enum class ThresholdCriterion {
  /// Just above the (floor(tau n)+1)-th largest negative score, so the
  /// empirical FPR on the scored sample is <= tau.
  kFprFeasible,
  /// Cut minimizing the empirical NP-score; ties go to the larger threshold.
  kNpScoreMin,
};

enum class FinalScorer {
  kRetrainFull,     // train once more on all data, keep the averaged threshold
  kAverageWeights,  // mean of the per-round weight vectors
};

struct OOBConfig {
  std::size_t rounds = 31;
  double split_fraction = 2.0 / 3.0;
  FinalScorer final_scorer = FinalScorer::kRetrainFull;
  ThresholdCriterion criterion = ThresholdCriterion::kNpScoreMin;
  std::uint64_t seed = 0;
  std::size_t threads = 1;
};

/// A ranking model plus threshold b; predicts positive iff score(x) > b.
struct Classifier {
  RankerModel model;
  double threshold = 0.0;
  std::size_t rounds = 0;
  double threshold_std = 0.0;
  std::vector<double> round_thresholds;

  bool predict(std::span<const double> x, FeatureSpace space = FeatureSpace::kRaw) const {
    return score(model, x, space) > threshold;
  }
};

/// Offset used above the largest relevant score when there is no higher one.
double top_offset(double score);

/// Throws DataError for empty negatives and DomainError for kNpScoreMin with
/// tau == 0 (the NP-score is undefined there).
double pick_threshold(std::span<const double> pos_scores, std::span<const double> neg_scores, double tau,
                      ThresholdCriterion criterion);

/// Repeated random splits: train on the first part, pick a threshold on the
/// second, average the thresholds. Rounds may run in parallel; aggregation
/// is in round order so results do not depend on the thread count.
Classifier oob_train(const Dataset& ds, const TrainConfig& train_cfg, const OOBConfig& oob);

/// Train on all data and threshold on the same training scores (the usual
/// ranking-then-threshold baseline).
Classifier train_threshold_on_train(const Dataset& ds, const TrainConfig& train_cfg,
                                    ThresholdCriterion criterion);

}  // namespace taufpl
