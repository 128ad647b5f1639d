#include "taufpl/thresholding.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include "taufpl/error.hpp"
#include "taufpl/eval.hpp"
#include "taufpl/parallel.hpp"
#include "taufpl/selection.hpp"

namespace taufpl {

double top_offset(double score) { return 1e-9 * std::max(1.0, std::abs(score)); }

namespace {

double feasible_threshold(std::span<const double> neg_scores, double tau) {
  const std::size_t k = top_k_from_tau(tau, neg_scores.size());
  const double pivot = select_kth_largest(neg_scores, k);
  double higher = std::numeric_limits<double>::infinity();
  for (double s : neg_scores) {
    if (s > pivot) higher = std::min(higher, s);
  }
  return std::isinf(higher) ? pivot + top_offset(pivot) : 0.5 * (pivot + higher);
}

double np_threshold(std::span<const double> pos_scores, std::span<const double> neg_scores, double tau) {
  if (pos_scores.empty()) throw DataError("NP-score thresholding needs positive scores");
  std::vector<double> pos(pos_scores.begin(), pos_scores.end());
  std::vector<double> neg(neg_scores.begin(), neg_scores.end());
  std::sort(pos.begin(), pos.end());
  std::sort(neg.begin(), neg.end());
  std::vector<double> all;
  all.reserve(pos.size() + neg.size());
  std::merge(pos.begin(), pos.end(), neg.begin(), neg.end(), std::back_inserter(all));
  all.erase(std::unique(all.begin(), all.end()), all.end());

  std::vector<double> cuts;
  cuts.reserve(all.size() + 1);
  cuts.push_back(all.front() - top_offset(all.front()));
  for (std::size_t i = 0; i + 1 < all.size(); ++i) cuts.push_back(0.5 * (all[i] + all[i + 1]));
  cuts.push_back(all.back() + top_offset(all.back()));

  const double m = static_cast<double>(pos.size());
  const double n = static_cast<double>(neg.size());
  double best_b = cuts.front();
  double best = std::numeric_limits<double>::infinity();
  for (double b : cuts) {
    const auto fp = static_cast<double>(neg.end() - std::upper_bound(neg.begin(), neg.end(), b));
    const auto tp = static_cast<double>(pos.end() - std::upper_bound(pos.begin(), pos.end(), b));
    const double np = np_score(fp / n, tp / m, tau);
    if (np <= best) {
      best = np;
      best_b = b;
    }
  }
  return best_b;
}

std::uint64_t round_seed(std::uint64_t seed, std::size_t round) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (round + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

}  // namespace

double pick_threshold(std::span<const double> pos_scores, std::span<const double> neg_scores, double tau,
                      ThresholdCriterion criterion) {
  if (neg_scores.empty()) throw DataError("threshold selection needs negative scores");
  if (criterion == ThresholdCriterion::kFprFeasible) return feasible_threshold(neg_scores, tau);
  if (!(tau > 0.0)) throw DomainError("NP-score threshold criterion needs tau > 0");
  return np_threshold(pos_scores, neg_scores, tau);
}

Classifier oob_train(const Dataset& ds, const TrainConfig& train_cfg, const OOBConfig& oob) {
  if (oob.rounds < 1) throw std::invalid_argument("OOB rounds must be >= 1");
  if (oob.criterion == ThresholdCriterion::kNpScoreMin && !(train_cfg.tau > 0.0)) {
    throw DomainError("NP-score threshold criterion needs tau > 0");
  }
  struct Round {
    RankerModel model;
    double threshold = 0.0;
  };
  std::vector<Round> rounds(oob.rounds);
  parallel_for(oob.rounds, oob.threads, [&](std::size_t r) {
    const auto [fit, hold] = stratified_split(ds, oob.split_fraction, round_seed(oob.seed, r));
    TrainConfig cfg = train_cfg;
    cfg.seed = round_seed(train_cfg.seed, r);
    rounds[r].model = train_ranker(fit, cfg);
    const auto pos = score_rows(rounds[r].model, hold.positives, FeatureSpace::kScaled);
    const auto neg = score_rows(rounds[r].model, hold.negatives, FeatureSpace::kScaled);
    rounds[r].threshold = pick_threshold(pos, neg, train_cfg.tau, oob.criterion);
  });

  Classifier clf;
  clf.rounds = oob.rounds;
  for (const auto& r : rounds) clf.round_thresholds.push_back(r.threshold);
  const double R = static_cast<double>(oob.rounds);
  double mean = 0.0;
  for (double b : clf.round_thresholds) mean += b;
  mean /= R;
  double var = 0.0;
  for (double b : clf.round_thresholds) var += (b - mean) * (b - mean);
  clf.threshold = mean;
  clf.threshold_std = oob.rounds > 1 ? std::sqrt(var / (R - 1.0)) : 0.0;

  if (oob.final_scorer == FinalScorer::kRetrainFull) {
    clf.model = train_ranker(ds, train_cfg);
  } else {
    RankerModel avg;
    avg.tau = train_cfg.tau;
    avg.R = train_cfg.R;
    avg.weights.assign(ds.dim(), 0.0);
    avg.converged = true;
    for (const auto& r : rounds) {
      for (std::size_t j = 0; j < avg.weights.size(); ++j) avg.weights[j] += r.model.weights[j];
      avg.iterations = std::max(avg.iterations, r.model.iterations);
      avg.converged = avg.converged && r.model.converged;
      avg.final_dual += r.model.final_dual;
    }
    for (double& w : avg.weights) w /= R;
    avg.final_dual /= R;
    clf.model = std::move(avg);
  }
  return clf;
}

Classifier train_threshold_on_train(const Dataset& ds, const TrainConfig& train_cfg,
                                    ThresholdCriterion criterion) {
  Classifier clf;
  clf.model = train_ranker(ds, train_cfg);
  const auto pos = score_rows(clf.model, ds.positives, FeatureSpace::kScaled);
  const auto neg = score_rows(clf.model, ds.negatives, FeatureSpace::kScaled);
  clf.threshold = pick_threshold(pos, neg, train_cfg.tau, criterion);
  clf.rounds = 1;
  clf.round_thresholds = {clf.threshold};
  return clf;
}

}  // namespace taufpl
