#pragma once

#include <cstddef>
#include <span>
#include <string>

namespace taufpl {

struct ConfusionCounts {
  std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
};

struct Confusion {
  double fpr = 0.0;
  double tpr = 0.0;
  ConfusionCounts counts;
};

/// Predict positive iff score > b; a score equal to b is negative.
/// Throws DataError if either class is empty.
Confusion confusion(std::span<const double> pos_scores, std::span<const double> neg_scores, double b);

/// (1/tau) max(fpr, tau) - tpr. Throws DomainError for tau <= 0.
double np_score(double fpr, double tpr, double tau);

/// Fraction of positives scored strictly above the (floor(tau n)+1)-th
/// largest negative score.
double ranking_at_tau(std::span<const double> pos_scores, std::span<const double> neg_scores, double tau);

struct RelaxationCheck {
  double r0 = 0.0;  // 0-1 loss against the pivotal negative
  double r1 = 0.0;  // truncated-quadratic loss against the mean of the top-k negatives
  bool ordered() const { return r0 <= r1; }
};
RelaxationCheck relaxation_check(std::span<const double> pos_scores, std::span<const double> neg_scores,
                                 double tau);

struct EvalReport {
  double fpr = 0.0;
  double tpr = 0.0;
  double np_score = 0.0;  // NaN when tau == 0
  double ranking_at_tau = 0.0;
  ConfusionCounts counts;
  RelaxationCheck relaxation;
  double tau = 0.0;
};

EvalReport evaluate_scores(std::span<const double> pos_scores, std::span<const double> neg_scores, double b,
                           double tau);

std::string to_json(const EvalReport& r);
std::string csv_header();
std::string to_csv_row(const EvalReport& r);

}  // namespace taufpl
