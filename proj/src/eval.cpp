#include "taufpl/eval.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "taufpl/error.hpp"
#include "taufpl/selection.hpp"
#include "taufpl/solver.hpp"

namespace taufpl {

namespace {

void require_both(std::span<const double> pos, std::span<const double> neg) {
  if (pos.empty() || neg.empty()) throw DataError("evaluation needs at least one instance per class");
}

}  // namespace

Confusion confusion(std::span<const double> pos_scores, std::span<const double> neg_scores, double b) {
  require_both(pos_scores, neg_scores);
  Confusion c;
  for (double s : pos_scores) (s > b ? c.counts.tp : c.counts.fn)++;
  for (double s : neg_scores) (s > b ? c.counts.fp : c.counts.tn)++;
  c.fpr = static_cast<double>(c.counts.fp) / static_cast<double>(neg_scores.size());
  c.tpr = static_cast<double>(c.counts.tp) / static_cast<double>(pos_scores.size());
  return c;
}

double np_score(double fpr, double tpr, double tau) {
  if (!(tau > 0.0)) throw DomainError("NP-score is undefined for tau <= 0");
  return std::max(fpr, tau) / tau - tpr;
}

double ranking_at_tau(std::span<const double> pos_scores, std::span<const double> neg_scores, double tau) {
  require_both(pos_scores, neg_scores);
  const std::size_t k = top_k_from_tau(tau, neg_scores.size());
  const double pivot = select_kth_largest(neg_scores, k);
  std::size_t above = 0;
  for (double s : pos_scores) above += s > pivot ? 1 : 0;
  return static_cast<double>(above) / static_cast<double>(pos_scores.size());
}

RelaxationCheck relaxation_check(std::span<const double> pos_scores, std::span<const double> neg_scores,
                                 double tau) {
  require_both(pos_scores, neg_scores);
  const std::size_t k = top_k_from_tau(tau, neg_scores.size());
  const double pivot = select_kth_largest(neg_scores, k);
  // The mean of the top k is never below the k-th largest; keep rounding from saying otherwise.
  const double centroid = std::max(pivot, sum_top_k(neg_scores, k) / static_cast<double>(k));
  RelaxationCheck rc;
  for (double s : pos_scores) {
    rc.r0 += s - pivot <= 0.0 ? 1.0 : 0.0;
    const double u = std::max(1.0 - (s - centroid), 0.0);
    rc.r1 += u * u;
  }
  const double m = static_cast<double>(pos_scores.size());
  rc.r0 /= m;
  rc.r1 /= m;
  return rc;
}

EvalReport evaluate_scores(std::span<const double> pos_scores, std::span<const double> neg_scores, double b,
                           double tau) {
  const Confusion c = confusion(pos_scores, neg_scores, b);
  EvalReport r;
  r.tau = tau;
  r.fpr = c.fpr;
  r.tpr = c.tpr;
  r.counts = c.counts;
  r.np_score = tau > 0.0 ? np_score(c.fpr, c.tpr, tau) : std::numeric_limits<double>::quiet_NaN();
  r.ranking_at_tau = ranking_at_tau(pos_scores, neg_scores, tau);
  r.relaxation = relaxation_check(pos_scores, neg_scores, tau);
  return r;
}

std::string to_json(const EvalReport& r) {
  nlohmann::ordered_json j;
  j["tau"] = r.tau;
  j["fpr"] = r.fpr;
  j["tpr"] = r.tpr;
  if (std::isnan(r.np_score)) {
    j["np_score"] = nullptr;
  } else {
    j["np_score"] = r.np_score;
  }
  j["ranking_at_tau"] = r.ranking_at_tau;
  j["counts"] = {{"tp", r.counts.tp}, {"fp", r.counts.fp}, {"tn", r.counts.tn}, {"fn", r.counts.fn}};
  j["r0"] = r.relaxation.r0;
  j["r1"] = r.relaxation.r1;
  return j.dump(2);
}

std::string csv_header() { return "tau,fpr,tpr,np_score,ranking_at_tau,tp,fp,tn,fn,r0,r1"; }

std::string to_csv_row(const EvalReport& r) {
  std::ostringstream os;
  os.precision(17);
  os << r.tau << ',' << r.fpr << ',' << r.tpr << ',';
  if (!std::isnan(r.np_score)) os << r.np_score;
  os << ',' << r.ranking_at_tau << ',' << r.counts.tp << ',' << r.counts.fp << ',' << r.counts.tn << ','
     << r.counts.fn << ',' << r.relaxation.r0 << ',' << r.relaxation.r1;
  return os.str();
}

}  // namespace taufpl
