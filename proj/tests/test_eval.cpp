#include <doctest.h>

#include <cmath>
#include <random>

#include <json.hpp>

#include "taufpl/error.hpp"
#include "taufpl/eval.hpp"

using namespace taufpl;
using V = std::vector<double>;

TEST_CASE("confusion") {
  auto c = confusion(V{1, 1}, V{-1, -1}, 0.0);
  CHECK(c.fpr == 0.0);
  CHECK(c.tpr == 1.0);
  c = confusion(V{0}, V{0}, 0.0);
  CHECK(c.fpr == 0.0);
  CHECK(c.tpr == 0.0);
  c = confusion(V{1, 2}, V{3, 4, 5}, -10.0);
  CHECK(c.fpr == 1.0);
  CHECK(c.tpr == 1.0);
  CHECK(c.counts.tp + c.counts.fp + c.counts.tn + c.counts.fn == 5);
  CHECK_THROWS_AS(confusion(V{}, V{1}, 0.0), DataError);
}

TEST_CASE("np score") {
  CHECK(np_score(0.1, 0.8, 0.05) == doctest::Approx(1.2));
  CHECK(np_score(0.02, 0.7, 0.05) == doctest::Approx(0.3));
  CHECK(np_score(0.05, 0.7, 0.05) == doctest::Approx(0.3));
  CHECK(np_score(0.053, 0.582, 0.05) == doctest::Approx(0.478));
  CHECK(np_score(0.0, 1.0, 0.05) == 0.0);
  CHECK_THROWS_AS(np_score(0.1, 0.8, 0.0), DomainError);
}

TEST_CASE("np score is monotone") {
  for (int i = 0; i <= 20; ++i) {
    for (int j = 0; j < 20; ++j) {
      const double fpr = i / 20.0, tpr = j / 20.0;
      CHECK(np_score(fpr, tpr + 0.05, 0.1) <= np_score(fpr, tpr, 0.1));
      if (i < 20) CHECK(np_score(fpr + 0.05, tpr, 0.1) >= np_score(fpr, tpr, 0.1));
    }
  }
}

TEST_CASE("ranking at tau") {
  CHECK(ranking_at_tau(V{2, 2}, V{1, 0, -1}, 0.0) == 1.0);
  CHECK(ranking_at_tau(V{0.5}, V{1, 0}, 0.5) == 1.0);
  CHECK(ranking_at_tau(V{0.0}, V{1, 0}, 0.5) == 0.0);
  CHECK(ranking_at_tau(V{1.0, -2.0, 3.0, 0.0}, V{1, 0}, 0.0) == 0.25);
}

TEST_CASE("ranking at tau is a rank statistic") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> normal;
  for (int trial = 0; trial < 50; ++trial) {
    V pos(30), neg(40), tpos, tneg;
    for (double& v : pos) v = normal(rng);
    for (double& v : neg) v = normal(rng);
    for (double v : pos) tpos.push_back(std::exp(2.0 * v) + 3.0);
    for (double v : neg) tneg.push_back(std::exp(2.0 * v) + 3.0);
    CHECK(ranking_at_tau(pos, neg, 0.1) == ranking_at_tau(tpos, tneg, 0.1));
  }
}

TEST_CASE("relaxation ordering") {
  const auto sep = relaxation_check(V{5, 6}, V{0, 1, 2}, 0.0);
  CHECK(sep.r0 == 0.0);
  CHECK(sep.r1 == 0.0);
  const auto flat = relaxation_check(V{1, 1}, V{1, 1}, 0.3);
  CHECK(flat.r0 == 1.0);
  CHECK(flat.r1 == 1.0);
  CHECK(flat.ordered());
  std::mt19937_64 rng(4);
  std::normal_distribution<double> normal;
  for (int trial = 0; trial < 300; ++trial) {
    V pos(1 + rng() % 20), neg(1 + rng() % 20);
    for (double& v : pos) v = normal(rng);
    for (double& v : neg) v = normal(rng);
    CHECK(relaxation_check(pos, neg, (rng() % 100) / 100.0).ordered());
  }
}

TEST_CASE("report serialization") {
  const auto r = evaluate_scores(V{1, 2, 3}, V{-1, 0, 2.5}, 1.5, 0.2);
  CHECK(r.counts.tp == 2);
  CHECK(r.counts.fp == 1);
  const auto j = nlohmann::json::parse(to_json(r));
  CHECK(j["tpr"].get<double>() == doctest::Approx(2.0 / 3.0));
  CHECK(j["counts"]["fn"].get<int>() == 1);
  CHECK(to_csv_row(r).find(',') != std::string::npos);
  CHECK(csv_header().rfind("tau,", 0) == 0);

  const auto zero = evaluate_scores(V{1}, V{0}, 0.5, 0.0);
  CHECK(std::isnan(zero.np_score));
  CHECK(nlohmann::json::parse(to_json(zero))["np_score"].is_null());
}
