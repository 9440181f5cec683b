#include <cmath>
#include <limits>
#include <vector>

#include "doctest.h"
#include "geoeval/errors.hpp"
#include "geoeval/metrics.hpp"
#include "geoeval/rng.hpp"

using namespace geoeval;

namespace {

// Independent AUC oracle: Mann-Whitney pair counting with half credit for
// tied scores. O(n_pos * n_neg), no sorting, no trapezoids.
double auc_pair_oracle(const std::vector<int>& labels, const std::vector<double>& scores) {
  double wins = 0.0;
  std::size_t pairs = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] != 1) continue;
    for (std::size_t j = 0; j < labels.size(); ++j) {
      if (labels[j] != 0) continue;
      ++pairs;
      if (scores[i] > scores[j])
        wins += 1.0;
      else if (scores[i] == scores[j])
        wins += 0.5;
    }
  }
  return wins / pairs;
}

}  // namespace

TEST_SUITE("metrics") {

TEST_CASE("rmse of a known residual pattern") {
  // Squared residuals 9,16,9,16 average to 12.5.
  const std::vector<double> truth = {0, 0, 0, 0};
  const std::vector<double> pred = {3, 4, -3, -4};
  CHECK(rmse(truth, pred) == doctest::Approx(std::sqrt(12.5)).epsilon(1e-15));
  CHECK(rmse(truth, truth) == 0.0);
}

TEST_CASE("rmse rejects bad input") {
  CHECK_THROWS_AS(rmse({1, 2}, {1}), ShapeError);
  CHECK_THROWS_AS(rmse({}, {}), InsufficientDataError);
  CHECK_THROWS_AS(rmse({1.0}, {std::numeric_limits<double>::quiet_NaN()}), ValueError);
  CHECK_THROWS_AS(rmse({std::numeric_limits<double>::infinity()}, {1.0}), ValueError);
}

TEST_CASE("rmse_diff is signed actual minus estimated") {
  CHECK(rmse_diff(2.0, 1.5) == 0.5);   // optimistic estimate
  CHECK(rmse_diff(1.0, 1.25) == -0.25);  // pessimistic estimate
}

TEST_CASE("roc_auc on the classic four-point example") {
  // Positive scores {0.35, 0.8} vs negative {0.1, 0.4}: three of four
  // cross-class pairs rank correctly.
  const std::vector<int> labels = {0, 0, 1, 1};
  const std::vector<double> scores = {0.1, 0.4, 0.35, 0.8};
  CHECK(roc_auc(labels, scores) == doctest::Approx(0.75).epsilon(1e-15));
}

TEST_CASE("roc_auc endpoints: perfect, inverted, constant") {
  const std::vector<int> labels = {0, 0, 1, 1};
  CHECK(roc_auc(labels, {0.1, 0.2, 0.8, 0.9}) == 1.0);
  CHECK(roc_auc(labels, {0.8, 0.9, 0.1, 0.2}) == 0.0);
  CHECK(roc_auc(labels, {0.5, 0.5, 0.5, 0.5}) == 0.5);
}

TEST_CASE("roc_auc input validation") {
  CHECK_THROWS_AS(roc_auc({1, 1}, {0.5, 0.6}), UndefinedAucError);
  CHECK_THROWS_AS(roc_auc({0, 0}, {0.5, 0.6}), UndefinedAucError);
  CHECK_THROWS_AS(roc_auc({0, 2}, {0.5, 0.6}), ValueError);
  CHECK_THROWS_AS(roc_auc({0, 1}, {0.5}), ShapeError);
  CHECK_THROWS_AS(roc_auc({}, {}), InsufficientDataError);
}

TEST_CASE("roc_curve is a monotone path from (0,0) to (1,1)") {
  const std::vector<int> labels = {0, 1, 0, 1, 1, 0, 0, 1};
  const std::vector<double> scores = {0.2, 0.9, 0.4, 0.4, 0.7, 0.7, 0.1, 0.3};
  const RocCurve curve = roc_curve(labels, scores);
  REQUIRE(curve.points.size() >= 2);
  CHECK(curve.points.front().fpr == 0.0);
  CHECK(curve.points.front().tpr == 0.0);
  CHECK(curve.points.back().fpr == 1.0);
  CHECK(curve.points.back().tpr == 1.0);
  for (std::size_t i = 1; i < curve.points.size(); ++i) {
    CHECK(curve.points[i].fpr >= curve.points[i - 1].fpr);
    CHECK(curve.points[i].tpr >= curve.points[i - 1].tpr);
  }
}

TEST_CASE("trapezoidal AUC equals pair counting, ties included") {
  Rng rng(271);
  double max_err = 0.0;
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 2 + rng.below(80);
    std::vector<int> labels(n);
    std::vector<double> scores(n);
    labels[0] = 0;
    labels[1] = 1;  // both classes guaranteed
    for (std::size_t i = 2; i < n; ++i) labels[i] = static_cast<int>(rng.below(2));
    for (std::size_t i = 0; i < n; ++i)
      // Quantized scores force plenty of ties; an occasional fine value mixes
      // tied and untied thresholds.
      scores[i] = rng.below(3) == 0 ? rng.next_double() : rng.below(8) / 8.0;
    max_err = std::max(max_err,
                       std::abs(roc_auc(labels, scores) - auc_pair_oracle(labels, scores)));
  }
  CHECK(max_err <= 1e-12);
}

TEST_CASE("AUC is invariant under monotone score transforms") {
  Rng rng(272);
  const std::size_t n = 60;
  std::vector<int> labels(n);
  std::vector<double> scores(n), warped(n);
  labels[0] = 0;
  labels[1] = 1;
  for (std::size_t i = 2; i < n; ++i) labels[i] = static_cast<int>(rng.below(2));
  for (std::size_t i = 0; i < n; ++i) {
    scores[i] = rng.below(10) / 10.0;
    warped[i] = std::exp(3.0 * scores[i]) - 2.0;  // strictly increasing
  }
  CHECK(roc_auc(labels, scores) == roc_auc(labels, warped));
}

TEST_CASE("bin_abs_diff averages absolute gaps per dissimilarity bin") {
  const std::vector<std::pair<double, std::vector<double>>> records = {
      {0.2, {1.0, -2.0}}, {0.7, {-3.0, 4.0}}, {55.5, {0.5, 0.5}}};
  const std::vector<BinnedRecord> bins = bin_abs_diff(records, 1.0);
  REQUIRE(bins.size() == 2);  // empty bins are omitted
  CHECK(bins[0].bin_low == 0.0);
  CHECK(bins[0].bin_high == 1.0);
  CHECK(bins[0].count == 2);
  CHECK(bins[0].mean_abs_diff[0] == doctest::Approx(2.0));
  CHECK(bins[0].mean_abs_diff[1] == doctest::Approx(3.0));
  CHECK(bins[1].bin_low == 55.0);
  CHECK(bins[1].count == 1);
}

TEST_CASE("bin_abs_diff keeps the top edge closed") {
  const std::vector<BinnedRecord> bins = bin_abs_diff({{100.0, {1.0}}, {99.2, {3.0}}}, 1.0);
  REQUIRE(bins.size() == 1);
  CHECK(bins[0].bin_low == 99.0);
  CHECK(bins[0].bin_high == 100.0);
  CHECK(bins[0].count == 2);
}

TEST_CASE("bin_abs_diff validates its input") {
  CHECK_THROWS_AS(bin_abs_diff({{-0.5, {1.0}}}), RangeError);
  CHECK_THROWS_AS(bin_abs_diff({{100.5, {1.0}}}), RangeError);
  CHECK_THROWS_AS(bin_abs_diff({{1.0, {1.0}}, {2.0, {1.0, 2.0}}}), ShapeError);
  CHECK_THROWS_AS(bin_abs_diff({{1.0, {1.0}}}, 0.0), RangeError);
  CHECK(bin_abs_diff({}).empty());
}

}  // TEST_SUITE
