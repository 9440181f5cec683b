#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "doctest.h"
#include "geoeval/errors.hpp"
#include "geoeval/forest.hpp"
#include "geoeval/metrics.hpp"
#include "geoeval/rng.hpp"
#include "helpers.hpp"

using namespace geoeval;

namespace {

struct Blobs {
  Matrix features;
  std::vector<int> labels;
};

// Two well-separated Gaussian blobs in p dimensions.
Blobs make_blobs(std::size_t per_class, std::size_t p, double gap, std::uint64_t seed) {
  Rng rng(seed);
  Blobs b;
  b.features = Matrix(2 * per_class, p);
  for (std::size_t i = 0; i < 2 * per_class; ++i) {
    const int label = i < per_class ? 0 : 1;
    b.labels.push_back(label);
    for (std::size_t j = 0; j < p; ++j) b.features(i, j) = rng.normal() + label * gap;
  }
  return b;
}

}  // namespace

TEST_SUITE("forest") {

TEST_CASE("training is deterministic, retraining matches bit for bit") {
  const Blobs b = make_blobs(40, 3, 2.0, 5);
  ForestConfig cfg;
  cfg.n_trees = 30;
  cfg.seed = 99;
  const ForestModel m1 = train_classifier(b.features, b.labels, cfg);
  const ForestModel m2 = train_classifier(b.features, b.labels, cfg);
  CHECK(m1.serialize() == m2.serialize());

  cfg.seed = 100;
  const ForestModel m3 = train_classifier(b.features, b.labels, cfg);
  CHECK(m1.serialize() != m3.serialize());
}

TEST_CASE("row order does not change the model") {
  const Blobs b = make_blobs(30, 2, 1.0, 7);
  const std::size_t n = b.labels.size();

  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  Rng rng(8);
  rng.shuffle(perm);
  Matrix shuffled(n, b.features.cols);
  std::vector<int> shuffled_labels(n);
  for (std::size_t i = 0; i < n; ++i) {
    shuffled_labels[i] = b.labels[perm[i]];
    for (std::size_t j = 0; j < b.features.cols; ++j) shuffled(i, j) = b.features(perm[i], j);
  }

  ForestConfig cfg;
  cfg.n_trees = 25;
  cfg.seed = 4;
  const ForestModel m1 = train_classifier(b.features, b.labels, cfg);
  const ForestModel m2 = train_classifier(shuffled, shuffled_labels, cfg);
  CHECK(m1.serialize() == m2.serialize());

  const Blobs queries = make_blobs(20, 2, 1.0, 9);
  CHECK(predict_proba(m1, queries.features) == predict_proba(m2, queries.features));
}

TEST_CASE("one unbootstrapped tree memorizes distinct rows exactly") {
  const std::size_t n = 24;
  Matrix x(n, 2);
  std::vector<double> y(n);
  std::vector<int> labels(n);
  for (std::size_t i = 0; i < n; ++i) {
    x(i, 0) = static_cast<double>(i);
    x(i, 1) = static_cast<double>((i * 13) % n);
    y[i] = 0.37 * i - 4.0;
    labels[i] = (i * 7) % 3 == 0 ? 1 : 0;
  }
  ForestConfig cfg;
  cfg.n_trees = 1;
  cfg.bootstrap = false;
  cfg.mtry = 2;

  const std::vector<double> fit = predict(train_regressor(x, y, cfg), x);
  for (std::size_t i = 0; i < n; ++i) CHECK(fit[i] == y[i]);

  const std::vector<double> proba = predict_proba(train_classifier(x, labels, cfg), x);
  for (std::size_t i = 0; i < n; ++i) CHECK(proba[i] == static_cast<double>(labels[i]));
}

TEST_CASE("single-label training degenerates to a constant") {
  Matrix x = testutil::make_matrix({{0, 1}, {2, 3}, {4, 5}});
  ForestConfig cfg;
  cfg.n_trees = 5;

  const ForestModel ones = train_classifier(x, {1, 1, 1}, cfg);
  CHECK(ones.degenerate);
  for (double v : predict_proba(ones, x)) CHECK(v == 1.0);

  const ForestModel zeros = train_classifier(x, {0, 0, 0}, cfg);
  CHECK(zeros.degenerate);
  for (double v : predict_proba(zeros, x)) CHECK(v == 0.0);
}

TEST_CASE("well-separated classes are ranked almost perfectly") {
  const Blobs train = make_blobs(100, 4, 10.0, 21);
  const Blobs test = make_blobs(100, 4, 10.0, 22);
  ForestConfig cfg;
  cfg.n_trees = 100;
  cfg.seed = 1;
  const ForestModel m = train_classifier(train.features, train.labels, cfg);
  CHECK(roc_auc(test.labels, predict_proba(m, test.features)) >= 0.99);
}

TEST_CASE("outputs respect their bounds") {
  Rng rng(31);
  const std::size_t n = 80;
  Matrix x(n, 3);
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < 3; ++j) x(i, j) = rng.normal();
    y[i] = 5.0 * rng.next_double() - 2.0;
  }
  const double lo = *std::min_element(y.begin(), y.end());
  const double hi = *std::max_element(y.begin(), y.end());

  ForestConfig cfg;
  cfg.n_trees = 40;
  const ForestModel reg = train_regressor(x, y, cfg);
  CHECK(reg.target_min == lo);
  CHECK(reg.target_max == hi);

  Matrix far(50, 3);
  for (std::size_t i = 0; i < far.rows; ++i)
    for (std::size_t j = 0; j < 3; ++j) far(i, j) = 40.0 * rng.normal();
  for (double v : predict(reg, far)) {
    CHECK(v >= lo);
    CHECK(v <= hi);
  }

  const Blobs b = make_blobs(40, 3, 0.5, 33);
  const ForestModel cls = train_classifier(b.features, b.labels, cfg);
  for (double v : predict_proba(cls, far)) {
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
  }
}

TEST_CASE("a query in the class gap gets an uncommitted probability") {
  // One feature, classes mirrored around 5 with a (4,6) gap. Each bootstrap
  // puts the lone split midway between the classes it sampled, so the
  // ensemble probability at exactly 5 should hover near one half.
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    Rng rng(derive_seed(1234, seed));
    const std::size_t per_class = 30;
    Matrix x(2 * per_class, 1);
    std::vector<int> labels(2 * per_class);
    for (std::size_t i = 0; i < per_class; ++i) {
      const double jitter = 1.0 + 3.0 * rng.next_double();  // in [1,4)
      x(i, 0) = 5.0 - jitter;
      x(per_class + i, 0) = 5.0 + jitter;
      labels[i] = 0;
      labels[per_class + i] = 1;
    }
    ForestConfig cfg;
    cfg.n_trees = 200;
    cfg.seed = derive_seed(4321, seed);
    const ForestModel m = train_classifier(x, labels, cfg);
    Matrix query(1, 1);
    query(0, 0) = 5.0;
    const double p = predict_proba(m, query)[0];
    CHECK(p >= 0.2);
    CHECK(p <= 0.8);
  }
}

TEST_CASE("regression averages trees and is deterministic") {
  Rng rng(77);
  const std::size_t n = 60;
  Matrix x(n, 2);
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    x(i, 0) = rng.normal();
    x(i, 1) = rng.normal();
    y[i] = 2.0 * x(i, 0) - x(i, 1) + 0.1 * rng.normal();
  }
  ForestConfig cfg;
  cfg.n_trees = 50;
  cfg.seed = 3;
  const ForestModel m1 = train_regressor(x, y, cfg);
  const ForestModel m2 = train_regressor(x, y, cfg);
  CHECK(predict(m1, x) == predict(m2, x));
  // The fit should comfortably beat predicting the mean.
  const double mean = std::accumulate(y.begin(), y.end(), 0.0) / n;
  CHECK(rmse(y, predict(m1, x)) < rmse(y, std::vector<double>(n, mean)) * 0.6);
}

TEST_CASE("invalid training input is rejected") {
  Matrix x = testutil::make_matrix({{0, 1}, {2, 3}, {4, 5}, {6, 7}});
  const std::vector<int> labels = {0, 1, 0, 1};
  ForestConfig cfg;
  cfg.n_trees = 3;

  Matrix bad = x;
  bad(1, 1) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(train_classifier(bad, labels, cfg), ValueError);
  CHECK_THROWS_AS(train_classifier(x, {0, 1, 0, 2}, cfg), ValueError);
  CHECK_THROWS_AS(train_classifier(x, {0, 1, 0}, cfg), ShapeError);
  CHECK_THROWS_AS(train_regressor(x, {1.0, 2.0}, cfg), ShapeError);
  CHECK_THROWS_AS(
      train_regressor(x, {1.0, 2.0, std::numeric_limits<double>::infinity(), 4.0}, cfg),
      ValueError);

  Matrix one_row(1, 2);
  CHECK_THROWS_AS(train_classifier(one_row, {1}, cfg), InsufficientDataError);

  ForestConfig bad_cfg = cfg;
  bad_cfg.mtry = 5;  // only 2 features
  CHECK_THROWS_AS(train_classifier(x, labels, bad_cfg), ValueError);
  bad_cfg = cfg;
  bad_cfg.n_trees = 0;
  CHECK_THROWS_AS(train_classifier(x, labels, bad_cfg), ValueError);

  const ForestModel reg = train_regressor(x, {1.0, 2.0, 3.0, 4.0}, cfg);
  Matrix wrong_width(2, 3);
  CHECK_THROWS_AS(predict(reg, wrong_width), ShapeError);
  CHECK_THROWS_AS(predict_proba(reg, x), ValueError);  // task mismatch
}

}  // TEST_SUITE
