#include "geoeval/cv.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <numeric>
#include <utility>

#include "geoeval/clustering.hpp"
#include "geoeval/errors.hpp"
#include "geoeval/metrics.hpp"
#include "geoeval/rng.hpp"

namespace geoeval {

namespace {

void check_split_args(std::size_t n, std::size_t k) {
  if (k < 1) throw ValueError("k must be >= 1");
  if (n < k) throw InsufficientDataError("fewer samples than folds");
}

// Column-standardized copy; constant columns become all-zero.
Matrix standardized(const Matrix& m) {
  Matrix out(m.rows, m.cols);
  for (std::size_t j = 0; j < m.cols; ++j) {
    double sum = 0.0;
    for (std::size_t i = 0; i < m.rows; ++i) sum += m(i, j);
    const double mean = sum / m.rows;
    double ss = 0.0;
    for (std::size_t i = 0; i < m.rows; ++i) {
      const double d = m(i, j) - mean;
      ss += d * d;
    }
    const double sd = std::sqrt(ss / m.rows);
    for (std::size_t i = 0; i < m.rows; ++i)
      out(i, j) = sd > 0.0 ? (m(i, j) - mean) / sd : 0.0;
  }
  return out;
}

Matrix coordinates_of(const SampleSet& samples) {
  Matrix coords(samples.size(), 2);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    coords(i, 0) = cell_center_y(samples.locations[i]);
    coords(i, 1) = cell_center_x(samples.locations[i]);
  }
  return coords;
}

}  // namespace

const char* cv_method_name(CvMethod m) {
  switch (m) {
    case CvMethod::rdm: return "rdm";
    case CvMethod::blk: return "blk";
    default: return "sp";
  }
}

FoldAssignment split_random(std::size_t n, std::size_t k, std::uint64_t seed) {
  check_split_args(n, k);
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  Rng rng(seed);
  rng.shuffle(perm);

  FoldAssignment fa;
  fa.method = CvMethod::rdm;
  fa.k = k;
  fa.fold_of.assign(n, 0);
  const std::size_t base = n / k, extra = n % k;
  std::size_t pos = 0;
  for (std::size_t f = 0; f < k; ++f) {
    const std::size_t len = base + (f < extra ? 1 : 0);
    for (std::size_t i = 0; i < len; ++i) fa.fold_of[perm[pos++]] = static_cast<int>(f);
  }
  return fa;
}

FoldAssignment split_block(const SampleSet& samples, double block_side, std::size_t k,
                           std::uint64_t seed) {
  const std::size_t n = samples.size();
  check_split_args(n, k);
  if (!(block_side > 0.0)) throw ValueError("block_side must be positive");

  double miny = std::numeric_limits<double>::infinity(), minx = miny;
  for (const Location& loc : samples.locations) {
    miny = std::min(miny, cell_center_y(loc));
    minx = std::min(minx, cell_center_x(loc));
  }

  double side = block_side;
  std::vector<std::pair<long, long>> tile(n);
  std::map<std::pair<long, long>, int> block_ids;
  for (int attempt = 0;; ++attempt) {
    block_ids.clear();
    for (std::size_t i = 0; i < n; ++i) {
      tile[i] = {static_cast<long>(std::floor((cell_center_y(samples.locations[i]) - miny) / side)),
                 static_cast<long>(std::floor((cell_center_x(samples.locations[i]) - minx) / side))};
      block_ids.emplace(tile[i], 0);
    }
    if (block_ids.size() >= k) break;
    if (attempt >= 5)
      throw InsufficientDataError("could not tile samples into at least k blocks");
    side *= 0.5;
  }

  // Canonical block ids by tile order, then a seeded random fold deal.
  int next_id = 0;
  for (auto& [key, id] : block_ids) id = next_id++;
  std::vector<int> order(block_ids.size());
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  rng.shuffle(order);
  std::vector<int> fold_of_block(block_ids.size());
  for (std::size_t pos = 0; pos < order.size(); ++pos)
    fold_of_block[order[pos]] = static_cast<int>(pos % k);

  FoldAssignment fa;
  fa.method = CvMethod::blk;
  fa.k = k;
  fa.block_side = side;
  fa.fold_of.resize(n);
  fa.block_of.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const int b = block_ids[tile[i]];
    fa.block_of[i] = b;
    fa.fold_of[i] = fold_of_block[b];
  }
  return fa;
}

FoldAssignment split_spatial_plus(const SampleSet& samples, std::size_t k, std::uint64_t seed) {
  const std::size_t n = samples.size();
  check_split_args(n, k);

  const std::size_t b = std::min<std::size_t>(10 * k, n);
  const Matrix coords = coordinates_of(samples);
  const Labeling blocks = ahc(standardized(coords), b);

  // Per-block aggregates for the three ensemble views: mean coordinates,
  // mean standardized covariates, mean standardized target.
  const Matrix zcov = standardized(samples.features);
  Matrix ztarget(n, 1);
  for (std::size_t i = 0; i < n; ++i) ztarget(i, 0) = samples.target[i];
  ztarget = standardized(ztarget);

  std::vector<std::size_t> count(b, 0);
  Matrix agg_coord(b, 2, 0.0), agg_cov(b, zcov.cols, 0.0), agg_target(b, 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t blk = static_cast<std::size_t>(blocks.labels[i]);
    ++count[blk];
    for (std::size_t j = 0; j < 2; ++j) agg_coord(blk, j) += coords(i, j);
    for (std::size_t j = 0; j < zcov.cols; ++j) agg_cov(blk, j) += zcov(i, j);
    agg_target(blk, 0) += ztarget(i, 0);
  }
  for (std::size_t blk = 0; blk < b; ++blk) {
    for (std::size_t j = 0; j < 2; ++j) agg_coord(blk, j) /= count[blk];
    for (std::size_t j = 0; j < zcov.cols; ++j) agg_cov(blk, j) /= count[blk];
    agg_target(blk, 0) /= count[blk];
  }

  std::vector<Labeling> views;
  views.push_back(kmeans(agg_coord, k, derive_seed(seed, 1)));
  views.push_back(kmeans(agg_cov, k, derive_seed(seed, 2)));
  views.push_back(kmeans(agg_target, k, derive_seed(seed, 3)));
  const Labeling folds = cluster_ensemble(views, k, derive_seed(seed, 4));

  FoldAssignment fa;
  fa.method = CvMethod::sp;
  fa.k = k;
  fa.fold_of.resize(n);
  fa.block_of = blocks.labels;
  for (std::size_t i = 0; i < n; ++i) fa.fold_of[i] = folds.labels[blocks.labels[i]];
  return fa;
}

CVResult run_cv(const SampleSet& samples, const FoldAssignment& fa, const ForestConfig& cfg) {
  const std::size_t n = samples.size();
  if (fa.size() != n) throw ShapeError("fold assignment does not cover the samples");
  if (fa.k < 2) throw ValueError("cross-validation needs k >= 2");

  std::vector<std::size_t> sizes(fa.k, 0);
  for (int f : fa.fold_of) {
    if (f < 0 || static_cast<std::size_t>(f) >= fa.k) throw ValueError("fold id out of range");
    ++sizes[f];
  }
  for (std::size_t f = 0; f < fa.k; ++f)
    if (sizes[f] == n) throw InsufficientDataError("a fold holds every sample");

  CVResult result;
  result.predicted.assign(n, 0.0);
  result.per_fold_sizes = sizes;

  for (std::size_t f = 0; f < fa.k; ++f) {
    if (sizes[f] == 0) continue;
    Matrix train_x(0, samples.features.cols), test_x(0, samples.features.cols);
    std::vector<double> train_y;
    std::vector<std::size_t> test_rows;
    for (std::size_t i = 0; i < n; ++i) {
      if (fa.fold_of[i] == static_cast<int>(f)) {
        test_x.append_row(samples.features.row_ptr(i));
        test_rows.push_back(i);
      } else {
        train_x.append_row(samples.features.row_ptr(i));
        train_y.push_back(samples.target[i]);
      }
    }
    ForestConfig fold_cfg = cfg;
    fold_cfg.seed = derive_seed(cfg.seed, f);
    const ForestModel model = train_regressor(train_x, train_y, fold_cfg);
    const std::vector<double> pred = predict(model, test_x);
    for (std::size_t t = 0; t < test_rows.size(); ++t) result.predicted[test_rows[t]] = pred[t];
  }

  result.rmse_cv = rmse(samples.target, result.predicted);
  return result;
}

std::string folds_to_csv(const FoldAssignment& fa) {
  std::string out;
  const bool with_blocks = !fa.block_of.empty();
  out += with_blocks ? "sample_index,fold,block_id\n" : "sample_index,fold\n";
  char buf[96];
  for (std::size_t i = 0; i < fa.size(); ++i) {
    if (with_blocks)
      std::snprintf(buf, sizeof(buf), "%zu,%d,%d\n", i, fa.fold_of[i], fa.block_of[i]);
    else
      std::snprintf(buf, sizeof(buf), "%zu,%d\n", i, fa.fold_of[i]);
    out += buf;
  }
  return out;
}

}  // namespace geoeval
