#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "geoeval/forest.hpp"
#include "geoeval/grid.hpp"
#include "geoeval/matrix.hpp"

namespace geoeval {

// Adversarial-validation dataset: sample rows labeled 1, prediction-location
// rows labeled 0, one row of each class per balanced pair. `origin` holds the
// row's index within its source set.
struct AVDataset {
  Matrix features;
  std::vector<int> labels;
  std::vector<std::size_t> origin;

  std::size_t size() const { return labels.size(); }
};

struct DavConfig {
  ForestConfig forest;
  std::uint64_t seed = 0;
  std::size_t repeats = 1;
};

struct RepeatScore {
  double auc = 0.0;
  double d = 0.0;
};

struct DissimilarityScore {
  double auc = 0.0;  // mean over repeats
  double d = 0.0;    // normalize_auc(auc)
  std::vector<RepeatScore> per_repeat;
  bool balanced_fallback = false;  // fewer prediction locations than samples
};

// Uniform subsample of n locations without replacement, class-balance step of
// the dissimilarity pipeline.
PredictionSet subsample_predictions(const PredictionSet& preds, std::size_t n,
                                    std::uint64_t seed);

// Joins the two sets into one labeled table. Targets never enter the
// features; covariate schemas must match exactly (names and order).
AVDataset build_av_dataset(const SampleSet& samples, const PredictionSet& pred_subset);

// Random shuffle, then first half train / second half test.
std::pair<AVDataset, AVDataset> split_av(const AVDataset& av, std::uint64_t seed);

// Piecewise-linear map from AUC to a dissimilarity percentage:
// ((auc - 0.5) / 0.5) * 100 above 0.5, exactly 0 at or below it.
double normalize_auc(double auc);

// The full pipeline: balance classes, assemble, split, train the adversarial
// classifier, score the held-out half, normalize. With repeats > 1 the AUCs
// are averaged before normalization.
DissimilarityScore quantify_dissimilarity(const SampleSet& samples, const PredictionSet& preds,
                                          const DavConfig& cfg);

}  // namespace geoeval
