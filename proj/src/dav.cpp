#include "geoeval/dav.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "geoeval/errors.hpp"
#include "geoeval/metrics.hpp"
#include "geoeval/rng.hpp"

namespace geoeval {

namespace {

SampleSet subsample_samples(const SampleSet& samples, std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  const std::vector<std::size_t> keep = rng.sample_without_replacement(samples.size(), n);
  SampleSet out;
  out.covariate_names = samples.covariate_names;
  out.features = Matrix(0, samples.features.cols);
  for (std::size_t i : keep) {
    out.locations.push_back(samples.locations[i]);
    out.features.append_row(samples.features.row_ptr(i));
    out.target.push_back(samples.target[i]);
  }
  return out;
}

}  // namespace

PredictionSet subsample_predictions(const PredictionSet& preds, std::size_t n,
                                    std::uint64_t seed) {
  if (n > preds.size())
    throw InsufficientDataError("subsample of " + std::to_string(n) + " from " +
                                std::to_string(preds.size()) + " prediction locations");
  Rng rng(seed);
  const std::vector<std::size_t> keep = rng.sample_without_replacement(preds.size(), n);
  PredictionSet out;
  out.covariate_names = preds.covariate_names;
  out.features = Matrix(0, preds.features.cols);
  for (std::size_t i : keep) {
    out.locations.push_back(preds.locations[i]);
    out.features.append_row(preds.features.row_ptr(i));
    out.target_truth.push_back(preds.target_truth[i]);
  }
  return out;
}

AVDataset build_av_dataset(const SampleSet& samples, const PredictionSet& pred_subset) {
  if (samples.covariate_names != pred_subset.covariate_names)
    throw ShapeError("sample and prediction covariate schemas differ");
  if (samples.size() != pred_subset.size())
    throw ShapeError("adversarial dataset needs equally sized classes");

  AVDataset av;
  av.features = Matrix(0, samples.features.cols);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    av.features.append_row(samples.features.row_ptr(i));
    av.labels.push_back(1);
    av.origin.push_back(i);
  }
  for (std::size_t i = 0; i < pred_subset.size(); ++i) {
    av.features.append_row(pred_subset.features.row_ptr(i));
    av.labels.push_back(0);
    av.origin.push_back(i);
  }
  return av;
}

std::pair<AVDataset, AVDataset> split_av(const AVDataset& av, std::uint64_t seed) {
  const std::size_t n = av.size();
  if (n < 4) throw InsufficientDataError("adversarial dataset needs at least 4 rows to split");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(seed);
  rng.shuffle(order);

  const std::size_t half = n / 2;
  AVDataset train, test;
  train.features = Matrix(0, av.features.cols);
  test.features = Matrix(0, av.features.cols);
  for (std::size_t pos = 0; pos < n; ++pos) {
    AVDataset& dst = pos < half ? train : test;
    const std::size_t i = order[pos];
    dst.features.append_row(av.features.row_ptr(i));
    dst.labels.push_back(av.labels[i]);
    dst.origin.push_back(av.origin[i]);
  }
  return {std::move(train), std::move(test)};
}

double normalize_auc(double auc) {
  if (!(auc >= 0.0 && auc <= 1.0))
    throw RangeError("auc outside [0,1]: " + std::to_string(auc));
  if (auc <= 0.5) return 0.0;
  return (auc - 0.5) / 0.5 * 100.0;
}

DissimilarityScore quantify_dissimilarity(const SampleSet& samples, const PredictionSet& preds,
                                          const DavConfig& cfg) {
  if (samples.size() < 2) throw InsufficientDataError("dissimilarity needs at least 2 samples");
  if (samples.features.cols < 1) throw ShapeError("dissimilarity needs at least 1 covariate");
  if (cfg.repeats < 1) throw ValueError("repeats must be >= 1");

  DissimilarityScore score;
  // Class balance: normally the prediction locations are subsampled down to
  // the sample count; when there are fewer locations than samples, balance
  // the other way and flag it.
  const std::size_t n = std::min(samples.size(), preds.size());
  score.balanced_fallback = preds.size() < samples.size();
  if (n < 2) throw InsufficientDataError("dissimilarity needs at least 2 prediction locations");

  double auc_sum = 0.0;
  for (std::size_t r = 0; r < cfg.repeats; ++r) {
    bool done = false;
    for (std::uint64_t attempt = 0; attempt < 10 && !done; ++attempt) {
      const std::uint64_t rep_seed = derive_seed(cfg.seed, {r, attempt});
      const PredictionSet pred_subset =
          score.balanced_fallback ? preds : subsample_predictions(preds, n, derive_seed(rep_seed, 0));
      const SampleSet sample_subset =
          score.balanced_fallback ? subsample_samples(samples, n, derive_seed(rep_seed, 0))
                                  : samples;

      const AVDataset av = build_av_dataset(sample_subset, pred_subset);
      const auto [train, test] = split_av(av, derive_seed(rep_seed, 1));

      ForestConfig fc = cfg.forest;
      fc.seed = derive_seed(rep_seed, 2);
      const ForestModel model = train_classifier(train.features, train.labels, fc);
      const std::vector<double> probs = predict_proba(model, test.features);
      try {
        const double auc = roc_auc(test.labels, probs);
        score.per_repeat.push_back({auc, normalize_auc(auc)});
        auc_sum += auc;
        done = true;
      } catch (const UndefinedAucError&) {
        // Single-label test half; redraw with the next derived seed.
      }
    }
    if (!done)
      throw UndefinedAucError("test half single-labeled on 10 consecutive redraws");
  }

  score.auc = auc_sum / cfg.repeats;
  score.d = normalize_auc(score.auc);
  return score;
}

}  // namespace geoeval
