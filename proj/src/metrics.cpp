#include "geoeval/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "geoeval/errors.hpp"

namespace geoeval {

namespace {

void check_roc_inputs(const std::vector<int>& labels, const std::vector<double>& scores,
                      std::size_t& n_pos, std::size_t& n_neg) {
  if (labels.size() != scores.size()) throw ShapeError("labels and scores differ in length");
  if (labels.empty()) throw InsufficientDataError("empty input to ROC");
  n_pos = 0;
  n_neg = 0;
  for (int l : labels) {
    if (l == 1)
      ++n_pos;
    else if (l == 0)
      ++n_neg;
    else
      throw ValueError("labels must be 0 or 1");
  }
  if (n_pos == 0 || n_neg == 0)
    throw UndefinedAucError("AUC undefined: only one label present");
}

}  // namespace

RocCurve roc_curve(const std::vector<int>& labels, const std::vector<double>& scores) {
  std::size_t n_pos = 0, n_neg = 0;
  check_roc_inputs(labels, scores, n_pos, n_neg);

  std::vector<std::size_t> order(labels.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return scores[a] > scores[b];
  });

  RocCurve curve;
  curve.points.push_back({0.0, 0.0});
  std::size_t tp = 0, fp = 0;
  std::size_t i = 0;
  while (i < order.size()) {
    const double s = scores[order[i]];
    // Consume the whole tie-group before emitting a point.
    while (i < order.size() && scores[order[i]] == s) {
      if (labels[order[i]] == 1)
        ++tp;
      else
        ++fp;
      ++i;
    }
    curve.points.push_back({static_cast<double>(fp) / n_neg, static_cast<double>(tp) / n_pos});
  }
  return curve;
}

double roc_auc(const std::vector<int>& labels, const std::vector<double>& scores) {
  const RocCurve curve = roc_curve(labels, scores);
  double area = 0.0;
  for (std::size_t i = 1; i < curve.points.size(); ++i) {
    const RocPoint& a = curve.points[i - 1];
    const RocPoint& b = curve.points[i];
    area += (b.fpr - a.fpr) * (a.tpr + b.tpr) * 0.5;
  }
  return area;
}

double rmse(const std::vector<double>& truth, const std::vector<double>& pred) {
  if (truth.size() != pred.size()) throw ShapeError("truth and pred differ in length");
  if (truth.empty()) throw InsufficientDataError("rmse of empty input");
  double acc = 0.0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (!std::isfinite(truth[i]) || !std::isfinite(pred[i]))
      throw ValueError("rmse requires finite values");
    const double d = truth[i] - pred[i];
    acc += d * d;
  }
  return std::sqrt(acc / truth.size());
}

double rmse_diff(double rmse_actual, double rmse_cv) { return rmse_actual - rmse_cv; }

std::vector<BinnedRecord> bin_abs_diff(
    const std::vector<std::pair<double, std::vector<double>>>& records, double width) {
  if (width <= 0.0 || width > 100.0) throw RangeError("bin width must be in (0,100]");
  if (records.empty()) return {};
  const std::size_t n_methods = records.front().second.size();
  const std::size_t n_bins = static_cast<std::size_t>(std::ceil(100.0 / width));

  std::vector<std::size_t> counts(n_bins, 0);
  std::vector<std::vector<double>> sums(n_bins, std::vector<double>(n_methods, 0.0));
  for (const auto& [d, diffs] : records) {
    if (!(d >= 0.0 && d <= 100.0))
      throw RangeError("dissimilarity outside [0,100]: " + std::to_string(d));
    if (diffs.size() != n_methods) throw ShapeError("records disagree on method count");
    std::size_t bin = static_cast<std::size_t>(d / width);
    if (bin >= n_bins) bin = n_bins - 1;  // top edge closed
    ++counts[bin];
    for (std::size_t m = 0; m < n_methods; ++m) sums[bin][m] += std::fabs(diffs[m]);
  }

  std::vector<BinnedRecord> out;
  for (std::size_t b = 0; b < n_bins; ++b) {
    if (counts[b] == 0) continue;
    BinnedRecord rec;
    rec.bin_low = b * width;
    rec.bin_high = std::min(100.0, (b + 1) * width);
    rec.count = counts[b];
    rec.mean_abs_diff.resize(n_methods);
    for (std::size_t m = 0; m < n_methods; ++m) rec.mean_abs_diff[m] = sums[b][m] / counts[b];
    out.push_back(std::move(rec));
  }
  return out;
}

}  // namespace geoeval
