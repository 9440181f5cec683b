#pragma once

#include <cstddef>
#include <utility>
#include <vector>

namespace geoeval {

// ROC curve points, one per distinct score threshold, plus the (0,0) and
// (1,1) endpoints. FPR and TPR are non-decreasing along the curve.
struct RocPoint {
  double fpr = 0.0;
  double tpr = 0.0;
};

struct RocCurve {
  std::vector<RocPoint> points;
};

RocCurve roc_curve(const std::vector<int>& labels, const std::vector<double>& scores);

// Trapezoidal area under the ROC curve. Tied scores contribute diagonal
// segments, which matches the Mann-Whitney 0.5-per-tie pair count exactly.
// Throws UndefinedAucError when only one label is present.
double roc_auc(const std::vector<int>& labels, const std::vector<double>& scores);

double rmse(const std::vector<double>& truth, const std::vector<double>& pred);

// Signed evaluation gap: actual minus CV-estimated error. Positive means the
// CV estimate was optimistic, negative pessimistic.
double rmse_diff(double rmse_actual, double rmse_cv);

// One dissimilarity bin: mean |rmse_diff| per CV method over the tasks whose
// dissimilarity falls in [bin_low, bin_high).
struct BinnedRecord {
  double bin_low = 0.0;
  double bin_high = 0.0;
  std::size_t count = 0;
  std::vector<double> mean_abs_diff;  // one entry per method
};

// Bins (dissimilarity, per-method rmse_diff) records into fixed-width
// percentage bins; the top bin is closed so d=100 is representable. Absolute
// values are averaged inside each bin; empty bins are omitted.
std::vector<BinnedRecord> bin_abs_diff(
    const std::vector<std::pair<double, std::vector<double>>>& records,
    double width = 1.0);

}  // namespace geoeval
