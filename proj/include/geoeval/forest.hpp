#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "geoeval/matrix.hpp"

namespace geoeval {

struct ForestConfig {
  std::size_t n_trees = 500;
  std::size_t mtry = 0;  // 0 = floor(sqrt(P)), at least 1
  std::size_t min_samples_split = 2;
  std::size_t max_depth = 0;  // 0 = unlimited
  bool bootstrap = true;
  std::uint64_t seed = 0;
};

// feature < 0 marks a leaf; `value` is the label-1 frequency (classification)
// or the mean target (regression).
struct TreeNode {
  int feature = -1;
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  double value = 0.0;
};

struct Tree {
  std::vector<TreeNode> nodes;

  double evaluate(const double* row) const {
    int at = 0;
    while (nodes[at].feature >= 0) {
      const TreeNode& nd = nodes[at];
      at = row[nd.feature] <= nd.threshold ? nd.left : nd.right;
    }
    return nodes[at].value;
  }
};

enum class ForestTask { classification, regression };

struct ForestModel {
  ForestTask task = ForestTask::classification;
  std::size_t p = 0;
  std::vector<Tree> trees;
  bool degenerate = false;      // classification only: single label in training data
  double degenerate_value = 0;  // the label every prediction reports when degenerate
  double target_min = 0.0;      // regression only
  double target_max = 0.0;

  // One node per line; stable within a version, used by the determinism tests.
  std::string serialize() const;
};

ForestModel train_classifier(const Matrix& features, const std::vector<int>& labels,
                             const ForestConfig& cfg);

std::vector<double> predict_proba(const ForestModel& model, const Matrix& features);

ForestModel train_regressor(const Matrix& features, const std::vector<double>& targets,
                            const ForestConfig& cfg);

std::vector<double> predict(const ForestModel& model, const Matrix& features);

}  // namespace geoeval
