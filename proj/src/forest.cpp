#include "geoeval/forest.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <utility>

#include "geoeval/errors.hpp"
#include "geoeval/parallel.hpp"
#include "geoeval/rng.hpp"

namespace geoeval {

namespace {

void check_finite_matrix(const Matrix& m, const char* what) {
  for (double v : m.data)
    if (!std::isfinite(v)) throw ValueError(std::string(what) + " contain non-finite values");
}

std::size_t resolve_mtry(const ForestConfig& cfg, std::size_t p) {
  std::size_t mtry = cfg.mtry;
  if (mtry == 0) mtry = std::max<std::size_t>(1, static_cast<std::size_t>(std::sqrt(static_cast<double>(p))));
  if (mtry < 1 || mtry > p) throw ValueError("mtry out of range [1, p]");
  if (cfg.n_trees < 1) throw ValueError("n_trees must be >= 1");
  if (cfg.min_samples_split < 2) throw ValueError("min_samples_split must be >= 2");
  return mtry;
}

// Rows sorted by content (features, then y) so bootstrap draws are invariant
// under permutations of the training rows.
std::vector<std::size_t> canonical_order(const Matrix& x, const std::vector<double>& y) {
  std::vector<std::size_t> idx(x.rows);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    const double* ra = x.row_ptr(a);
    const double* rb = x.row_ptr(b);
    for (std::size_t j = 0; j < x.cols; ++j)
      if (ra[j] != rb[j]) return ra[j] < rb[j];
    return y[a] < y[b];
  });
  return idx;
}

struct SplitChoice {
  bool found = false;
  int feature = -1;
  double threshold = 0.0;
  double gain = 0.0;
};

class TreeBuilder {
 public:
  TreeBuilder(const Matrix& x, const std::vector<double>& y, bool classification,
              std::size_t mtry, std::size_t min_split, std::size_t max_depth, Rng rng)
      : x_(x), y_(y), classification_(classification), mtry_(mtry), min_split_(min_split),
        max_depth_(max_depth), rng_(rng) {}

  Tree build(std::vector<std::size_t> rows) {
    tree_.nodes.clear();
    grow(std::move(rows), 0);
    return std::move(tree_);
  }

 private:
  int grow(std::vector<std::size_t> rows, std::size_t depth) {
    const std::size_t n = rows.size();
    double sum = 0.0, ymin = y_[rows[0]], ymax = ymin;
    for (std::size_t r : rows) {
      sum += y_[r];
      ymin = std::min(ymin, y_[r]);
      ymax = std::max(ymax, y_[r]);
    }
    const double mean = sum / n;

    const bool pure = (ymin == ymax);
    bool stop = pure || n < min_split_ || (max_depth_ != 0 && depth >= max_depth_);

    SplitChoice best;
    if (!stop) {
      std::vector<std::size_t> cand = rng_.sample_without_replacement(x_.cols, mtry_);
      best = best_split(rows, cand, mean);
      if (!best.found && mtry_ < x_.cols) {
        // All sampled features constant here; widen so impure nodes keep
        // splitting whenever any feature still varies.
        std::vector<std::size_t> all(x_.cols);
        std::iota(all.begin(), all.end(), std::size_t{0});
        best = best_split(rows, all, mean);
      }
      stop = !best.found;
    }

    if (stop) {
      const int id = static_cast<int>(tree_.nodes.size());
      TreeNode leaf;
      leaf.value = mean;
      tree_.nodes.push_back(leaf);
      return id;
    }

    std::vector<std::size_t> left, right;
    left.reserve(n);
    right.reserve(n);
    for (std::size_t r : rows)
      (x_(r, static_cast<std::size_t>(best.feature)) <= best.threshold ? left : right).push_back(r);
    rows.clear();
    rows.shrink_to_fit();

    const int id = static_cast<int>(tree_.nodes.size());
    TreeNode node;
    node.feature = best.feature;
    node.threshold = best.threshold;
    tree_.nodes.push_back(node);
    const int l = grow(std::move(left), depth + 1);
    const int r = grow(std::move(right), depth + 1);
    tree_.nodes[id].left = l;
    tree_.nodes[id].right = r;
    return id;
  }

  // Best (gain, feature, threshold); ties resolved to the lowest feature and
  // lowest threshold by scanning in ascending order with a strict comparison.
  SplitChoice best_split(const std::vector<std::size_t>& rows,
                         const std::vector<std::size_t>& features, double node_mean) {
    const std::size_t n = rows.size();
    SplitChoice best;
    double best_gain = -1.0;

    // Σy and Σy² over the node (targets centered by the node mean for
    // regression so the SSE arithmetic stays well conditioned).
    double total1 = 0.0, total2 = 0.0;
    for (std::size_t r : rows) {
      const double yv = classification_ ? y_[r] : y_[r] - node_mean;
      total1 += yv;
      total2 += yv * yv;
    }
    const double parent = classification_ ? 2.0 * total1 * (n - total1) / n
                                          : total2 - total1 * total1 / n;

    for (std::size_t f : features) {
      sorted_.clear();
      for (std::size_t r : rows)
        sorted_.push_back({x_(r, f), classification_ ? y_[r] : y_[r] - node_mean});
      std::sort(sorted_.begin(), sorted_.end(),
                [](const auto& a, const auto& b) { return a.first < b.first; });
      if (sorted_.front().first == sorted_.back().first) continue;

      double s1 = 0.0, s2 = 0.0;  // prefix Σy / Σy² over the sorted order
      for (std::size_t i = 1; i < n; ++i) {
        const double prev = sorted_[i - 1].first;
        s1 += sorted_[i - 1].second;
        s2 += sorted_[i - 1].second * sorted_[i - 1].second;
        const double cur = sorted_[i].first;
        if (cur == prev) continue;

        const double nl = static_cast<double>(i);
        const double nr = static_cast<double>(n - i);
        double child;
        if (classification_) {
          const double r1 = total1 - s1;
          child = 2.0 * s1 * (nl - s1) / nl + 2.0 * r1 * (nr - r1) / nr;
        } else {
          const double r1 = total1 - s1;
          child = (s2 - s1 * s1 / nl) + ((total2 - s2) - r1 * r1 / nr);
        }
        const double gain = parent - child;
        if (gain > best_gain) {
          double thr = prev + (cur - prev) * 0.5;
          if (!(thr > prev && thr < cur)) thr = prev;  // adjacent doubles
          best_gain = gain;
          best.found = true;
          best.feature = static_cast<int>(f);
          best.threshold = thr;
          best.gain = gain;
        }
      }
    }
    return best;
  }

  const Matrix& x_;
  const std::vector<double>& y_;
  bool classification_;
  std::size_t mtry_;
  std::size_t min_split_;
  std::size_t max_depth_;
  Rng rng_;
  Tree tree_;
  std::vector<std::pair<double, double>> sorted_;
};

ForestModel train_impl(const Matrix& features, const std::vector<double>& y, bool classification,
                       const ForestConfig& cfg) {
  if (features.rows != y.size()) throw ShapeError("feature rows and target length differ");
  if (features.rows < 2) throw InsufficientDataError("need at least 2 training rows");
  if (features.cols < 1) throw ShapeError("need at least 1 feature");
  check_finite_matrix(features, "features");
  for (double v : y)
    if (!std::isfinite(v)) throw ValueError("targets contain non-finite values");
  const std::size_t mtry = resolve_mtry(cfg, features.cols);

  const std::vector<std::size_t> canon = canonical_order(features, y);
  const std::size_t n = features.rows;

  ForestModel model;
  model.task = classification ? ForestTask::classification : ForestTask::regression;
  model.p = features.cols;
  model.trees.resize(cfg.n_trees);

  parallel_for(cfg.n_trees, [&](std::size_t t) {
    Rng rng(derive_seed(cfg.seed, {static_cast<std::uint64_t>(t)}));
    std::vector<std::size_t> rows;
    rows.reserve(n);
    if (cfg.bootstrap) {
      for (std::size_t i = 0; i < n; ++i) rows.push_back(canon[rng.below(n)]);
    } else {
      rows = canon;
    }
    TreeBuilder builder(features, y, classification, mtry, cfg.min_samples_split, cfg.max_depth,
                        rng);
    model.trees[t] = builder.build(std::move(rows));
  });
  return model;
}

void check_predict_input(const ForestModel& model, const Matrix& features, ForestTask expect) {
  if (model.task != expect) throw ValueError("model task does not match prediction call");
  if (features.cols != model.p) throw ShapeError("feature count differs from training");
  check_finite_matrix(features, "features");
}

}  // namespace

ForestModel train_classifier(const Matrix& features, const std::vector<int>& labels,
                             const ForestConfig& cfg) {
  std::vector<double> y(labels.size());
  std::size_t ones = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] != 0 && labels[i] != 1) throw ValueError("labels must be 0 or 1");
    y[i] = labels[i];
    ones += static_cast<std::size_t>(labels[i]);
  }
  ForestModel model = train_impl(features, y, true, cfg);
  if (ones == 0 || ones == labels.size()) {
    model.degenerate = true;
    model.degenerate_value = ones == 0 ? 0.0 : 1.0;
  }
  return model;
}

std::vector<double> predict_proba(const ForestModel& model, const Matrix& features) {
  check_predict_input(model, features, ForestTask::classification);
  std::vector<double> out(features.rows);
  if (model.degenerate) {
    std::fill(out.begin(), out.end(), model.degenerate_value);
    return out;
  }
  parallel_for(features.rows, [&](std::size_t i) {
    const double* row = features.row_ptr(i);
    double acc = 0.0;
    for (const Tree& tree : model.trees) acc += tree.evaluate(row);
    out[i] = std::clamp(acc / model.trees.size(), 0.0, 1.0);
  });
  return out;
}

ForestModel train_regressor(const Matrix& features, const std::vector<double>& targets,
                            const ForestConfig& cfg) {
  ForestModel model = train_impl(features, targets, false, cfg);
  model.target_min = *std::min_element(targets.begin(), targets.end());
  model.target_max = *std::max_element(targets.begin(), targets.end());
  return model;
}

std::vector<double> predict(const ForestModel& model, const Matrix& features) {
  check_predict_input(model, features, ForestTask::regression);
  std::vector<double> out(features.rows);
  parallel_for(features.rows, [&](std::size_t i) {
    const double* row = features.row_ptr(i);
    double acc = 0.0;
    for (const Tree& tree : model.trees) acc += tree.evaluate(row);
    out[i] = std::clamp(acc / model.trees.size(), model.target_min, model.target_max);
  });
  return out;
}

std::string ForestModel::serialize() const {
  std::string out;
  char buf[160];
  std::snprintf(buf, sizeof(buf), "forest task=%s p=%zu trees=%zu degenerate=%d\n",
                task == ForestTask::classification ? "classification" : "regression", p,
                trees.size(), degenerate ? 1 : 0);
  out += buf;
  for (std::size_t t = 0; t < trees.size(); ++t) {
    std::snprintf(buf, sizeof(buf), "tree %zu nodes=%zu\n", t, trees[t].nodes.size());
    out += buf;
    for (std::size_t i = 0; i < trees[t].nodes.size(); ++i) {
      const TreeNode& nd = trees[t].nodes[i];
      if (nd.feature < 0)
        std::snprintf(buf, sizeof(buf), "%zu leaf v=%.17g\n", i, nd.value);
      else
        std::snprintf(buf, sizeof(buf), "%zu split f=%d thr=%.17g l=%d r=%d\n", i, nd.feature,
                      nd.threshold, nd.left, nd.right);
      out += buf;
    }
  }
  return out;
}

}  // namespace geoeval
