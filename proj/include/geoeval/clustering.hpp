#pragma once

#include <cstdint>
#include <vector>

#include "geoeval/matrix.hpp"

namespace geoeval {

// A total partition: labels[i] in [0,k), every cluster nonempty.
struct Labeling {
  std::vector<int> labels;
  std::size_t k = 0;
};

struct KmeansResult {
  Labeling labeling;
  Matrix centroids;                      // k x d
  std::vector<double> objective_trace;   // within-cluster SSE after each iteration
};

// Lloyd's algorithm from a k-means++ initialization, run until the
// assignment reaches a fixpoint (or 300 iterations). Empty clusters are
// repaired by reseeding on the point farthest from its centroid.
KmeansResult kmeans_detailed(const Matrix& points, std::size_t k, std::uint64_t seed);
Labeling kmeans(const Matrix& points, std::size_t k, std::uint64_t seed);

// Agglomerative hierarchical clustering under Ward's minimum-variance
// criterion, merged down to n_clusters. Points are canonically sorted before
// index-based tie-breaking, so relabeling the input rows permutes the output
// labels identically.
Labeling ahc(const Matrix& points, std::size_t n_clusters);

// Agglomerative clustering with average linkage over an explicit symmetric
// dissimilarity matrix (used by the cluster ensemble). Ties break toward the
// smallest index pair.
Labeling ahc_from_dissimilarity(const Matrix& dissimilarity, std::size_t n_clusters);

// Fraction of views that place each pair of items in the same cluster.
Matrix co_association(const std::vector<Labeling>& views);

// Consensus of the views: average-linkage AHC on (1 - co-association) down to
// k groups, then a greedy rebalance so no group exceeds ceil(2B/k) items.
// Deterministic; the seed parameter is accepted for interface stability but
// unused.
Labeling cluster_ensemble(const std::vector<Labeling>& views, std::size_t k,
                          std::uint64_t seed);

}  // namespace geoeval
