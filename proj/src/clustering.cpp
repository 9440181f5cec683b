#include "geoeval/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "geoeval/errors.hpp"
#include "geoeval/rng.hpp"

namespace geoeval {

namespace {

double dist2(const double* a, const double* b, std::size_t d) {
  double acc = 0.0;
  for (std::size_t j = 0; j < d; ++j) {
    const double diff = a[j] - b[j];
    acc += diff * diff;
  }
  return acc;
}

// Shared agglomerative merge loop over a precomputed pairwise matrix. The
// Lance-Williams update is supplied by the caller (Ward or average linkage).
// Ties break toward the pair with the smallest (i, j).
template <typename Update>
std::vector<int> agglomerate(Matrix& dis, std::size_t n_clusters, Update update) {
  const std::size_t q = dis.rows;
  std::vector<bool> active(q, true);
  std::vector<double> size(q, 1.0);
  std::vector<int> rep(q);  // smallest member slot of each point's cluster
  std::iota(rep.begin(), rep.end(), 0);

  for (std::size_t remaining = q; remaining > n_clusters; --remaining) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t bi = 0, bj = 0;
    for (std::size_t i = 0; i < q; ++i) {
      if (!active[i]) continue;
      for (std::size_t j = i + 1; j < q; ++j) {
        if (!active[j]) continue;
        if (dis(i, j) < best) {
          best = dis(i, j);
          bi = i;
          bj = j;
        }
      }
    }
    for (std::size_t t = 0; t < q; ++t) {
      if (!active[t] || t == bi || t == bj) continue;
      const double merged = update(dis(std::min(bi, t), std::max(bi, t)),
                                   dis(std::min(bj, t), std::max(bj, t)), dis(bi, bj),
                                   size[bi], size[bj], size[t]);
      dis(std::min(bi, t), std::max(bi, t)) = merged;
    }
    size[bi] += size[bj];
    active[bj] = false;
    for (std::size_t s = 0; s < q; ++s)
      if (rep[s] == static_cast<int>(bj)) rep[s] = static_cast<int>(bi);
  }

  // Contiguous ids in order of first slot appearance (= ascending reps).
  std::vector<int> id_of(q, -1);
  int next = 0;
  std::vector<int> labels(q);
  for (std::size_t s = 0; s < q; ++s) {
    if (id_of[rep[s]] < 0) id_of[rep[s]] = next++;
    labels[s] = id_of[rep[s]];
  }
  return labels;
}

}  // namespace

KmeansResult kmeans_detailed(const Matrix& points, std::size_t k, std::uint64_t seed) {
  const std::size_t q = points.rows, d = points.cols;
  if (k < 1) throw ValueError("k must be >= 1");
  if (q < k) throw InsufficientDataError("fewer points than clusters");

  Rng rng(seed);
  Matrix centroids(k, d);

  // k-means++ seeding.
  std::vector<double> nearest(q, std::numeric_limits<double>::infinity());
  {
    const std::size_t first = static_cast<std::size_t>(rng.below(q));
    std::copy_n(points.row_ptr(first), d, centroids.row_ptr(0));
    for (std::size_t c = 1; c < k; ++c) {
      double total = 0.0;
      for (std::size_t i = 0; i < q; ++i) {
        nearest[i] = std::min(nearest[i], dist2(points.row_ptr(i), centroids.row_ptr(c - 1), d));
        total += nearest[i];
      }
      std::size_t pick;
      if (total > 0.0) {
        const double r = rng.next_double() * total;
        double cum = 0.0;
        pick = q - 1;
        for (std::size_t i = 0; i < q; ++i) {
          cum += nearest[i];
          if (cum > r) {
            pick = i;
            break;
          }
        }
      } else {
        pick = static_cast<std::size_t>(rng.below(q));
      }
      std::copy_n(points.row_ptr(pick), d, centroids.row_ptr(c));
    }
  }

  KmeansResult result;
  std::vector<int>& labels = result.labeling.labels;
  labels.assign(q, -1);
  std::vector<int> prev(q, -2);

  for (int iter = 0; iter < 300; ++iter) {
    bool changed = false;
    // Assignment: nearest centroid, ties to the lowest centroid index.
    for (std::size_t i = 0; i < q; ++i) {
      double best = std::numeric_limits<double>::infinity();
      int best_c = 0;
      for (std::size_t c = 0; c < k; ++c) {
        const double dd = dist2(points.row_ptr(i), centroids.row_ptr(c), d);
        if (dd < best) {
          best = dd;
          best_c = static_cast<int>(c);
        }
      }
      if (labels[i] != best_c) changed = true;
      labels[i] = best_c;
      nearest[i] = best;
    }

    // Repair empty clusters on the farthest point from its centroid.
    std::vector<std::size_t> count(k, 0);
    for (int l : labels) ++count[l];
    for (std::size_t c = 0; c < k; ++c) {
      if (count[c] > 0) continue;
      std::size_t far = 0;
      double far_d = -1.0;
      for (std::size_t i = 0; i < q; ++i) {
        if (count[labels[i]] <= 1) continue;  // don't orphan another cluster
        if (nearest[i] > far_d) {
          far_d = nearest[i];
          far = i;
        }
      }
      --count[labels[far]];
      labels[far] = static_cast<int>(c);
      ++count[c];
      nearest[far] = 0.0;
      changed = true;
    }

    // Update step.
    Matrix sums(k, d, 0.0);
    for (std::size_t i = 0; i < q; ++i)
      for (std::size_t j = 0; j < d; ++j) sums(labels[i], j) += points(i, j);
    for (std::size_t c = 0; c < k; ++c)
      for (std::size_t j = 0; j < d; ++j) centroids(c, j) = sums(c, j) / count[c];

    double objective = 0.0;
    for (std::size_t i = 0; i < q; ++i)
      objective += dist2(points.row_ptr(i), centroids.row_ptr(labels[i]), d);
    result.objective_trace.push_back(objective);

    if (!changed && labels == prev) break;
    prev = labels;
  }

  result.labeling.k = k;
  result.centroids = std::move(centroids);
  return result;
}

Labeling kmeans(const Matrix& points, std::size_t k, std::uint64_t seed) {
  return kmeans_detailed(points, k, seed).labeling;
}

Labeling ahc(const Matrix& points, std::size_t n_clusters) {
  const std::size_t q = points.rows;
  if (n_clusters < 1) throw ValueError("n_clusters must be >= 1");
  if (q < n_clusters) throw InsufficientDataError("fewer points than clusters");

  // Canonical slot order: sort by content so index tie-breaks are invariant
  // under input row permutations.
  std::vector<std::size_t> canon(q);
  std::iota(canon.begin(), canon.end(), std::size_t{0});
  std::sort(canon.begin(), canon.end(), [&](std::size_t a, std::size_t b) {
    const double* ra = points.row_ptr(a);
    const double* rb = points.row_ptr(b);
    for (std::size_t j = 0; j < points.cols; ++j)
      if (ra[j] != rb[j]) return ra[j] < rb[j];
    return false;
  });

  // Ward merge cost for singletons is half the squared distance; the
  // Lance-Williams update keeps the matrix in merge-cost terms.
  Matrix dis(q, q, 0.0);
  for (std::size_t i = 0; i < q; ++i)
    for (std::size_t j = i + 1; j < q; ++j)
      dis(i, j) = 0.5 * dist2(points.row_ptr(canon[i]), points.row_ptr(canon[j]), points.cols);

  const std::vector<int> slot_labels =
      agglomerate(dis, n_clusters, [](double dit, double djt, double dij, double ni, double nj,
                                      double nt) {
        return ((ni + nt) * dit + (nj + nt) * djt - nt * dij) / (ni + nj + nt);
      });

  Labeling out;
  out.k = n_clusters;
  out.labels.resize(q);
  for (std::size_t s = 0; s < q; ++s) out.labels[canon[s]] = slot_labels[s];
  return out;
}

Labeling ahc_from_dissimilarity(const Matrix& dissimilarity, std::size_t n_clusters) {
  if (dissimilarity.rows != dissimilarity.cols) throw ShapeError("dissimilarity must be square");
  const std::size_t q = dissimilarity.rows;
  if (n_clusters < 1) throw ValueError("n_clusters must be >= 1");
  if (q < n_clusters) throw InsufficientDataError("fewer items than clusters");

  Matrix dis = dissimilarity;
  const std::vector<int> labels =
      agglomerate(dis, n_clusters, [](double dit, double djt, double /*dij*/, double ni,
                                      double nj, double /*nt*/) {
        return (ni * dit + nj * djt) / (ni + nj);
      });

  Labeling out;
  out.k = n_clusters;
  out.labels = labels;
  return out;
}

Matrix co_association(const std::vector<Labeling>& views) {
  if (views.empty()) throw ValueError("co-association needs at least one view");
  const std::size_t b = views.front().labels.size();
  for (const Labeling& v : views)
    if (v.labels.size() != b) throw ShapeError("views disagree on item count");

  Matrix ca(b, b, 0.0);
  for (const Labeling& v : views)
    for (std::size_t i = 0; i < b; ++i)
      for (std::size_t j = i; j < b; ++j)
        if (v.labels[i] == v.labels[j]) ca(i, j) += 1.0;
  for (std::size_t i = 0; i < b; ++i)
    for (std::size_t j = i; j < b; ++j) {
      ca(i, j) /= views.size();
      ca(j, i) = ca(i, j);
    }
  return ca;
}

Labeling cluster_ensemble(const std::vector<Labeling>& views, std::size_t k,
                          std::uint64_t /*seed*/) {
  const Matrix ca = co_association(views);
  const std::size_t b = ca.rows;
  if (b < k) throw InsufficientDataError("fewer blocks than folds");

  Matrix dis(b, b, 0.0);
  for (std::size_t i = 0; i < b; ++i)
    for (std::size_t j = 0; j < b; ++j) dis(i, j) = 1.0 - ca(i, j);

  Labeling folds = ahc_from_dissimilarity(dis, k);

  // No fold may hold more than ceil(2B/k) blocks; shed the weakest-affinity
  // block from the largest fold into the smallest until satisfied.
  const std::size_t cap = (2 * b + k - 1) / k;
  for (;;) {
    std::vector<std::size_t> sizes(k, 0);
    for (int f : folds.labels) ++sizes[f];
    std::size_t largest = 0, smallest = 0;
    for (std::size_t f = 1; f < k; ++f) {
      if (sizes[f] > sizes[largest]) largest = f;
      if (sizes[f] < sizes[smallest]) smallest = f;
    }
    if (sizes[largest] <= cap) break;

    std::size_t weakest = b;
    double weakest_aff = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < b; ++i) {
      if (folds.labels[i] != static_cast<int>(largest)) continue;
      double aff = 0.0;
      for (std::size_t j = 0; j < b; ++j)
        if (j != i && folds.labels[j] == static_cast<int>(largest)) aff += ca(i, j);
      aff /= sizes[largest] - 1;
      if (aff < weakest_aff) {
        weakest_aff = aff;
        weakest = i;
      }
    }
    folds.labels[weakest] = static_cast<int>(smallest);
  }
  return folds;
}

}  // namespace geoeval
