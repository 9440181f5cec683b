#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "geoeval/forest.hpp"
#include "geoeval/grid.hpp"

namespace geoeval {

enum class CvMethod { rdm, blk, sp };

const char* cv_method_name(CvMethod m);

// A k-fold partition of the samples. For the block-based methods, block_of
// records which spatial block each sample belongs to and block_side the tile
// side actually used (blk only).
struct FoldAssignment {
  std::vector<int> fold_of;
  std::size_t k = 0;
  CvMethod method = CvMethod::rdm;
  double block_side = 0.0;
  std::vector<int> block_of;  // empty for rdm

  std::size_t size() const { return fold_of.size(); }
};

struct CVResult {
  std::vector<double> predicted;  // out-of-fold prediction per sample
  double rmse_cv = 0.0;
  std::vector<std::size_t> per_fold_sizes;
};

// Uniform random permutation chopped into k folds with sizes differing by at
// most one.
FoldAssignment split_random(std::size_t n, std::size_t k, std::uint64_t seed);

// Square tiling of the samples' bounding box from its min corner; nonempty
// blocks are dealt round-robin over a seeded random order, so samples sharing
// a tile always share a fold. If fewer than k tiles are occupied the side is
// halved (at most 5 times) before giving up.
FoldAssignment split_block(const SampleSet& samples, double block_side, std::size_t k,
                           std::uint64_t seed);

// Two-stage spatial split: Ward clustering of the standardized coordinates
// into B = min(10k, n) blocks, then a cluster ensemble over three k-means
// views of the blocks (coordinates, covariate means, target means) assigns
// blocks to folds.
FoldAssignment split_spatial_plus(const SampleSet& samples, std::size_t k, std::uint64_t seed);

// k-fold evaluation: train on the complement of each fold (per-fold derived
// seeds), predict the fold, and score all out-of-fold predictions at once.
CVResult run_cv(const SampleSet& samples, const FoldAssignment& fa, const ForestConfig& cfg);

// CSV export: `sample_index,fold` plus a block_id column when blocks exist.
std::string folds_to_csv(const FoldAssignment& fa);

}  // namespace geoeval
