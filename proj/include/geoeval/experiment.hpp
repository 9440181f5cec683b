#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "geoeval/dav.hpp"
#include "geoeval/forest.hpp"
#include "geoeval/grid.hpp"
#include "geoeval/metrics.hpp"
#include "geoeval/synth.hpp"

namespace geoeval {

// Sweep configuration. Defaults are the desk-scale setup: a 200x200
// synthetic grid, 300 samples, a sparse subregion sweep with 5 repetitions,
// and 100-tree forests.
struct ExperimentConfig {
  std::string grid_file;  // empty = synthesize from `synth`
  SynthConfig synth;
  std::size_t n_subregions = 100;
  std::size_t n_samples = 300;
  std::vector<std::size_t> subregion_counts = {1, 2, 3, 5, 8, 12, 20, 35, 60, 100};
  std::size_t repetitions = 5;
  std::size_t k_folds = 5;
  ForestConfig forest;
  DavConfig dav;
  std::uint64_t seed = 0;

  ExperimentConfig() {
    forest.n_trees = 100;
    dav.forest.n_trees = 100;
  }
};

struct PredictionTask {
  int task_id = 0;
  std::size_t n_selected = 0;
  std::size_t repetition = 0;
  std::uint64_t seed = 0;
  int grid_width = 0;  // for the block-side clamp
  int grid_height = 0;
  SampleSet samples;
  PredictionSet predictions;
};

struct EvaluationRecord {
  int task_id = 0;
  std::size_t n_selected = 0;
  std::size_t repetition = 0;
  double d = 0.0;
  double rmse_actual = 0.0;
  double rmse_cv_rdm = 0.0, rmse_cv_blk = 0.0, rmse_cv_sp = 0.0;
  double rmse_diff_rdm = 0.0, rmse_diff_blk = 0.0, rmse_diff_sp = 0.0;
  bool failed = false;
  std::string error;
};

struct ExperimentResult {
  std::vector<EvaluationRecord> records;  // by task id; includes failures
  std::vector<BinnedRecord> binned;       // methods ordered rdm, blk, sp
  std::size_t n_failed = 0;
};

// K-means subregions over the valid cell centers; -1 for invalid cells.
std::vector<int> partition_subregions(const Grid& grid, std::size_t n_subregions,
                                      std::uint64_t seed);

// Selects subregions, spreads equal per-subregion quotas (capacity-capped
// with proportional redistribution), samples cells inside each, and takes
// the complement as the prediction set.
PredictionTask construct_task(const Grid& grid, const std::vector<int>& subregion_of,
                              std::size_t n_selected, std::size_t n_samples,
                              std::uint64_t seed);

// RMSE of a regressor trained on the full sample set, evaluated against the
// held-out truth at every prediction location.
double actual_rmse(const PredictionTask& task, const ForestConfig& cfg);

// Dissimilarity plus the three CV evaluations for one task.
EvaluationRecord evaluate_task(const PredictionTask& task, const ExperimentConfig& cfg);

// The whole sweep. `done` may carry records from a previous run (by task id)
// to skip; the sweep fails if more than half of all tasks error out.
ExperimentResult run_experiment(const ExperimentConfig& cfg,
                                const std::vector<EvaluationRecord>& done = {});

// Results table I/O (schema documented in the README).
std::string results_to_csv(const std::vector<EvaluationRecord>& records);
std::vector<EvaluationRecord> results_from_csv(const std::string& text);
std::string binned_to_csv(const std::vector<BinnedRecord>& binned);

}  // namespace geoeval
