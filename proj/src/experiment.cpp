#include "geoeval/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <numeric>
#include <sstream>

#include "geoeval/clustering.hpp"
#include "geoeval/cv.hpp"
#include "geoeval/errors.hpp"
#include "geoeval/rng.hpp"
#include "geoeval/variogram.hpp"

namespace geoeval {

namespace {

std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

std::vector<int> partition_subregions(const Grid& grid, std::size_t n_subregions,
                                      std::uint64_t seed) {
  const std::vector<Location> cells = grid.valid_cells();
  if (cells.size() < n_subregions)
    throw InsufficientDataError("fewer valid cells than subregions");

  Matrix coords(cells.size(), 2);
  for (std::size_t i = 0; i < cells.size(); ++i) {
    coords(i, 0) = cell_center_y(cells[i]);
    coords(i, 1) = cell_center_x(cells[i]);
  }
  const Labeling lab = kmeans(coords, n_subregions, seed);

  std::vector<int> subregion_of(grid.n_cells(), -1);
  for (std::size_t i = 0; i < cells.size(); ++i)
    subregion_of[grid.cell_index(cells[i])] = lab.labels[i];
  return subregion_of;
}

PredictionTask construct_task(const Grid& grid, const std::vector<int>& subregion_of,
                              std::size_t n_selected, std::size_t n_samples,
                              std::uint64_t seed) {
  if (subregion_of.size() != grid.n_cells())
    throw ShapeError("subregion labels do not cover the grid");
  int max_label = -1;
  for (int s : subregion_of) max_label = std::max(max_label, s);
  const std::size_t n_subregions = static_cast<std::size_t>(max_label + 1);
  if (n_selected < 1 || n_selected > n_subregions)
    throw ValueError("n_selected outside [1, n_subregions]");

  // Cells per subregion, in row-major order within each.
  std::vector<std::vector<Location>> cells_of(n_subregions);
  for (int r = 0; r < grid.height; ++r)
    for (int c = 0; c < grid.width; ++c) {
      const int s = subregion_of[static_cast<std::size_t>(r) * grid.width + c];
      if (s >= 0) cells_of[s].push_back({r, c});
    }

  Rng select_rng(derive_seed(seed, 0));
  const std::vector<std::size_t> selected =
      select_rng.sample_without_replacement(n_subregions, n_selected);

  std::size_t capacity = 0;
  for (std::size_t s : selected) capacity += cells_of[s].size();
  if (capacity < n_samples)
    throw InsufficientDataError("selected subregions hold " + std::to_string(capacity) +
                                " cells, need " + std::to_string(n_samples));

  // Equal quotas; the remainder goes to a seeded random subset; quotas are
  // capped by subregion size with the overflow pushed to remaining capacity.
  std::vector<std::size_t> quota(n_selected, n_samples / n_selected);
  {
    Rng rem_rng(derive_seed(seed, 1));
    for (std::size_t i : rem_rng.sample_without_replacement(n_selected, n_samples % n_selected))
      ++quota[i];
  }
  std::size_t overflow = 0;
  for (std::size_t i = 0; i < n_selected; ++i) {
    const std::size_t cap = cells_of[selected[i]].size();
    if (quota[i] > cap) {
      overflow += quota[i] - cap;
      quota[i] = cap;
    }
  }
  while (overflow > 0) {
    std::size_t total_free = 0;
    for (std::size_t i = 0; i < n_selected; ++i)
      total_free += cells_of[selected[i]].size() - quota[i];
    // capacity was checked above, so total_free >= overflow here
    bool progressed = false;
    const std::size_t pending = overflow;
    for (std::size_t i = 0; i < n_selected && overflow > 0; ++i) {
      const std::size_t free = cells_of[selected[i]].size() - quota[i];
      const std::size_t add =
          std::min({free, overflow, pending * free / total_free});
      quota[i] += add;
      overflow -= add;
      progressed = progressed || add > 0;
    }
    if (!progressed) {
      // All proportional shares rounded to zero; give one to the roomiest.
      std::size_t best = 0, best_free = 0;
      for (std::size_t i = 0; i < n_selected; ++i) {
        const std::size_t free = cells_of[selected[i]].size() - quota[i];
        if (free > best_free) {
          best_free = free;
          best = i;
        }
      }
      ++quota[best];
      --overflow;
    }
  }

  std::vector<Location> sample_locs;
  sample_locs.reserve(n_samples);
  for (std::size_t i = 0; i < n_selected; ++i) {
    const std::vector<Location>& pool = cells_of[selected[i]];
    Rng cell_rng(derive_seed(seed, {2, selected[i]}));
    for (std::size_t j : cell_rng.sample_without_replacement(pool.size(), quota[i]))
      sample_locs.push_back(pool[j]);
  }

  PredictionTask task;
  task.seed = seed;
  task.n_selected = n_selected;
  task.grid_width = grid.width;
  task.grid_height = grid.height;
  task.samples = extract_samples(grid, sample_locs);
  task.predictions = complement_predictions(grid, task.samples);
  return task;
}

double actual_rmse(const PredictionTask& task, const ForestConfig& cfg) {
  const ForestModel model =
      train_regressor(task.samples.features, task.samples.target, cfg);
  const std::vector<double> pred = predict(model, task.predictions.features);
  return rmse(task.predictions.target_truth, pred);
}

EvaluationRecord evaluate_task(const PredictionTask& task, const ExperimentConfig& cfg) {
  EvaluationRecord rec;
  rec.task_id = task.task_id;
  rec.n_selected = task.n_selected;
  rec.repetition = task.repetition;
  try {
    DavConfig dav_cfg = cfg.dav;
    dav_cfg.seed = derive_seed(task.seed, 4);
    rec.d = quantify_dissimilarity(task.samples, task.predictions, dav_cfg).d;

    ForestConfig actual_cfg = cfg.forest;
    actual_cfg.seed = derive_seed(task.seed, 3);
    rec.rmse_actual = actual_rmse(task, actual_cfg);

    const std::size_t n = task.samples.size();
    const FoldAssignment fa_rdm = split_random(n, cfg.k_folds, derive_seed(task.seed, 5));

    const EmpiricalVariogram emp = empirical_semivariogram(
        task.samples, 15, default_variogram_max_dist(task.samples));
    const VariogramFit fit = fit_variogram(emp, VariogramFamily::exponential);
    const double block_side =
        clamp_block_side(fit.effective_range, task.grid_width, task.grid_height);
    const FoldAssignment fa_blk =
        split_block(task.samples, block_side, cfg.k_folds, derive_seed(task.seed, 6));

    const FoldAssignment fa_sp = split_spatial_plus(task.samples, cfg.k_folds,
                                                    derive_seed(task.seed, 7));

    ForestConfig cv_cfg = cfg.forest;
    cv_cfg.seed = derive_seed(task.seed, 8);
    rec.rmse_cv_rdm = run_cv(task.samples, fa_rdm, cv_cfg).rmse_cv;
    cv_cfg.seed = derive_seed(task.seed, 9);
    rec.rmse_cv_blk = run_cv(task.samples, fa_blk, cv_cfg).rmse_cv;
    cv_cfg.seed = derive_seed(task.seed, 10);
    rec.rmse_cv_sp = run_cv(task.samples, fa_sp, cv_cfg).rmse_cv;

    rec.rmse_diff_rdm = rmse_diff(rec.rmse_actual, rec.rmse_cv_rdm);
    rec.rmse_diff_blk = rmse_diff(rec.rmse_actual, rec.rmse_cv_blk);
    rec.rmse_diff_sp = rmse_diff(rec.rmse_actual, rec.rmse_cv_sp);
  } catch (const Error& e) {
    rec.failed = true;
    rec.error = e.what();
  }
  return rec;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg,
                                const std::vector<EvaluationRecord>& done) {
  if (cfg.n_samples < cfg.k_folds) throw ConfigError("n_samples must be >= k_folds");
  for (std::size_t n : cfg.subregion_counts)
    if (n < 1 || n > cfg.n_subregions)
      throw ConfigError("subregion_counts entries must lie in [1, n_subregions]");

  const Grid grid = cfg.grid_file.empty() ? synthesize_dataset(cfg.synth)
                                          : load_grid_csv(cfg.grid_file);
  const std::vector<int> subregion_of =
      partition_subregions(grid, cfg.n_subregions, derive_seed(cfg.seed, 0));

  std::map<int, EvaluationRecord> done_by_id;
  for (const EvaluationRecord& r : done) done_by_id[r.task_id] = r;

  ExperimentResult result;
  int task_id = 0;
  for (std::size_t n_selected : cfg.subregion_counts) {
    for (std::size_t rep = 0; rep < cfg.repetitions; ++rep, ++task_id) {
      const auto hit = done_by_id.find(task_id);
      if (hit != done_by_id.end()) {
        result.records.push_back(hit->second);
        continue;
      }
      PredictionTask task;
      EvaluationRecord rec;
      try {
        task = construct_task(grid, subregion_of, n_selected, cfg.n_samples,
                              derive_seed(cfg.seed, {n_selected, rep}));
        task.task_id = task_id;
        task.repetition = rep;
        rec = evaluate_task(task, cfg);
      } catch (const Error& e) {
        rec.task_id = task_id;
        rec.n_selected = n_selected;
        rec.repetition = rep;
        rec.failed = true;
        rec.error = e.what();
      }
      result.records.push_back(rec);
    }
  }

  std::vector<std::pair<double, std::vector<double>>> points;
  for (const EvaluationRecord& r : result.records) {
    if (r.failed) {
      ++result.n_failed;
      continue;
    }
    points.push_back({r.d, {r.rmse_diff_rdm, r.rmse_diff_blk, r.rmse_diff_sp}});
  }
  result.binned = bin_abs_diff(points, 1.0);

  if (result.n_failed * 2 > result.records.size())
    throw Error("more than half of the tasks failed (" + std::to_string(result.n_failed) +
                " of " + std::to_string(result.records.size()) + ")");
  return result;
}

std::string results_to_csv(const std::vector<EvaluationRecord>& records) {
  std::string out =
      "task_id,n_selected,repetition,d_percent,rmse_actual,rmse_cv_rdm,rmse_cv_blk,"
      "rmse_cv_sp,rmse_diff_rdm,rmse_diff_blk,rmse_diff_sp\n";
  for (const EvaluationRecord& r : records) {
    if (r.failed) continue;
    out += std::to_string(r.task_id) + ',' + std::to_string(r.n_selected) + ',' +
           std::to_string(r.repetition) + ',' + format_g17(r.d) + ',' +
           format_g17(r.rmse_actual) + ',' + format_g17(r.rmse_cv_rdm) + ',' +
           format_g17(r.rmse_cv_blk) + ',' + format_g17(r.rmse_cv_sp) + ',' +
           format_g17(r.rmse_diff_rdm) + ',' + format_g17(r.rmse_diff_blk) + ',' +
           format_g17(r.rmse_diff_sp) + '\n';
  }
  return out;
}

std::vector<EvaluationRecord> results_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty results CSV");
  std::vector<EvaluationRecord> records;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(row, cell, ',')) cells.push_back(cell);
    if (cells.size() != 11) throw ParseError("results CSV row needs 11 columns: " + line);
    EvaluationRecord r;
    r.task_id = std::atoi(cells[0].c_str());
    r.n_selected = static_cast<std::size_t>(std::strtoull(cells[1].c_str(), nullptr, 10));
    r.repetition = static_cast<std::size_t>(std::strtoull(cells[2].c_str(), nullptr, 10));
    r.d = std::strtod(cells[3].c_str(), nullptr);
    r.rmse_actual = std::strtod(cells[4].c_str(), nullptr);
    r.rmse_cv_rdm = std::strtod(cells[5].c_str(), nullptr);
    r.rmse_cv_blk = std::strtod(cells[6].c_str(), nullptr);
    r.rmse_cv_sp = std::strtod(cells[7].c_str(), nullptr);
    r.rmse_diff_rdm = std::strtod(cells[8].c_str(), nullptr);
    r.rmse_diff_blk = std::strtod(cells[9].c_str(), nullptr);
    r.rmse_diff_sp = std::strtod(cells[10].c_str(), nullptr);
    records.push_back(r);
  }
  return records;
}

std::string binned_to_csv(const std::vector<BinnedRecord>& binned) {
  std::string out = "bin_low,bin_high,count,mean_abs_diff_rdm,mean_abs_diff_blk,mean_abs_diff_sp\n";
  for (const BinnedRecord& b : binned) {
    out += format_g17(b.bin_low) + ',' + format_g17(b.bin_high) + ',' +
           std::to_string(b.count);
    for (double v : b.mean_abs_diff) out += ',' + format_g17(v);
    out += '\n';
  }
  return out;
}

}  // namespace geoeval
