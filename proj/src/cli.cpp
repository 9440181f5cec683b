#include "geoeval/cli.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "geoeval/config.hpp"
#include "geoeval/cv.hpp"
#include "geoeval/dav.hpp"
#include "geoeval/errors.hpp"
#include "geoeval/experiment.hpp"
#include "geoeval/parallel.hpp"
#include "geoeval/rng.hpp"
#include "geoeval/svg.hpp"
#include "geoeval/variogram.hpp"

namespace geoeval {

namespace {

namespace fs = std::filesystem;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write file: " + path);
  out << content;
  if (!out) throw Error("write failed: " + path);
}

std::string join(const std::string& dir, const std::string& name) {
  return (fs::path(dir) / name).string();
}

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

// manifest.json: command, seed, input/output digests. No timestamps, so a
// rerun of the same command yields the same manifest bytes.
void write_manifest(const std::string& out_dir, const std::string& command, std::uint64_t seed,
                    const std::vector<std::string>& inputs,
                    const std::vector<std::string>& outputs) {
  nlohmann::json m;
  m["tool"] = "geoeval";
  m["version"] = "0.1.0";
  m["command"] = command;
  m["seed"] = seed;
  m["inputs"] = nlohmann::json::array();
  for (const std::string& path : inputs)
    m["inputs"].push_back({{"path", path}, {"fnv1a64", hex64(fnv1a64(read_file(path)))}});
  m["outputs"] = nlohmann::json::array();
  for (const std::string& name : outputs)
    m["outputs"].push_back(
        {{"path", name}, {"fnv1a64", hex64(fnv1a64(read_file(join(out_dir, name))))}});
  write_file(join(out_dir, "manifest.json"), m.dump(2) + "\n");
}

SampleSet resolve_samples(const Grid& grid, const std::string& samples_path, std::size_t random_n,
                          std::uint64_t seed) {
  if (!samples_path.empty()) return extract_samples(grid, load_locations_csv(samples_path));
  const std::vector<Location> cells = grid.valid_cells();
  if (random_n < 1) throw ConfigError("need --samples FILE or --random-n N");
  if (random_n > cells.size())
    throw InsufficientDataError("--random-n exceeds the number of valid cells");
  Rng rng(derive_seed(seed, 100));
  std::vector<Location> locs;
  for (std::size_t i : rng.sample_without_replacement(cells.size(), random_n))
    locs.push_back(cells[i]);
  return extract_samples(grid, locs);
}

void write_plots(const std::vector<EvaluationRecord>& records, const std::string& out_dir,
                 std::vector<std::string>& outputs) {
  ScatterSeries rdm{"RDM-CV", "#e41a1c", {}}, blk{"BLK-CV", "#377eb8", {}},
      sp{"SP-CV", "#4daf4a", {}}, actual{"actual", "#333333", {}};
  ScatterSeries cv_rdm = rdm, cv_blk = blk, cv_sp = sp;
  for (const EvaluationRecord& r : records) {
    if (r.failed) continue;
    rdm.points.push_back({r.d, r.rmse_diff_rdm});
    blk.points.push_back({r.d, r.rmse_diff_blk});
    sp.points.push_back({r.d, r.rmse_diff_sp});
    actual.points.push_back({r.d, r.rmse_actual});
    cv_rdm.points.push_back({r.d, r.rmse_cv_rdm});
    cv_blk.points.push_back({r.d, r.rmse_cv_blk});
    cv_sp.points.push_back({r.d, r.rmse_cv_sp});
  }
  write_file(join(out_dir, "plot_rmse_diff.svg"),
             scatter_svg({rdm, blk, sp}, "Dissimilarity (%)", "RMSE_diff", true));
  cv_rdm.name = "RMSE_CV (RDM)";
  cv_blk.name = "RMSE_CV (BLK)";
  cv_sp.name = "RMSE_CV (SP)";
  actual.name = "RMSE_actual";
  write_file(join(out_dir, "plot_rmse.svg"),
             scatter_svg({actual, cv_rdm, cv_blk, cv_sp}, "Dissimilarity (%)", "RMSE", false));
  outputs.push_back("plot_rmse_diff.svg");
  outputs.push_back("plot_rmse.svg");
}

int cmd_synth(const std::string& config_path, bool seed_given, std::uint64_t seed,
              const std::string& out_dir) {
  ExperimentConfig cfg =
      config_path.empty() ? ExperimentConfig{} : load_experiment_config(config_path);
  if (seed_given) cfg.synth.seed = seed;
  fs::create_directories(out_dir);

  const Grid grid = synthesize_dataset(cfg.synth);
  save_grid_csv(grid, join(out_dir, "grid.csv"));
  write_file(join(out_dir, "config.resolved"), resolved_config(cfg));

  std::vector<std::string> inputs;
  if (!config_path.empty()) inputs.push_back(config_path);
  write_manifest(out_dir, "synth", cfg.synth.seed, inputs, {"grid.csv", "config.resolved"});
  std::printf("wrote %s (%dx%d, %zu covariates)\n", join(out_dir, "grid.csv").c_str(),
              grid.width, grid.height, grid.p());
  return 0;
}

int cmd_dav(const std::string& grid_path, const std::string& samples_path, std::size_t random_n,
            std::uint64_t seed, std::size_t repeats, std::size_t trees,
            const std::string& out_dir) {
  const Grid grid = load_grid_csv(grid_path);
  const SampleSet samples = resolve_samples(grid, samples_path, random_n, seed);
  const PredictionSet preds = complement_predictions(grid, samples);

  DavConfig cfg;
  cfg.forest.n_trees = trees;
  cfg.seed = seed;
  cfg.repeats = repeats;
  const DissimilarityScore score = quantify_dissimilarity(samples, preds, cfg);
  std::printf("auc=%.6f d=%.4f%%\n", score.auc, score.d);

  if (!out_dir.empty()) {
    fs::create_directories(out_dir);
    std::string csv = "repeat,auc,d\n";
    char buf[80];
    for (std::size_t r = 0; r < score.per_repeat.size(); ++r) {
      std::snprintf(buf, sizeof(buf), "%zu,%.17g,%.17g\n", r, score.per_repeat[r].auc,
                    score.per_repeat[r].d);
      csv += buf;
    }
    write_file(join(out_dir, "dav_repeats.csv"), csv);
    std::vector<std::string> inputs{grid_path};
    if (!samples_path.empty()) inputs.push_back(samples_path);
    write_manifest(out_dir, "dav", seed, inputs, {"dav_repeats.csv"});
  }
  return 0;
}

int cmd_cv(const std::string& grid_path, const std::string& samples_path, std::size_t random_n,
           const std::string& method, std::size_t k, std::uint64_t seed, std::size_t trees,
           double block_side, const std::string& out_dir) {
  const Grid grid = load_grid_csv(grid_path);
  const SampleSet samples = resolve_samples(grid, samples_path, random_n, seed);

  FoldAssignment fa;
  if (method == "rdm") {
    fa = split_random(samples.size(), k, derive_seed(seed, 201));
  } else if (method == "blk") {
    double side = block_side;
    if (!(side > 0.0)) {
      const EmpiricalVariogram emp =
          empirical_semivariogram(samples, 15, default_variogram_max_dist(samples));
      const VariogramFit fit = fit_variogram(emp, VariogramFamily::exponential);
      side = clamp_block_side(fit.effective_range, grid.width, grid.height);
    }
    fa = split_block(samples, side, k, derive_seed(seed, 202));
  } else if (method == "sp") {
    fa = split_spatial_plus(samples, k, derive_seed(seed, 203));
  } else {
    throw ConfigError("unknown method '" + method + "'; expected one of rdm, blk, sp");
  }

  ForestConfig fc;
  fc.n_trees = trees;
  fc.seed = derive_seed(seed, 204);
  const CVResult result = run_cv(samples, fa, fc);

  fs::create_directories(out_dir);
  write_file(join(out_dir, "folds.csv"), folds_to_csv(fa));
  std::vector<std::string> inputs{grid_path};
  if (!samples_path.empty()) inputs.push_back(samples_path);
  write_manifest(out_dir, "cv", seed, inputs, {"folds.csv"});
  std::printf("rmse_cv=%.6f\n", result.rmse_cv);
  return 0;
}

int cmd_experiment(const std::string& config_path, bool seed_given, std::uint64_t seed,
                   const std::string& out_dir, bool resume) {
  ExperimentConfig cfg =
      config_path.empty() ? ExperimentConfig{} : load_experiment_config(config_path);
  if (seed_given) {
    cfg.seed = seed;
    cfg.synth.seed = seed;
  }
  fs::create_directories(out_dir);

  std::vector<EvaluationRecord> done;
  const std::string results_path = join(out_dir, "results.csv");
  if (resume && fs::exists(results_path)) done = results_from_csv(read_file(results_path));

  const ExperimentResult result = run_experiment(cfg, done);

  write_file(results_path, results_to_csv(result.records));
  write_file(join(out_dir, "binned.csv"), binned_to_csv(result.binned));
  write_file(join(out_dir, "config.resolved"), resolved_config(cfg));
  std::vector<std::string> outputs{"results.csv", "binned.csv", "config.resolved"};
  write_plots(result.records, out_dir, outputs);

  std::vector<std::string> inputs;
  if (!config_path.empty()) inputs.push_back(config_path);
  if (!cfg.grid_file.empty()) inputs.push_back(cfg.grid_file);
  write_manifest(out_dir, "experiment", cfg.seed, inputs, outputs);

  std::printf("tasks=%zu failed=%zu out=%s\n", result.records.size(), result.n_failed,
              out_dir.c_str());
  if (result.n_failed > 0)
    for (const EvaluationRecord& r : result.records)
      if (r.failed)
        std::fprintf(stderr, "task %d (n_selected=%zu rep=%zu) failed: %s\n", r.task_id,
                     r.n_selected, r.repetition, r.error.c_str());
  return 0;
}

int cmd_plot(const std::string& results_path, const std::string& out_dir) {
  const std::vector<EvaluationRecord> records = results_from_csv(read_file(results_path));
  if (records.empty()) throw InsufficientDataError("no records in " + results_path);
  fs::create_directories(out_dir);
  std::vector<std::string> outputs;
  write_plots(records, out_dir, outputs);
  write_manifest(out_dir, "plot", 0, {results_path}, outputs);
  std::printf("wrote %zu plots to %s\n", outputs.size(), out_dir.c_str());
  return 0;
}

}  // namespace

int run_cli(int argc, char** argv) {
  CLI::App app{"geoeval: dissimilarity-aware evaluation toolkit for geospatial ML"};
  app.require_subcommand(1);

  int threads = -1;
  app.add_option("--threads", threads, "worker threads (0 = hardware concurrency)")
      ->envname("GEOEVAL_THREADS");

  std::string config_path, out_dir = ".", grid_path, samples_path, method = "rdm",
              results_path;
  std::uint64_t seed = 0;
  std::size_t random_n = 0, repeats = 1, trees = 500, k = 5;
  double block_side = 0.0;
  bool resume = false;

  CLI::App* c_synth = app.add_subcommand("synth", "generate a synthetic grid CSV");
  c_synth->add_option("--config", config_path, "config file ([synth] section)");
  CLI::Option* synth_seed = c_synth->add_option("--seed", seed, "override the synth seed");
  c_synth->add_option("--out-dir", out_dir, "output directory");

  CLI::App* c_dav = app.add_subcommand("dav", "quantify sample/prediction dissimilarity");
  c_dav->add_option("--grid", grid_path, "grid CSV")->required();
  c_dav->add_option("--samples", samples_path, "sample locations CSV (row,col)");
  c_dav->add_option("--random-n", random_n, "draw N random sample cells instead");
  c_dav->add_option("--seed", seed, "random seed");
  c_dav->add_option("--repeats", repeats, "pipeline repeats averaged before normalization");
  c_dav->add_option("--trees", trees, "forest size");
  c_dav->add_option("--out-dir", out_dir, "also write per-repeat CSV here")->default_val("");

  CLI::App* c_cv = app.add_subcommand("cv", "k-fold evaluation with one CV method");
  c_cv->add_option("--grid", grid_path, "grid CSV")->required();
  c_cv->add_option("--samples", samples_path, "sample locations CSV (row,col)");
  c_cv->add_option("--random-n", random_n, "draw N random sample cells instead");
  c_cv->add_option("--method", method, "rdm, blk, or sp");
  c_cv->add_option("--k", k, "fold count");
  c_cv->add_option("--seed", seed, "random seed");
  c_cv->add_option("--trees", trees, "forest size");
  c_cv->add_option("--block-side", block_side, "blk tile side (default: variogram range)");
  c_cv->add_option("--out-dir", out_dir, "output directory for folds.csv");

  CLI::App* c_exp = app.add_subcommand("experiment", "run the dissimilarity sweep");
  c_exp->add_option("--config", config_path, "config file");
  CLI::Option* exp_seed = c_exp->add_option("--seed", seed, "override all config seeds");
  c_exp->add_option("--out-dir", out_dir, "output directory");
  c_exp->add_flag("--resume", resume, "skip task ids already in results.csv");

  CLI::App* c_plot = app.add_subcommand("plot", "re-render plots from a results CSV");
  c_plot->add_option("--results", results_path, "results CSV path")->required();
  c_plot->add_option("--out-dir", out_dir, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  if (threads >= 0) set_threads(threads);

  try {
    if (*c_synth) return cmd_synth(config_path, synth_seed->count() > 0, seed, out_dir);
    if (*c_dav)
      return cmd_dav(grid_path, samples_path, random_n, seed, repeats, trees, out_dir);
    if (*c_cv)
      return cmd_cv(grid_path, samples_path, random_n, method, k, seed, trees, block_side,
                    out_dir);
    if (*c_exp)
      return cmd_experiment(config_path, exp_seed->count() > 0, seed, out_dir, resume);
    if (*c_plot) return cmd_plot(results_path, out_dir);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}

int run_cli(const std::vector<std::string>& args) {
  std::vector<std::string> full;
  full.push_back("geoeval");
  full.insert(full.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (std::string& s : full) argv.push_back(s.data());
  return run_cli(static_cast<int>(argv.size()), argv.data());
}

}  // namespace geoeval
