#include "geoeval/config.hpp"

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <vector>

#include "geoeval/errors.hpp"

namespace geoeval {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

double parse_double(const std::string& key, const std::string& value) {
  char* end = nullptr;
  const double v = std::strtod(value.c_str(), &end);
  if (end != value.c_str() + value.size() || value.empty())
    throw ConfigError(key + ": not a number: '" + value + "'");
  return v;
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
  if (value.empty() || value[0] == '-') throw ConfigError(key + ": not a non-negative integer: '" + value + "'");
  char* end = nullptr;
  const unsigned long long v = std::strtoull(value.c_str(), &end, 10);
  if (end != value.c_str() + value.size())
    throw ConfigError(key + ": not a non-negative integer: '" + value + "'");
  return v;
}

std::size_t parse_count(const std::string& key, const std::string& value) {
  return static_cast<std::size_t>(parse_u64(key, value));
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw ConfigError(key + ": expected true/false: '" + value + "'");
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> items;
  std::istringstream in(value);
  std::string item;
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) items.push_back(item);
  }
  return items;
}

void apply_forest_key(ForestConfig& fc, const std::string& key, const std::string& value) {
  if (key == "n_trees")
    fc.n_trees = parse_count(key, value);
  else if (key == "mtry")
    fc.mtry = parse_count(key, value);
  else if (key == "min_samples_split")
    fc.min_samples_split = parse_count(key, value);
  else if (key == "max_depth")
    fc.max_depth = parse_count(key, value);
  else if (key == "bootstrap")
    fc.bootstrap = parse_bool(key, value);
  else
    throw ConfigError("unknown [forest] key: " + key);
}

}  // namespace

ExperimentConfig parse_experiment_config(const std::string& text) {
  ExperimentConfig cfg;
  std::istringstream in(text);
  std::string line, section;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("line " + std::to_string(line_no) + ": unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section != "synth" && section != "forest" && section != "dav" &&
          section != "experiment")
        throw ConfigError("unknown section [" + section + "]");
      continue;
    }

    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (section.empty())
      throw ConfigError("line " + std::to_string(line_no) + ": key outside any section");

    if (section == "synth") {
      if (key == "width")
        cfg.synth.width = static_cast<int>(parse_count(key, value));
      else if (key == "height")
        cfg.synth.height = static_cast<int>(parse_count(key, value));
      else if (key == "n_informative")
        cfg.synth.n_informative = parse_count(key, value);
      else if (key == "n_noise_covariates")
        cfg.synth.n_noise_covariates = parse_count(key, value);
      else if (key == "n_regions")
        cfg.synth.n_regions = parse_count(key, value);
      else if (key == "corr_lengths") {
        cfg.synth.corr_lengths.clear();
        for (const std::string& item : split_list(value))
          cfg.synth.corr_lengths.push_back(parse_double(key, item));
      } else if (key == "noise_sd")
        cfg.synth.noise_sd = parse_double(key, value);
      else if (key == "n_lakes")
        cfg.synth.n_lakes = parse_count(key, value);
      else if (key == "seed")
        cfg.synth.seed = parse_u64(key, value);
      else
        throw ConfigError("unknown [synth] key: " + key);
    } else if (section == "forest") {
      apply_forest_key(cfg.forest, key, value);
    } else if (section == "dav") {
      if (key == "repeats")
        cfg.dav.repeats = parse_count(key, value);
      else
        throw ConfigError("unknown [dav] key: " + key);
    } else {  // experiment
      if (key == "grid_file")
        cfg.grid_file = value;
      else if (key == "n_subregions")
        cfg.n_subregions = parse_count(key, value);
      else if (key == "n_samples")
        cfg.n_samples = parse_count(key, value);
      else if (key == "subregion_counts") {
        cfg.subregion_counts.clear();
        for (const std::string& item : split_list(value))
          cfg.subregion_counts.push_back(parse_count(key, item));
        if (cfg.subregion_counts.empty())
          throw ConfigError("subregion_counts: empty list");
      } else if (key == "repetitions")
        cfg.repetitions = parse_count(key, value);
      else if (key == "k_folds")
        cfg.k_folds = parse_count(key, value);
      else if (key == "seed")
        cfg.seed = parse_u64(key, value);
      else
        throw ConfigError("unknown [experiment] key: " + key);
    }
  }

  // One forest serves both the prediction model and the adversarial
  // classifier (same hyperparameters by design).
  cfg.dav.forest = cfg.forest;
  return cfg;
}

ExperimentConfig load_experiment_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_experiment_config(buf.str());
}

std::string resolved_config(const ExperimentConfig& cfg) {
  std::ostringstream out;
  char num[40];
  auto g17 = [&](double v) {
    std::snprintf(num, sizeof(num), "%.17g", v);
    return std::string(num);
  };

  out << "[synth]\n";
  out << "width = " << cfg.synth.width << "\n";
  out << "height = " << cfg.synth.height << "\n";
  out << "n_informative = " << cfg.synth.n_informative << "\n";
  out << "n_noise_covariates = " << cfg.synth.n_noise_covariates << "\n";
  out << "n_regions = " << cfg.synth.n_regions << "\n";
  if (!cfg.synth.corr_lengths.empty()) {
    out << "corr_lengths = ";
    for (std::size_t i = 0; i < cfg.synth.corr_lengths.size(); ++i)
      out << (i ? "," : "") << g17(cfg.synth.corr_lengths[i]);
    out << "\n";
  }
  out << "noise_sd = " << g17(cfg.synth.noise_sd) << "\n";
  out << "n_lakes = " << cfg.synth.n_lakes << "\n";
  out << "seed = " << cfg.synth.seed << "\n";

  out << "\n[forest]\n";
  out << "n_trees = " << cfg.forest.n_trees << "\n";
  out << "mtry = " << cfg.forest.mtry << "\n";
  out << "min_samples_split = " << cfg.forest.min_samples_split << "\n";
  out << "max_depth = " << cfg.forest.max_depth << "\n";
  out << "bootstrap = " << (cfg.forest.bootstrap ? "true" : "false") << "\n";

  out << "\n[dav]\n";
  out << "repeats = " << cfg.dav.repeats << "\n";

  out << "\n[experiment]\n";
  if (!cfg.grid_file.empty()) out << "grid_file = " << cfg.grid_file << "\n";
  out << "n_subregions = " << cfg.n_subregions << "\n";
  out << "n_samples = " << cfg.n_samples << "\n";
  out << "subregion_counts = ";
  for (std::size_t i = 0; i < cfg.subregion_counts.size(); ++i)
    out << (i ? "," : "") << cfg.subregion_counts[i];
  out << "\n";
  out << "repetitions = " << cfg.repetitions << "\n";
  out << "k_folds = " << cfg.k_folds << "\n";
  out << "seed = " << cfg.seed << "\n";
  return out.str();
}

}  // namespace geoeval
