#pragma once

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <string>
#include <vector>

#include "geoeval/grid.hpp"
#include "geoeval/matrix.hpp"
#include "geoeval/rng.hpp"

namespace testutil {

inline geoeval::Matrix make_matrix(std::initializer_list<std::initializer_list<double>> rows) {
  geoeval::Matrix m(rows.size(), rows.begin()->size());
  std::size_t r = 0;
  for (const auto& row : rows) {
    std::size_t c = 0;
    for (double v : row) m(r, c++) = v;
    ++r;
  }
  return m;
}

// Fully valid grid with deterministic covariate formulas; handy when a test
// needs real Grid plumbing without random content.
inline geoeval::Grid make_grid(int width, int height) {
  geoeval::Grid g;
  g.width = width;
  g.height = height;
  g.covariate_names = {"a", "b"};
  g.covariates.assign(2, std::vector<double>(g.n_cells(), 0.0));
  g.target.assign(g.n_cells(), 0.0);
  g.valid_mask.assign(g.n_cells(), 1);
  for (int r = 0; r < height; ++r)
    for (int c = 0; c < width; ++c) {
      const std::size_t i = static_cast<std::size_t>(r) * width + c;
      g.covariates[0][i] = 0.25 * r + 0.125 * c;
      g.covariates[1][i] = (r * 31 + c * 17) % 7 - 3.0;
      g.target[i] = g.covariates[0][i] + 0.5 * g.covariates[1][i];
    }
  return g;
}

// Free-standing sample set over synthetic coordinates, for code paths that
// never touch a Grid.
inline geoeval::SampleSet make_samples(std::size_t n, std::size_t p, std::uint64_t seed,
                                       int span = 40) {
  geoeval::Rng rng(seed);
  geoeval::SampleSet s;
  s.covariate_names.resize(p);
  for (std::size_t j = 0; j < p; ++j) s.covariate_names[j] = "f" + std::to_string(j);
  s.features = geoeval::Matrix(n, p);
  const std::size_t cells = static_cast<std::size_t>(span) * span;
  const std::vector<std::size_t> picked = rng.sample_without_replacement(cells, n);
  for (std::size_t i = 0; i < n; ++i) {
    s.locations.push_back({static_cast<int>(picked[i] / span), static_cast<int>(picked[i] % span)});
    for (std::size_t j = 0; j < p; ++j) s.features(i, j) = rng.normal();
    s.target.push_back(rng.normal());
  }
  return s;
}

inline std::string temp_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "geoeval_tests" / name;
  std::filesystem::create_directories(dir);
  return dir.string();
}

inline std::string temp_file(const std::string& name, const std::string& content) {
  const auto dir = std::filesystem::temp_directory_path() / "geoeval_tests";
  std::filesystem::create_directories(dir);
  const std::string path = (dir / name).string();
  std::ofstream out(path, std::ios::binary);
  out << content;
  return path;
}

inline std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

}  // namespace testutil
