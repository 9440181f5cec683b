#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "geoeval/matrix.hpp"

namespace geoeval {

// A grid cell address. All spatial computations use the cell center
// (row + 0.5, col + 0.5) in cell units.
struct Location {
  int row = 0;
  int col = 0;

  friend bool operator==(const Location& a, const Location& b) {
    return a.row == b.row && a.col == b.col;
  }
};

inline double cell_center_y(const Location& loc) { return loc.row + 0.5; }
inline double cell_center_x(const Location& loc) { return loc.col + 0.5; }

// Rectangular raster: P named covariate layers, one target layer, and a
// validity mask (false = no data). All layers are row-major width*height.
// Immutable after construction; safe to share across threads.
struct Grid {
  int width = 0;
  int height = 0;
  std::vector<std::string> covariate_names;
  std::vector<std::vector<double>> covariates;  // one layer per name
  std::vector<double> target;
  std::vector<std::uint8_t> valid_mask;

  std::size_t p() const { return covariate_names.size(); }
  std::size_t n_cells() const { return static_cast<std::size_t>(width) * height; }

  std::size_t cell_index(const Location& loc) const {
    return static_cast<std::size_t>(loc.row) * width + loc.col;
  }

  bool in_bounds(const Location& loc) const {
    return loc.row >= 0 && loc.row < height && loc.col >= 0 && loc.col < width;
  }

  bool is_valid(const Location& loc) const {
    return in_bounds(loc) && valid_mask[cell_index(loc)] != 0;
  }

  std::size_t n_valid() const;
  std::vector<Location> valid_cells() const;  // row-major order
};

// Labeled subset of grid cells acting as training samples. Row i of
// `features` holds the covariates at locations[i]; `target` pairs with it.
struct SampleSet {
  std::vector<std::string> covariate_names;
  std::vector<Location> locations;
  Matrix features;  // N x P
  std::vector<double> target;

  std::size_t size() const { return locations.size(); }
};

// The cells a trained model must predict. `target_truth` is held out for the
// experiment oracle only; models never see it.
struct PredictionSet {
  std::vector<std::string> covariate_names;
  std::vector<Location> locations;
  Matrix features;  // M x P
  std::vector<double> target_truth;

  std::size_t size() const { return locations.size(); }
};

// CSV format: optional first line `# width=W height=H`, then a header
// `row,col,<name1>,...,<nameP>,target`, then one line per valid cell.
Grid load_grid_csv(const std::string& path);
void save_grid_csv(const Grid& grid, const std::string& path);

SampleSet extract_samples(const Grid& grid, const std::vector<Location>& locs);
PredictionSet complement_predictions(const Grid& grid, const SampleSet& samples);

// Locations CSV: header `row,col`, one line per location.
std::vector<Location> load_locations_csv(const std::string& path);

}  // namespace geoeval
