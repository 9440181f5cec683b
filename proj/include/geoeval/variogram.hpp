#pragma once

#include <cstddef>
#include <vector>

#include "geoeval/grid.hpp"

namespace geoeval {

struct EmpiricalVariogram {
  std::vector<double> lag_centers;  // cell units, strictly increasing
  std::vector<double> semivariances;
  std::vector<std::size_t> pair_counts;  // zero-count lags carry semivariance 0
};

enum class VariogramFamily { exponential, spherical };

// Fitted model gamma(h) = nugget + partial_sill * g(h; range_param).
// effective_range is range_param for the spherical family and 3*range_param
// for the exponential one (the distance where ~95% of the sill is reached).
struct VariogramFit {
  VariogramFamily family = VariogramFamily::exponential;
  double nugget = 0.0;
  double partial_sill = 0.0;
  double range_param = 0.0;
  double effective_range = 0.0;
  double residual = 0.0;  // pair-count-weighted SSE against the input
  bool flat = false;      // no usable spatial structure; effective_range = 1 cell
};

// Matheron estimator over all sample pairs, equal-width distance bins on
// (0, max_dist]. Distances are between cell centers in cell units.
EmpiricalVariogram empirical_semivariogram(const SampleSet& samples, std::size_t n_lags,
                                           double max_dist);

// Half the diagonal of the samples' bounding box (never below 2 cells): the
// default search distance for the empirical variogram.
double default_variogram_max_dist(const SampleSet& samples);

// Pair-count-weighted least squares: nugget and partial sill are solved in
// closed form for each candidate range on a grid, then the winner is refined
// locally. Deterministic.
VariogramFit fit_variogram(const EmpiricalVariogram& emp,
                           VariogramFamily family = VariogramFamily::exponential);

// The fitted effective range clamped into a usable block side:
// [2 cells, max(grid width, height)/2].
double clamp_block_side(double effective_range, int grid_width, int grid_height);

}  // namespace geoeval
