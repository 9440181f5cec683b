#pragma once

#include <cstdint>
#include <vector>

#include "geoeval/grid.hpp"

namespace geoeval {

// Synthetic raster recipe: autocorrelated informative covariates, one
// regional covariate, unrelated noise covariates, and a fixed nonlinear
// target with additive Gaussian noise.
struct SynthConfig {
  int width = 200;
  int height = 200;
  std::size_t n_informative = 3;
  std::size_t n_noise_covariates = 4;
  std::size_t n_regions = 5;
  // One correlation length per generated field (informative first, then
  // noise). Empty = built-in defaults; a single value broadcasts.
  std::vector<double> corr_lengths;
  double noise_sd = 0.3;
  std::size_t n_lakes = 0;  // elliptical no-data holes
  std::uint64_t seed = 0;
};

// Smoothed-noise Gaussian random field: white noise convolved with a
// Gaussian kernel of sigma = corr_length/2 (reflective boundaries), then
// standardized to zero mean and unit variance.
std::vector<double> generate_grf(int width, int height, double corr_length, std::uint64_t seed);

struct RegionalLayer {
  std::vector<int> labels;     // region id per cell
  std::vector<double> values;  // standardized region-mean latent, per cell
};

// Contiguous-tending regions from k-means over (coordinates, two smoothed
// noise channels); each region encoded by its mean latent value.
RegionalLayer generate_regional(int width, int height, std::size_t n_regions,
                                std::uint64_t seed);

// Full grid: informative GRFs, the regional covariate, noise GRFs, and the
// target x1 + 0.5*x2^2 + sin(pi*x3) + 0.5*regional + noise.
Grid synthesize_dataset(const SynthConfig& cfg);

}  // namespace geoeval
