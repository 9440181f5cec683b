#include "geoeval/synth.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "geoeval/clustering.hpp"
#include "geoeval/errors.hpp"
#include "geoeval/rng.hpp"

namespace geoeval {

namespace {

int reflect(int i, int n) {
  while (i < 0 || i >= n) {
    if (i < 0) i = -i - 1;
    if (i >= n) i = 2 * n - 1 - i;
  }
  return i;
}

void standardize(std::vector<double>& v) {
  double sum = 0.0;
  for (double x : v) sum += x;
  const double mean = sum / v.size();
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  const double sd = std::sqrt(ss / v.size());
  for (double& x : v) x = sd > 0.0 ? (x - mean) / sd : 0.0;
}

// Built-in correlation lengths when the config does not name any: a fixed
// cycle giving the fields varied spatial scales.
double default_corr_length(std::size_t field_index) {
  static const double cycle[5] = {24.0, 20.0, 16.0, 12.0, 8.0};
  return cycle[field_index % 5];
}

}  // namespace

std::vector<double> generate_grf(int width, int height, double corr_length,
                                 std::uint64_t seed) {
  if (width < 1 || height < 1) throw ValueError("grid dimensions must be positive");
  if (!(corr_length > 0.0)) throw ValueError("corr_length must be positive");

  const std::size_t n = static_cast<std::size_t>(width) * height;
  std::vector<double> field(n);
  Rng rng(seed);
  for (double& x : field) x = rng.normal();

  const double sigma = corr_length / 2.0;
  const int radius = std::max(1, static_cast<int>(std::ceil(3.0 * sigma)));
  std::vector<double> kernel(2 * radius + 1);
  double ksum = 0.0;
  for (int t = -radius; t <= radius; ++t) {
    kernel[t + radius] = std::exp(-(t * t) / (2.0 * sigma * sigma));
    ksum += kernel[t + radius];
  }
  for (double& k : kernel) k /= ksum;

  // Separable convolution, reflective boundaries.
  std::vector<double> tmp(n);
  for (int r = 0; r < height; ++r)
    for (int c = 0; c < width; ++c) {
      double acc = 0.0;
      for (int t = -radius; t <= radius; ++t)
        acc += kernel[t + radius] * field[static_cast<std::size_t>(r) * width + reflect(c + t, width)];
      tmp[static_cast<std::size_t>(r) * width + c] = acc;
    }
  for (int c = 0; c < width; ++c)
    for (int r = 0; r < height; ++r) {
      double acc = 0.0;
      for (int t = -radius; t <= radius; ++t)
        acc += kernel[t + radius] * tmp[static_cast<std::size_t>(reflect(r + t, height)) * width + c];
      field[static_cast<std::size_t>(r) * width + c] = acc;
    }

  standardize(field);
  return field;
}

RegionalLayer generate_regional(int width, int height, std::size_t n_regions,
                                std::uint64_t seed) {
  if (n_regions < 2) throw ValueError("n_regions must be >= 2");
  const double channel_corr = std::max(4.0, std::min(width, height) / 8.0);
  const std::vector<double> g1 = generate_grf(width, height, channel_corr, derive_seed(seed, 1));
  const std::vector<double> g2 = generate_grf(width, height, channel_corr, derive_seed(seed, 2));

  // Coordinates dominate; the smoothed channels only bend the boundaries, so
  // regions stay contiguous-tending.
  const std::size_t n = static_cast<std::size_t>(width) * height;
  const double channel_weight = 0.15;
  Matrix points(n, 4);
  for (int r = 0; r < height; ++r)
    for (int c = 0; c < width; ++c) {
      const std::size_t i = static_cast<std::size_t>(r) * width + c;
      points(i, 0) = (r + 0.5) / height;
      points(i, 1) = (c + 0.5) / width;
      points(i, 2) = channel_weight * g1[i];
      points(i, 3) = channel_weight * g2[i];
    }

  RegionalLayer layer;
  layer.labels = kmeans(points, n_regions, derive_seed(seed, 3)).labels;

  std::vector<double> region_sum(n_regions, 0.0);
  std::vector<std::size_t> region_count(n_regions, 0);
  for (std::size_t i = 0; i < n; ++i) {
    region_sum[layer.labels[i]] += g1[i];
    ++region_count[layer.labels[i]];
  }
  layer.values.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    layer.values[i] = region_sum[layer.labels[i]] / region_count[layer.labels[i]];
  standardize(layer.values);
  return layer;
}

Grid synthesize_dataset(const SynthConfig& cfg) {
  if (cfg.width < 1 || cfg.height < 1) throw ConfigError("width and height must be >= 1");
  if (cfg.n_informative < 1) throw ConfigError("n_informative must be >= 1");
  if (cfg.n_regions < 2) throw ConfigError("n_regions must be >= 2");
  if (!(cfg.noise_sd >= 0.0)) throw ConfigError("noise_sd must be >= 0");

  const std::size_t n_fields = cfg.n_informative + cfg.n_noise_covariates;
  auto corr_for = [&](std::size_t idx) {
    if (cfg.corr_lengths.empty()) return default_corr_length(idx);
    if (cfg.corr_lengths.size() == 1) return cfg.corr_lengths[0];
    if (cfg.corr_lengths.size() != n_fields)
      throw ConfigError("corr_lengths must name one value per covariate field");
    return cfg.corr_lengths[idx];
  };

  Grid grid;
  grid.width = cfg.width;
  grid.height = cfg.height;
  const std::size_t n = grid.n_cells();

  std::vector<std::vector<double>> informative;
  for (std::size_t i = 0; i < cfg.n_informative; ++i) {
    informative.push_back(
        generate_grf(cfg.width, cfg.height, corr_for(i), derive_seed(cfg.seed, {1, i})));
    grid.covariate_names.push_back("x" + std::to_string(i + 1));
    grid.covariates.push_back(informative.back());
  }

  const RegionalLayer regional =
      generate_regional(cfg.width, cfg.height, cfg.n_regions, derive_seed(cfg.seed, 2));
  grid.covariate_names.push_back("region");
  grid.covariates.push_back(regional.values);

  for (std::size_t j = 0; j < cfg.n_noise_covariates; ++j) {
    grid.covariates.push_back(generate_grf(cfg.width, cfg.height,
                                           corr_for(cfg.n_informative + j),
                                           derive_seed(cfg.seed, {3, j})));
    grid.covariate_names.push_back("u" + std::to_string(j + 1));
  }

  // Fixed nonlinear response: the informative fields cycle through linear,
  // quadratic, and sine terms (x1 + 0.5*x2^2 + sin(pi*x3) at the default 3).
  grid.target.assign(n, 0.0);
  for (std::size_t i = 0; i < cfg.n_informative; ++i)
    for (std::size_t c = 0; c < n; ++c) {
      const double x = informative[i][c];
      switch (i % 3) {
        case 0: grid.target[c] += x; break;
        case 1: grid.target[c] += 0.5 * x * x; break;
        default: grid.target[c] += std::sin(3.14159265358979323846 * x); break;
      }
    }
  for (std::size_t c = 0; c < n; ++c) grid.target[c] += 0.5 * regional.values[c];
  if (cfg.noise_sd > 0.0) {
    Rng rng(derive_seed(cfg.seed, 4));
    for (std::size_t c = 0; c < n; ++c) grid.target[c] += cfg.noise_sd * rng.normal();
  }

  grid.valid_mask.assign(n, 1);
  if (cfg.n_lakes > 0) {
    Rng rng(derive_seed(cfg.seed, 5));
    const double lo = std::min(cfg.width, cfg.height) / 20.0;
    const double hi = std::min(cfg.width, cfg.height) / 8.0;
    for (std::size_t l = 0; l < cfg.n_lakes; ++l) {
      const double cy = rng.next_double() * cfg.height;
      const double cx = rng.next_double() * cfg.width;
      const double a = lo + rng.next_double() * (hi - lo);
      const double b = lo + rng.next_double() * (hi - lo);
      const double angle = rng.next_double() * 3.14159265358979323846;
      const double ca = std::cos(angle), sa = std::sin(angle);
      for (int r = 0; r < cfg.height; ++r)
        for (int c = 0; c < cfg.width; ++c) {
          const double dy = r + 0.5 - cy, dx = c + 0.5 - cx;
          const double u = (dx * ca + dy * sa) / a;
          const double v = (-dx * sa + dy * ca) / b;
          if (u * u + v * v <= 1.0)
            grid.valid_mask[static_cast<std::size_t>(r) * cfg.width + c] = 0;
        }
    }
  }
  return grid;
}

}  // namespace geoeval
