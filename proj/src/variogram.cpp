#include "geoeval/variogram.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "geoeval/errors.hpp"

namespace geoeval {

namespace {

double model_value(VariogramFamily family, double h, double range_param) {
  if (h <= 0.0) return 0.0;
  if (family == VariogramFamily::exponential) return 1.0 - std::exp(-h / range_param);
  if (h >= range_param) return 1.0;
  const double r = h / range_param;
  return 1.5 * r - 0.5 * r * r * r;
}

struct LinearFit {
  double nugget = 0.0;
  double psill = 0.0;
  double residual = 0.0;
};

// Weighted least squares of gamma ~ nugget + psill * g, with both
// coefficients constrained non-negative: solve unconstrained, then fall back
// to the better of the two boundary solutions when a sign goes wrong.
LinearFit solve_linear(const std::vector<double>& g, const std::vector<double>& gamma,
                       const std::vector<double>& w) {
  const std::size_t n = g.size();
  double sw = 0, swg = 0, swgg = 0, swy = 0, swgy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sw += w[i];
    swg += w[i] * g[i];
    swgg += w[i] * g[i] * g[i];
    swy += w[i] * gamma[i];
    swgy += w[i] * g[i] * gamma[i];
  }

  auto residual_of = [&](double nug, double ps) {
    double r = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double e = gamma[i] - (nug + ps * g[i]);
      r += w[i] * e * e;
    }
    return r;
  };

  std::vector<LinearFit> candidates;
  const double det = sw * swgg - swg * swg;
  if (std::fabs(det) > 1e-30 * std::max(1.0, sw * swgg)) {
    const double nug = (swy * swgg - swgy * swg) / det;
    const double ps = (sw * swgy - swg * swy) / det;
    if (nug >= 0.0 && ps >= 0.0) candidates.push_back({nug, ps, residual_of(nug, ps)});
  }
  {  // nugget pinned to 0
    const double ps = swgg > 0.0 ? std::max(0.0, swgy / swgg) : 0.0;
    candidates.push_back({0.0, ps, residual_of(0.0, ps)});
  }
  {  // partial sill pinned to 0 (pure nugget)
    const double nug = sw > 0.0 ? std::max(0.0, swy / sw) : 0.0;
    candidates.push_back({nug, 0.0, residual_of(nug, 0.0)});
  }

  LinearFit best = candidates.front();
  for (const LinearFit& c : candidates)
    if (c.residual < best.residual) best = c;
  return best;
}

}  // namespace

EmpiricalVariogram empirical_semivariogram(const SampleSet& samples, std::size_t n_lags,
                                           double max_dist) {
  const std::size_t n = samples.size();
  if (n < 2) throw InsufficientDataError("semivariogram needs at least 2 samples");
  if (n_lags < 1) throw ValueError("n_lags must be >= 1");
  if (!(max_dist > 0.0)) throw ValueError("max_dist must be positive");

  const double width = max_dist / n_lags;
  EmpiricalVariogram emp;
  emp.lag_centers.resize(n_lags);
  emp.semivariances.assign(n_lags, 0.0);
  emp.pair_counts.assign(n_lags, 0);
  for (std::size_t k = 0; k < n_lags; ++k) emp.lag_centers[k] = (k + 0.5) * width;

  std::vector<double> sums(n_lags, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double yi = cell_center_y(samples.locations[i]);
    const double xi = cell_center_x(samples.locations[i]);
    for (std::size_t j = i + 1; j < n; ++j) {
      const double dy = yi - cell_center_y(samples.locations[j]);
      const double dx = xi - cell_center_x(samples.locations[j]);
      const double h = std::sqrt(dy * dy + dx * dx);
      if (h <= 0.0 || h > max_dist) continue;
      // bins are (k*width, (k+1)*width]
      std::size_t k = static_cast<std::size_t>(std::ceil(h / width)) - 1;
      if (k >= n_lags) k = n_lags - 1;
      const double dz = samples.target[i] - samples.target[j];
      sums[k] += dz * dz;
      ++emp.pair_counts[k];
    }
  }

  std::size_t total_pairs = 0;
  for (std::size_t k = 0; k < n_lags; ++k) {
    total_pairs += emp.pair_counts[k];
    if (emp.pair_counts[k] > 0) emp.semivariances[k] = sums[k] / (2.0 * emp.pair_counts[k]);
  }
  if (total_pairs == 0)
    throw InsufficientDataError("no sample pairs within max_dist; variogram undefined");
  return emp;
}

double default_variogram_max_dist(const SampleSet& samples) {
  if (samples.size() == 0) throw InsufficientDataError("no samples");
  double ymin = cell_center_y(samples.locations[0]), ymax = ymin;
  double xmin = cell_center_x(samples.locations[0]), xmax = xmin;
  for (const Location& loc : samples.locations) {
    ymin = std::min(ymin, cell_center_y(loc));
    ymax = std::max(ymax, cell_center_y(loc));
    xmin = std::min(xmin, cell_center_x(loc));
    xmax = std::max(xmax, cell_center_x(loc));
  }
  const double diag = std::sqrt((ymax - ymin) * (ymax - ymin) + (xmax - xmin) * (xmax - xmin));
  return std::max(2.0, 0.5 * diag);
}

VariogramFit fit_variogram(const EmpiricalVariogram& emp, VariogramFamily family) {
  std::vector<double> h, gamma, w;
  for (std::size_t k = 0; k < emp.lag_centers.size(); ++k) {
    if (emp.pair_counts[k] == 0) continue;
    h.push_back(emp.lag_centers[k]);
    gamma.push_back(emp.semivariances[k]);
    w.push_back(static_cast<double>(emp.pair_counts[k]));
  }
  if (h.size() < 3) throw InsufficientDataError("variogram fit needs at least 3 nonempty lags");

  VariogramFit fit;
  fit.family = family;

  const double gmin = *std::min_element(gamma.begin(), gamma.end());
  const double gmax = *std::max_element(gamma.begin(), gamma.end());
  if (gmax == gmin) {
    // No variation across lags: pure nugget, no usable range.
    fit.nugget = gmax;
    fit.partial_sill = 0.0;
    fit.range_param = 1.0;
    fit.effective_range = 1.0;
    fit.flat = true;
    fit.residual = 0.0;
    return fit;
  }

  const double max_lag = h.back();
  std::vector<double> g(h.size());
  double best_theta = 0.0;
  LinearFit best_lin;
  double best_residual = std::numeric_limits<double>::infinity();

  auto evaluate = [&](double theta) {
    if (!(theta > 0.0)) return;
    for (std::size_t i = 0; i < h.size(); ++i) g[i] = model_value(family, h[i], theta);
    const LinearFit lin = solve_linear(g, gamma, w);
    if (lin.residual < best_residual) {
      best_residual = lin.residual;
      best_theta = theta;
      best_lin = lin;
    }
  };

  // Coarse grid over the plausible range, then two rounds of local
  // refinement around the incumbent.
  const int grid_n = 120;
  double step = 1.5 * max_lag / grid_n;
  for (int i = 1; i <= grid_n; ++i) evaluate(i * step);
  for (int round = 0; round < 2; ++round) {
    const double center = best_theta;
    const double fine = step / 10.0;
    for (int i = -9; i <= 9; ++i) evaluate(center + i * fine);
    step = fine;
  }

  fit.nugget = best_lin.nugget;
  fit.partial_sill = best_lin.psill;
  fit.range_param = best_theta;
  fit.residual = best_residual;
  if (fit.partial_sill <= 0.0) {
    fit.flat = true;
    fit.range_param = 1.0;
    fit.effective_range = 1.0;
  } else {
    fit.effective_range =
        family == VariogramFamily::exponential ? 3.0 * fit.range_param : fit.range_param;
  }
  return fit;
}

double clamp_block_side(double effective_range, int grid_width, int grid_height) {
  const double hi = std::max(2.0, std::max(grid_width, grid_height) / 2.0);
  return std::clamp(effective_range, 2.0, hi);
}

}  // namespace geoeval
