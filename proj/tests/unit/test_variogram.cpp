#include <cmath>
#include <vector>

#include "doctest.h"
#include "geoeval/errors.hpp"
#include "geoeval/grid.hpp"
#include "geoeval/variogram.hpp"

using namespace geoeval;

namespace {

SampleSet line_samples(const std::vector<double>& z) {
  SampleSet s;
  s.covariate_names = {"a"};
  s.features = Matrix(z.size(), 1);
  for (std::size_t i = 0; i < z.size(); ++i) {
    s.locations.push_back({0, static_cast<int>(i)});
    s.features(i, 0) = 0.0;
    s.target.push_back(z[i]);
  }
  return s;
}

double exp_gamma(double h, double nugget, double psill, double theta) {
  return nugget + psill * (1.0 - std::exp(-h / theta));
}

double sph_gamma(double h, double nugget, double psill, double range) {
  if (h >= range) return nugget + psill;
  const double r = h / range;
  return nugget + psill * (1.5 * r - 0.5 * r * r * r);
}

EmpiricalVariogram curve_from(double nugget, double psill, double param, bool spherical) {
  EmpiricalVariogram emp;
  for (int k = 0; k < 15; ++k) {
    const double h = k + 0.5;
    emp.lag_centers.push_back(h);
    emp.semivariances.push_back(spherical ? sph_gamma(h, nugget, psill, param)
                                          : exp_gamma(h, nugget, psill, param));
    emp.pair_counts.push_back(80);
  }
  return emp;
}

}  // namespace

TEST_SUITE("variogram") {

TEST_CASE("two points, one pair, half the squared difference") {
  // Cells (0,0) and (0,3) are 3 apart; z gap of 2 gives semivariance 2.
  SampleSet s;
  s.covariate_names = {"a"};
  s.features = Matrix(2, 1);
  s.locations = {{0, 0}, {0, 3}};
  s.target = {1.0, 3.0};
  const EmpiricalVariogram emp = empirical_semivariogram(s, 3, 3.0);
  REQUIRE(emp.lag_centers.size() == 3);
  CHECK(emp.lag_centers[0] == doctest::Approx(0.5));
  CHECK(emp.lag_centers[2] == doctest::Approx(2.5));
  CHECK(emp.pair_counts == std::vector<std::size_t>{0, 0, 1});
  CHECK(emp.semivariances[2] == doctest::Approx(2.0));
  CHECK(emp.semivariances[0] == 0.0);
}

TEST_CASE("collinear triple lands pairs in the right bins") {
  // Targets 0,1,3 on consecutive cells: lag-1 pairs have squared gaps 1 and
  // 4 (mean semivariance 1.25), the lag-2 pair has 9 (semivariance 4.5).
  const SampleSet s = line_samples({0.0, 1.0, 3.0});
  const EmpiricalVariogram emp = empirical_semivariogram(s, 2, 2.0);
  CHECK(emp.pair_counts == std::vector<std::size_t>{2, 1});
  CHECK(emp.semivariances[0] == doctest::Approx(1.25));
  CHECK(emp.semivariances[1] == doctest::Approx(4.5));
}

TEST_CASE("pairs beyond max_dist are ignored") {
  const SampleSet s = line_samples({0.0, 1.0, 3.0, 10.0});
  const EmpiricalVariogram emp = empirical_semivariogram(s, 2, 2.0);
  // Distances 3 exceed max_dist; only the five pairs at h in {1,2} count.
  CHECK(emp.pair_counts[0] + emp.pair_counts[1] == 5);
}

TEST_CASE("empirical estimator rejects unusable input") {
  const SampleSet s = line_samples({0.0, 1.0});
  CHECK_THROWS_AS(empirical_semivariogram(s, 0, 3.0), ValueError);
  CHECK_THROWS_AS(empirical_semivariogram(s, 3, 0.0), ValueError);
  CHECK_THROWS_AS(empirical_semivariogram(line_samples({1.0}), 3, 3.0), InsufficientDataError);
  // All pairs farther than max_dist: nothing to estimate from.
  SampleSet far;
  far.covariate_names = {"a"};
  far.features = Matrix(2, 1);
  far.locations = {{0, 0}, {0, 30}};
  far.target = {0.0, 1.0};
  CHECK_THROWS_AS(empirical_semivariogram(far, 3, 3.0), InsufficientDataError);
}

TEST_CASE("default max distance is half the bounding-box diagonal") {
  SampleSet s;
  s.covariate_names = {"a"};
  s.features = Matrix(2, 1);
  s.locations = {{0, 0}, {3, 4}};
  s.target = {0.0, 0.0};
  CHECK(default_variogram_max_dist(s) == doctest::Approx(2.5));  // 3-4-5 triangle

  SampleSet close;
  close.covariate_names = {"a"};
  close.features = Matrix(2, 1);
  close.locations = {{0, 0}, {0, 1}};
  close.target = {0.0, 0.0};
  CHECK(default_variogram_max_dist(close) == 2.0);  // floor kicks in
}

TEST_CASE("exponential fit recovers the generating parameters") {
  const double nugget = 0.5, psill = 2.0, theta = 4.0;
  const EmpiricalVariogram emp = curve_from(nugget, psill, theta, false);
  const VariogramFit fit = fit_variogram(emp, VariogramFamily::exponential);
  CHECK_FALSE(fit.flat);
  CHECK(fit.family == VariogramFamily::exponential);
  CHECK(fit.range_param == doctest::Approx(theta).epsilon(0.02));
  CHECK(fit.effective_range == doctest::Approx(3.0 * theta).epsilon(0.02));
  CHECK(fit.effective_range == 3.0 * fit.range_param);
  CHECK(fit.nugget == doctest::Approx(nugget).epsilon(0.05));
  CHECK(fit.partial_sill == doctest::Approx(psill).epsilon(0.05));
  CHECK(fit.residual < 1e-6);
}

TEST_CASE("spherical fit recovers the generating parameters") {
  const double nugget = 0.3, psill = 1.5, range = 9.0;
  const EmpiricalVariogram emp = curve_from(nugget, psill, range, true);
  const VariogramFit fit = fit_variogram(emp, VariogramFamily::spherical);
  CHECK_FALSE(fit.flat);
  CHECK(fit.range_param == doctest::Approx(range).epsilon(0.02));
  CHECK(fit.effective_range == fit.range_param);
  CHECK(fit.nugget == doctest::Approx(nugget).epsilon(0.05));
  CHECK(fit.partial_sill == doctest::Approx(psill).epsilon(0.05));
}

TEST_CASE("a flat curve means no spatial structure") {
  EmpiricalVariogram emp;
  for (int k = 0; k < 6; ++k) {
    emp.lag_centers.push_back(k + 0.5);
    emp.semivariances.push_back(1.7);
    emp.pair_counts.push_back(10);
  }
  const VariogramFit fit = fit_variogram(emp, VariogramFamily::exponential);
  CHECK(fit.flat);
  CHECK(fit.effective_range == 1.0);
  CHECK(fit.partial_sill == 0.0);
  CHECK(fit.nugget == doctest::Approx(1.7));
}

TEST_CASE("a decreasing curve also falls back to flat") {
  EmpiricalVariogram emp;
  for (int k = 0; k < 8; ++k) {
    emp.lag_centers.push_back(k + 0.5);
    emp.semivariances.push_back(2.0 - 0.1 * k);
    emp.pair_counts.push_back(10);
  }
  const VariogramFit fit = fit_variogram(emp, VariogramFamily::exponential);
  CHECK(fit.flat);
  CHECK(fit.effective_range == 1.0);
}

TEST_CASE("fit needs at least three informative lags") {
  EmpiricalVariogram emp;
  emp.lag_centers = {0.5, 1.5, 2.5};
  emp.semivariances = {1.0, 2.0, 0.0};
  emp.pair_counts = {4, 4, 0};  // only two lags carry pairs
  CHECK_THROWS_AS(fit_variogram(emp, VariogramFamily::exponential), InsufficientDataError);
}

TEST_CASE("block side is clamped to the usable band") {
  CHECK(clamp_block_side(250.0, 200, 200) == 100.0);
  CHECK(clamp_block_side(0.5, 50, 80) == 2.0);
  CHECK(clamp_block_side(30.0, 100, 60) == 30.0);
  CHECK(clamp_block_side(5.0, 3, 3) == 2.0);  // tiny grids still get a floor
}

}  // TEST_SUITE
