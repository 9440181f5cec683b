#pragma once

#include <cstddef>
#include <vector>

#include "geoeval/errors.hpp"

namespace geoeval {

// Dense row-major matrix of doubles. Feature tables are rows x columns
// (observations x covariates).
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c, double fill = 0.0)
      : rows(r), cols(c), data(r * c, fill) {}

  double& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }

  const double* row_ptr(std::size_t r) const { return data.data() + r * cols; }
  double* row_ptr(std::size_t r) { return data.data() + r * cols; }

  bool empty() const { return rows == 0 || cols == 0; }

  std::vector<double> row_copy(std::size_t r) const {
    return std::vector<double>(row_ptr(r), row_ptr(r) + cols);
  }

  void append_row(const double* src) {
    data.insert(data.end(), src, src + cols);
    ++rows;
  }
};

inline void require_same_shape(const Matrix& a, const Matrix& b) {
  if (a.rows != b.rows || a.cols != b.cols)
    throw ShapeError("matrix shapes differ");
}

}  // namespace geoeval
