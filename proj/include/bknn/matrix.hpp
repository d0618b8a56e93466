#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "bknn/errors.hpp"

namespace bknn {

/// Dense row-major point matrix: n points in d dimensions.
struct Matrix {
  std::size_t n = 0;
  std::size_t d = 0;
  std::vector<double> values;  // n * d doubles, row-major

  Matrix() = default;
  Matrix(std::size_t n_, std::size_t d_) : n(n_), d(d_), values(n_ * d_) {}
  Matrix(std::size_t n_, std::size_t d_, std::vector<double> v) : n(n_), d(d_), values(std::move(v)) {
    if (values.size() != n * d) throw ShapeError("matrix storage size does not match n*d");
  }

  std::span<const double> row(std::size_t i) const { return {values.data() + i * d, d}; }
  std::span<double> row(std::size_t i) { return {values.data() + i * d, d}; }
  const double* row_ptr(std::size_t i) const { return values.data() + i * d; }

  bool all_finite() const {
    for (double v : values)
      if (!std::isfinite(v)) return false;
    return true;
  }
};

}  // namespace bknn
