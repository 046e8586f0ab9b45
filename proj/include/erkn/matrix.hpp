#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace erkn {

using Vector = std::vector<double>;

/// Dense row-major matrix. Only what the small-dimension problems here need.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  static Matrix identity(std::size_t n);
  static Matrix diagonal(std::span<const double> d);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<const double> data() const { return data_; }

  double max_abs() const;

  /// y = A x
  Vector multiply(std::span<const double> x) const;
  /// y = A^T x
  Vector multiply_transposed(std::span<const double> x) const;
  void multiply(std::span<const double> x, std::span<double> y) const;
  void multiply_transposed(std::span<const double> x, std::span<double> y) const;

  Matrix operator*(const Matrix& o) const;
  Matrix transposed() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

double max_norm(std::span<const double> x);

}  // namespace erkn
