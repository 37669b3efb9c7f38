#pragma once

// Dense matrices over a coefficient ring. A Matrix with r rows and c columns
// is a morphism R^c -> R^r of Free(R); composition is the matrix product.

#include "cohn/coeff.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace cohn {

class Matrix {
 public:
  Matrix() = default;
  Matrix(Ring ring, std::size_t rows, std::size_t cols);

  static Matrix zero(Ring ring, std::size_t rows, std::size_t cols) { return {ring, rows, cols}; }
  static Matrix identity(Ring ring, std::size_t n);
  static Matrix from_ints(Ring ring, std::size_t rows, std::size_t cols, const std::vector<long>& row_major);
  static Matrix scalar(const Scalar& s);

  Ring ring() const { return ring_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  const Scalar& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  Scalar& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }

  Matrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const;
  void set_block(std::size_t r0, std::size_t c0, const Matrix& b);

  bool is_zero() const;
  bool is_identity() const;

  Matrix operator*(const Matrix& b) const;
  Matrix operator+(const Matrix& b) const;
  Matrix operator-(const Matrix& b) const;
  Matrix operator-() const;
  Matrix scaled(const Scalar& s) const;  // s * this, scalar on the left
  bool operator==(const Matrix& b) const;

  /// Row-major nested list, e.g. "[[1, 0], [5, 1]]"; empty matrices as "zero(r,c)".
  std::string to_string() const;

 private:
  Ring ring_ = nullptr;
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<Scalar> data_;
};

/// Block-diagonal sum.
Matrix dsum(const Matrix& a, const Matrix& b);
Matrix dsum(const std::vector<Matrix>& parts, Ring ring);
Matrix hcat(const std::vector<Matrix>& parts);
Matrix vcat(const std::vector<Matrix>& parts);
/// Assemble a grid of blocks; every row of blocks must agree on heights and
/// every column on widths.
Matrix block_matrix(const std::vector<std::vector<Matrix>>& grid);

}  // namespace cohn
