#pragma once

#include "cohn/linsolve.hpp"

#include <utility>
#include <vector>

namespace cohn::detail {

// Linear system in several unknown matrix blocks, vectorized row-major.
struct Unknown {
  std::size_t off, rows, cols;
};

class System {
 public:
  explicit System(Ring r) : ring_(r) {}

  Unknown add_unknown(std::size_t rows, std::size_t cols) {
    Unknown u{count_, rows, cols};
    count_ += rows * cols;
    return u;
  }

  struct Term {
    const Matrix* left;  // nullptr means identity
    Unknown x;
    const Matrix* right;  // nullptr means identity
  };

  /// sum of left * X * right = rhs
  void equation(const std::vector<Term>& terms, const Matrix& rhs) {
    for (std::size_t i = 0; i < rhs.rows(); ++i)
      for (std::size_t j = 0; j < rhs.cols(); ++j) {
        std::vector<std::pair<std::size_t, Scalar>> row;
        for (const auto& t : terms) {
          for (std::size_t a = 0; a < t.x.rows; ++a) {
            Scalar la = t.left ? (*t.left)(i, a) : (a == i ? Scalar::one(ring_) : Scalar::zero(ring_));
            if (la.is_zero()) continue;
            for (std::size_t b = 0; b < t.x.cols; ++b) {
              Scalar rb = t.right ? (*t.right)(b, j) : (b == j ? Scalar::one(ring_) : Scalar::zero(ring_));
              if (rb.is_zero()) continue;
              row.emplace_back(t.x.off + a * t.x.cols + b, la * rb);
            }
          }
        }
        rows_.push_back(std::move(row));
        rhs_.push_back(rhs(i, j));
      }
  }

  std::size_t unknowns() const { return count_; }

  /// Coefficient matrix and right-hand side column.
  std::pair<Matrix, Matrix> matrices() const {
    Matrix a(ring_, rows_.size(), count_), b(ring_, rows_.size(), 1);
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      for (const auto& [col, v] : rows_[i]) a(i, col) += v;
      b(i, 0) = rhs_[i];
    }
    return {a, b};
  }

  SolveResult solve() const {
    auto [a, b] = matrices();
    if (count_ == 0) {
      if (b.is_zero()) return {SolveStatus::Solved, Matrix(ring_, 0, 1)};
      return {SolveStatus::NoSolution, {}};
    }
    return solve_linear(a, b);
  }

  /// Block u read from column `col` of a solution matrix.
  static Matrix extract(const Matrix& x, const Unknown& u, std::size_t col = 0) {
    Matrix m(x.ring(), u.rows, u.cols);
    for (std::size_t i = 0; i < u.rows; ++i)
      for (std::size_t j = 0; j < u.cols; ++j) m(i, j) = x(u.off + i * u.cols + j, col);
    return m;
  }

 private:
  Ring ring_;
  std::size_t count_ = 0;
  std::vector<std::vector<std::pair<std::size_t, Scalar>>> rows_;
  std::vector<Scalar> rhs_;
};

}  // namespace cohn::detail
