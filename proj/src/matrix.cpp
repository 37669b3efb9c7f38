#include "cohn/matrix.hpp"

#include <sstream>

namespace cohn {

namespace {

std::string shape(const Matrix& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

}  // namespace

Matrix::Matrix(Ring ring, std::size_t rows, std::size_t cols)
    : ring_(ring), rows_(rows), cols_(cols), data_(rows * cols, Scalar::zero(ring)) {
  if (!ring) throw DomainError("matrix without a ring");
}

Matrix Matrix::identity(Ring ring, std::size_t n) {
  Matrix m(ring, n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = Scalar::one(ring);
  return m;
}

Matrix Matrix::from_ints(Ring ring, std::size_t rows, std::size_t cols, const std::vector<long>& row_major) {
  if (row_major.size() != rows * cols) throw DomainError("from_ints: entry count does not match shape");
  Matrix m(ring, rows, cols);
  for (std::size_t k = 0; k < row_major.size(); ++k) m.data_[k] = Scalar::from_int(ring, row_major[k]);
  return m;
}

Matrix Matrix::scalar(const Scalar& s) {
  Matrix m(s.ring(), 1, 1);
  m(0, 0) = s;
  return m;
}

Matrix Matrix::block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
  if (r0 + nr > rows_ || c0 + nc > cols_) throw DomainError("block out of range of " + shape(*this));
  Matrix b(ring_, nr, nc);
  for (std::size_t i = 0; i < nr; ++i)
    for (std::size_t j = 0; j < nc; ++j) b(i, j) = (*this)(r0 + i, c0 + j);
  return b;
}

void Matrix::set_block(std::size_t r0, std::size_t c0, const Matrix& b) {
  if (b.ring_ != ring_ && b.rows_ * b.cols_ > 0) throw DomainError("set_block: ring mismatch");
  if (r0 + b.rows_ > rows_ || c0 + b.cols_ > cols_)
    throw DomainError("set_block: " + shape(b) + " does not fit " + shape(*this));
  for (std::size_t i = 0; i < b.rows_; ++i)
    for (std::size_t j = 0; j < b.cols_; ++j) (*this)(r0 + i, c0 + j) = b(i, j);
}

bool Matrix::is_zero() const {
  for (const auto& x : data_)
    if (!x.is_zero()) return false;
  return true;
}

bool Matrix::is_identity() const { return square() && *this == identity(ring_, rows_); }

Matrix Matrix::operator*(const Matrix& b) const {
  if (ring_ != b.ring_) throw DomainError("matrix product: ring mismatch");
  if (cols_ != b.rows_) throw DomainError("matrix product: " + shape(*this) + " * " + shape(b));
  Matrix r(ring_, rows_, b.cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = 0; k < cols_; ++k) {
      const Scalar& a = (*this)(i, k);
      if (a.is_zero()) continue;
      for (std::size_t j = 0; j < b.cols_; ++j) {
        const Scalar& c = b(k, j);
        if (!c.is_zero()) r(i, j) += a * c;
      }
    }
  return r;
}

Matrix Matrix::operator+(const Matrix& b) const {
  if (ring_ != b.ring_) throw DomainError("matrix sum: ring mismatch");
  if (rows_ != b.rows_ || cols_ != b.cols_) throw DomainError("matrix sum: " + shape(*this) + " + " + shape(b));
  Matrix r = *this;
  for (std::size_t k = 0; k < data_.size(); ++k) r.data_[k] += b.data_[k];
  return r;
}

Matrix Matrix::operator-(const Matrix& b) const { return *this + (-b); }

Matrix Matrix::operator-() const {
  Matrix r = *this;
  for (auto& x : r.data_) x = -x;
  return r;
}

Matrix Matrix::scaled(const Scalar& s) const {
  Matrix r = *this;
  for (auto& x : r.data_) x = s * x;
  return r;
}

bool Matrix::operator==(const Matrix& b) const {
  return ring_ == b.ring_ && rows_ == b.rows_ && cols_ == b.cols_ && data_ == b.data_;
}

std::string Matrix::to_string() const {
  if (rows_ == 0 || cols_ == 0) return "zero(" + std::to_string(rows_) + "," + std::to_string(cols_) + ")";
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < rows_; ++i) {
    if (i) os << ", ";
    os << "[";
    for (std::size_t j = 0; j < cols_; ++j) {
      if (j) os << ", ";
      os << (*this)(i, j).to_string();
    }
    os << "]";
  }
  os << "]";
  return os.str();
}

Matrix dsum(const Matrix& a, const Matrix& b) {
  if (a.ring() != b.ring()) throw DomainError("dsum: ring mismatch");
  Matrix r(a.ring(), a.rows() + b.rows(), a.cols() + b.cols());
  r.set_block(0, 0, a);
  r.set_block(a.rows(), a.cols(), b);
  return r;
}

Matrix dsum(const std::vector<Matrix>& parts, Ring ring) {
  Matrix r(ring, 0, 0);
  for (const auto& p : parts) r = dsum(r, p);
  return r;
}

Matrix hcat(const std::vector<Matrix>& parts) {
  if (parts.empty()) throw DomainError("hcat of nothing");
  std::size_t cols = 0;
  for (const auto& p : parts) {
    if (p.rows() != parts[0].rows()) throw DomainError("hcat: row counts differ");
    cols += p.cols();
  }
  Matrix r(parts[0].ring(), parts[0].rows(), cols);
  std::size_t c = 0;
  for (const auto& p : parts) {
    r.set_block(0, c, p);
    c += p.cols();
  }
  return r;
}

Matrix vcat(const std::vector<Matrix>& parts) {
  if (parts.empty()) throw DomainError("vcat of nothing");
  std::size_t rows = 0;
  for (const auto& p : parts) {
    if (p.cols() != parts[0].cols()) throw DomainError("vcat: column counts differ");
    rows += p.rows();
  }
  Matrix r(parts[0].ring(), rows, parts[0].cols());
  std::size_t k = 0;
  for (const auto& p : parts) {
    r.set_block(k, 0, p);
    k += p.rows();
  }
  return r;
}

Matrix block_matrix(const std::vector<std::vector<Matrix>>& grid) {
  std::vector<Matrix> rows;
  rows.reserve(grid.size());
  for (const auto& row : grid) rows.push_back(hcat(row));
  return vcat(rows);
}

}  // namespace cohn
