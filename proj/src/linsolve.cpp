#include "cohn/linsolve.hpp"

#include <utility>

namespace cohn {

namespace {

// Dense row-major work array; T is mpq_class for Q and Scalar for Q(t).
template <class T>
struct Work {
  std::size_t rows, cols;
  std::vector<T> a;
  T& at(std::size_t i, std::size_t j) { return a[i * cols + j]; }
};

bool is_zero_el(const mpq_class& x) { return x == 0; }
bool is_zero_el(const Scalar& x) { return x.is_zero(); }
mpq_class div_el(const mpq_class& x, const mpq_class& y) { return x / y; }
Scalar div_el(const Scalar& x, const Scalar& y) { return field_div(x, y); }

template <class T>
Work<T> load(const Matrix& m);

template <>
Work<mpq_class> load(const Matrix& m) {
  Work<mpq_class> w{m.rows(), m.cols(), {}};
  w.a.reserve(m.rows() * m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) {
      const auto& p = m(i, j).payload();
      if (const auto* z = std::get_if<mpz_class>(&p)) w.a.emplace_back(*z);
      else w.a.push_back(std::get<mpq_class>(p));
    }
  return w;
}

template <>
Work<Scalar> load(const Matrix& m) {
  Work<Scalar> w{m.rows(), m.cols(), {}};
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) w.a.push_back(m(i, j));
  return w;
}

Matrix store(const Work<mpq_class>& w, Ring ring) {
  Matrix m(ring, w.rows, w.cols);
  for (std::size_t i = 0; i < w.rows; ++i)
    for (std::size_t j = 0; j < w.cols; ++j) m(i, j) = Scalar::from_rational(ring, w.a[i * w.cols + j]);
  return m;
}

Matrix store(const Work<Scalar>& w, Ring ring) {
  Matrix m(ring, w.rows, w.cols);
  for (std::size_t i = 0; i < w.rows; ++i)
    for (std::size_t j = 0; j < w.cols; ++j) m(i, j) = w.a[i * w.cols + j];
  return m;
}

// Gauss-Jordan on the first `pivot_cols` columns; returns pivot columns.
template <class T>
std::vector<std::size_t> gauss_jordan(Work<T>& w, std::size_t pivot_cols) {
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < pivot_cols && row < w.rows; ++col) {
    std::size_t p = row;
    while (p < w.rows && is_zero_el(w.at(p, col))) ++p;
    if (p == w.rows) continue;
    if (p != row)
      for (std::size_t j = 0; j < w.cols; ++j) std::swap(w.at(p, j), w.at(row, j));
    T piv = w.at(row, col);
    for (std::size_t j = col; j < w.cols; ++j) w.at(row, j) = div_el(w.at(row, j), piv);
    for (std::size_t i = 0; i < w.rows; ++i) {
      if (i == row || is_zero_el(w.at(i, col))) continue;
      T f = w.at(i, col);
      for (std::size_t j = col; j < w.cols; ++j)
        if (!is_zero_el(w.at(row, j))) w.at(i, j) = w.at(i, j) - f * w.at(row, j);
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

template <class T>
SolveResult field_solve(const Matrix& a, const Matrix& b, Ring out_ring) {
  const std::size_t n = a.cols(), k = b.cols();
  Work<T> w = load<T>(hcat({a, b}));
  auto pivots = gauss_jordan(w, n);
  for (std::size_t i = pivots.size(); i < w.rows; ++i)
    for (std::size_t j = 0; j < k; ++j)
      if (!is_zero_el(w.at(i, n + j))) return {SolveStatus::NoSolution, {}};
  Work<T> x{n, k, std::vector<T>(n * k)};
  if constexpr (std::is_same_v<T, Scalar>)
    for (auto& e : x.a) e = Scalar::zero(out_ring);
  for (std::size_t r = 0; r < pivots.size(); ++r)
    for (std::size_t j = 0; j < k; ++j) x.at(pivots[r], j) = w.at(r, n + j);
  return {SolveStatus::Solved, store(x, out_ring)};
}

template <class T>
Matrix field_kernel(const Matrix& a, Ring out_ring) {
  Work<T> w = load<T>(a);
  auto pivots = gauss_jordan(w, a.cols());
  std::vector<bool> is_pivot(a.cols(), false);
  for (auto p : pivots) is_pivot[p] = true;
  std::vector<std::size_t> free;
  for (std::size_t j = 0; j < a.cols(); ++j)
    if (!is_pivot[j]) free.push_back(j);
  Matrix k(out_ring, a.cols(), free.size());
  for (std::size_t f = 0; f < free.size(); ++f) {
    k(free[f], f) = Scalar::one(out_ring);
    for (std::size_t r = 0; r < pivots.size(); ++r) {
      if constexpr (std::is_same_v<T, Scalar>) k(pivots[r], f) = -w.at(r, free[f]);
      else k(pivots[r], f) = Scalar::from_rational(out_ring, -w.at(r, free[f]));
    }
  }
  return k;
}

void check_ring(const Matrix& a, const Matrix& b) {
  if (a.ring() != b.ring()) throw DomainError("solve_linear: ring mismatch");
  if (a.rows() != b.rows()) throw DomainError("solve_linear: system has " + std::to_string(a.rows()) +
                                              " rows, right-hand side " + std::to_string(b.rows()));
}

// ---------------------------------------------------------------- Smith form

struct ZWork {
  std::size_t rows, cols;
  std::vector<mpz_class> a;
  mpz_class& at(std::size_t i, std::size_t j) { return a[i * cols + j]; }
};

ZWork zload(const Matrix& m) {
  ZWork w{m.rows(), m.cols(), {}};
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) w.a.push_back(std::get<mpz_class>(m(i, j).payload()));
  return w;
}

ZWork zidentity(std::size_t n) {
  ZWork w{n, n, std::vector<mpz_class>(n * n, mpz_class(0))};
  for (std::size_t i = 0; i < n; ++i) w.at(i, i) = 1;
  return w;
}

Matrix zstore(const ZWork& w) {
  Ring z = integers();
  Matrix m(z, w.rows, w.cols);
  for (std::size_t i = 0; i < w.rows; ++i)
    for (std::size_t j = 0; j < w.cols; ++j) m(i, j) = Scalar(z, w.a[i * w.cols + j]);
  return m;
}

void row_swap(ZWork& w, std::size_t i, std::size_t k) {
  if (i == k) return;
  for (std::size_t j = 0; j < w.cols; ++j) std::swap(w.at(i, j), w.at(k, j));
}
void col_swap(ZWork& w, std::size_t i, std::size_t k) {
  if (i == k) return;
  for (std::size_t r = 0; r < w.rows; ++r) std::swap(w.at(r, i), w.at(r, k));
}
// row_i += q * row_k
void row_addmul(ZWork& w, std::size_t i, std::size_t k, const mpz_class& q) {
  for (std::size_t j = 0; j < w.cols; ++j) w.at(i, j) += q * w.at(k, j);
}
void col_addmul(ZWork& w, std::size_t i, std::size_t k, const mpz_class& q) {
  for (std::size_t r = 0; r < w.rows; ++r) w.at(r, i) += q * w.at(r, k);
}

struct ZSmith {
  ZWork u, d, v;
  std::size_t rank;
};

ZSmith zsmith(const Matrix& m) {
  ZWork d = zload(m), u = zidentity(m.rows()), v = zidentity(m.cols());
  const std::size_t lim = std::min(d.rows, d.cols);
  std::size_t t = 0;
  for (; t < lim; ++t) {
    // Smallest nonzero entry of the trailing block moves to (t, t).
    std::size_t bi = d.rows, bj = d.cols;
    for (std::size_t i = t; i < d.rows; ++i)
      for (std::size_t j = t; j < d.cols; ++j)
        if (d.at(i, j) != 0 && (bi == d.rows || abs(d.at(i, j)) < abs(d.at(bi, bj)))) bi = i, bj = j;
    if (bi == d.rows) break;
    row_swap(d, t, bi), row_swap(u, t, bi);
    col_swap(d, t, bj), col_swap(v, t, bj);
    while (true) {
      bool clean = true;
      for (std::size_t i = t + 1; i < d.rows; ++i) {
        if (d.at(i, t) == 0) continue;
        mpz_class q;
        mpz_tdiv_q(q.get_mpz_t(), d.at(i, t).get_mpz_t(), d.at(t, t).get_mpz_t());
        row_addmul(d, i, t, -q), row_addmul(u, i, t, -q);
        if (d.at(i, t) != 0) {
          row_swap(d, t, i), row_swap(u, t, i);
          clean = false;
        }
      }
      for (std::size_t j = t + 1; j < d.cols; ++j) {
        if (d.at(t, j) == 0) continue;
        mpz_class q;
        mpz_tdiv_q(q.get_mpz_t(), d.at(t, j).get_mpz_t(), d.at(t, t).get_mpz_t());
        col_addmul(d, j, t, -q), col_addmul(v, j, t, -q);
        if (d.at(t, j) != 0) {
          col_swap(d, t, j), col_swap(v, t, j);
          clean = false;
        }
      }
      if (!clean) continue;
      // Divisibility: pull a non-divisible entry into row t and go again.
      bool divisible = true;
      for (std::size_t i = t + 1; i < d.rows && divisible; ++i)
        for (std::size_t j = t + 1; j < d.cols; ++j)
          if (!mpz_divisible_p(d.at(i, j).get_mpz_t(), d.at(t, t).get_mpz_t())) {
            row_addmul(d, t, i, 1), row_addmul(u, t, i, 1);
            divisible = false;
            break;
          }
      if (divisible) break;
    }
    if (d.at(t, t) < 0) {
      for (std::size_t j = 0; j < d.cols; ++j) d.at(t, j) = -d.at(t, j);
      for (std::size_t j = 0; j < u.cols; ++j) u.at(t, j) = -u.at(t, j);
    }
  }
  return {std::move(u), std::move(d), std::move(v), t};
}

SolveResult integer_solve(const Matrix& a, const Matrix& b) {
  ZSmith s = zsmith(a);
  ZWork zb = zload(b);
  // c = U b
  ZWork c{a.rows(), b.cols(), std::vector<mpz_class>(a.rows() * b.cols(), mpz_class(0))};
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.rows(); ++k) {
      if (s.u.at(i, k) == 0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c.at(i, j) += s.u.at(i, k) * zb.at(k, j);
    }
  ZWork y{a.cols(), b.cols(), std::vector<mpz_class>(a.cols() * b.cols(), mpz_class(0))};
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) {
      if (i < s.rank) {
        if (!mpz_divisible_p(c.at(i, j).get_mpz_t(), s.d.at(i, i).get_mpz_t())) return {SolveStatus::NoSolution, {}};
        y.at(i, j) = c.at(i, j) / s.d.at(i, i);
      } else if (c.at(i, j) != 0) {
        return {SolveStatus::NoSolution, {}};
      }
    }
  return {SolveStatus::Solved, zstore(s.v) * zstore(y)};
}

}  // namespace

SolveResult solve_linear(const Matrix& a, const Matrix& b) {
  check_ring(a, b);
  switch (a.ring()->kind) {
    case RingKind::Rationals: return field_solve<mpq_class>(a, b, a.ring());
    case RingKind::RationalFunctions: return field_solve<Scalar>(a, b, a.ring());
    case RingKind::Integers: return integer_solve(a, b);
    default: return {SolveStatus::Unsupported, {}};
  }
}

std::optional<Matrix> kernel_basis(const Matrix& a) {
  switch (a.ring()->kind) {
    case RingKind::Rationals: return field_kernel<mpq_class>(a, a.ring());
    case RingKind::RationalFunctions: return field_kernel<Scalar>(a, a.ring());
    case RingKind::Integers: {
      ZSmith s = zsmith(a);
      return zstore(s.v).block(0, s.rank, a.cols(), a.cols() - s.rank);
    }
    default: return std::nullopt;
  }
}

std::optional<std::size_t> rank_of(const Matrix& a) {
  switch (a.ring()->kind) {
    case RingKind::Rationals:
    case RingKind::Integers: {
      Work<mpq_class> w = load<mpq_class>(a);
      return gauss_jordan(w, a.cols()).size();
    }
    case RingKind::RationalFunctions: {
      Work<Scalar> w = load<Scalar>(a);
      return gauss_jordan(w, a.cols()).size();
    }
    default: return std::nullopt;
  }
}

SmithForm smith_normal_form(const Matrix& a) {
  if (a.ring()->kind != RingKind::Integers) throw DomainError("Smith normal form needs integer entries");
  ZSmith s = zsmith(a);
  return {zstore(s.u), zstore(s.d), zstore(s.v), s.rank};
}

Echelon rref(const Matrix& a) {
  switch (a.ring()->kind) {
    case RingKind::Rationals: {
      Work<mpq_class> w = load<mpq_class>(a);
      auto p = gauss_jordan(w, a.cols());
      return {store(w, a.ring()), p};
    }
    case RingKind::RationalFunctions: {
      Work<Scalar> w = load<Scalar>(a);
      auto p = gauss_jordan(w, a.cols());
      return {store(w, a.ring()), p};
    }
    default: throw DomainError("rref needs a field, got " + a.ring()->name());
  }
}

}  // namespace cohn
