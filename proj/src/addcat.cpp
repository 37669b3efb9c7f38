#include "cohn/addcat.hpp"

#include "cohn/linsolve.hpp"

namespace cohn {

MatMorphism mat_ops(MatOp op, const MatMorphism& f, const MatMorphism& g) {
  switch (op) {
    case MatOp::Compose: return f * g;
    case MatOp::Add: return f + g;
    case MatOp::DirectSum: return dsum(f, g);
    case MatOp::Negate: return -f;
  }
  throw DomainError("unknown matrix op");
}

CanonicalMaps canonical_maps(Ring ring, std::size_t x, std::size_t y) {
  CanonicalMaps m;
  m.in_x = vcat({Matrix::identity(ring, x), Matrix::zero(ring, y, x)});
  m.pr_x = hcat({Matrix::identity(ring, x), Matrix::zero(ring, x, y)});
  m.in_y = vcat({Matrix::zero(ring, x, y), Matrix::identity(ring, y)});
  m.pr_y = hcat({Matrix::zero(ring, y, x), Matrix::identity(ring, y)});
  return m;
}

bool is_idempotent(const MatMorphism& p) { return p.square() && p * p == p; }

bool is_kar_morphism(const KarObject& src, const KarObject& dst, const MatMorphism& f) {
  if (f.rows() != dst.base || f.cols() != src.base) return false;
  return dst.idempotent * f * src.idempotent == f;
}

bool check_small_envelope(const SmallEnvelopeWitness& w) {
  const auto& p = w.object.idempotent;
  const std::size_t n = w.object.base;
  if (p.rows() != n || p.cols() != n) return false;
  if (w.q.rows() != w.complement || w.q.cols() != n) return false;
  if (w.s.rows() != n || w.s.cols() != w.complement) return false;
  if (!is_idempotent(p)) return false;
  Ring r = p.ring();
  return w.s * w.q == Matrix::identity(r, n) - p && w.q * w.s == Matrix::identity(r, w.complement);
}

namespace {

bool verify_inverse(const Matrix& f, const Matrix& g) {
  const Matrix id = Matrix::identity(f.ring(), f.rows());
  return f * g == id && g * f == id;
}

// Back-substitution for a triangular matrix whose diagonal entries are units.
std::optional<Matrix> triangular_inverse(const Matrix& f, bool lower) {
  const std::size_t n = f.rows();
  std::vector<Scalar> dinv;
  for (std::size_t i = 0; i < n; ++i) {
    auto u = try_invert(f(i, i));
    if (!u) return std::nullopt;
    dinv.push_back(*u);
  }
  Matrix x(f.ring(), n, n);
  for (std::size_t step = 0; step < n; ++step) {
    const std::size_t i = lower ? step : n - 1 - step;
    x(i, i) = dinv[i];
    // Row i of f*x = e_i: f_ii x_ij = -sum_{k strictly between} f_ik x_kj.
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i || (lower ? j > i : j < i)) continue;
      Scalar acc = Scalar::zero(f.ring());
      if (lower) {
        for (std::size_t k = j; k < i; ++k) acc += f(i, k) * x(k, j);
      } else {
        for (std::size_t k = i + 1; k <= j; ++k) acc += f(i, k) * x(k, j);
      }
      x(i, j) = -(dinv[i] * acc);
    }
  }
  return x;
}

bool is_lower(const Matrix& f) {
  for (std::size_t i = 0; i < f.rows(); ++i)
    for (std::size_t j = i + 1; j < f.cols(); ++j)
      if (!f(i, j).is_zero()) return false;
  return true;
}

bool is_upper(const Matrix& f) {
  for (std::size_t i = 0; i < f.rows(); ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (!f(i, j).is_zero()) return false;
  return true;
}

Matrix map_entries(const Matrix& m, Ring target, Scalar (*fn)(const Scalar&)) {
  Matrix r(target, m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) = fn(m(i, j));
  return r;
}

// Pull a fraction-field matrix back to the base ring when every entry lies in it.
std::optional<Matrix> pull_back(const Matrix& m, Ring base) {
  Matrix r(base, m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) {
      const auto& p = m(i, j).payload();
      if (base->kind == RingKind::Integers) {
        const auto& q = std::get<mpq_class>(p);
        if (q.get_den() != 1) return std::nullopt;
        r(i, j) = Scalar(base, mpz_class(q.get_num()));
      } else {
        const auto& f = std::get<RatFunc>(p);
        if (f.den.degree() != 0) return std::nullopt;
        r(i, j) = Scalar(base, f.num);
      }
    }
  return r;
}

}  // namespace

std::optional<MatMorphism> invert_matrix(const MatMorphism& f) {
  if (!f.square()) return std::nullopt;
  Ring r = f.ring();
  const std::size_t n = f.rows();
  if (n == 0) return f;
  switch (r->kind) {
    case RingKind::Rationals:
    case RingKind::RationalFunctions: {
      auto s = solve_linear(f, Matrix::identity(r, n));
      if (s.status != SolveStatus::Solved) return std::nullopt;
      return s.x;
    }
    case RingKind::Integers:
    case RingKind::Polynomials: {
      // Invert over the fraction field; integrality of the inverse is the
      // determinant-unit test.
      Matrix ff = map_entries(f, fraction_field_of(r), to_fraction_field);
      auto s = solve_linear(ff, Matrix::identity(ff.ring(), n));
      if (s.status != SolveStatus::Solved) return std::nullopt;
      auto back = pull_back(s.x, r);
      if (!back || !verify_inverse(f, *back)) return std::nullopt;
      return back;
    }
    case RingKind::FreeAlgebra: {
      std::optional<Matrix> g;
      if (is_lower(f)) g = triangular_inverse(f, true);
      else if (is_upper(f)) g = triangular_inverse(f, false);
      if (!g || !verify_inverse(f, *g)) return std::nullopt;
      return g;
    }
  }
  return std::nullopt;
}

}  // namespace cohn
