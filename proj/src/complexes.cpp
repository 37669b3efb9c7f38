#include "cohn/complexes.hpp"

#include "cohn/linsolve.hpp"

#include <algorithm>
#include <sstream>

namespace cohn {

// ---------------------------------------------------------------- complexes

BoundedComplex::BoundedComplex(Ring ring, int lo, std::vector<std::size_t> ranks, std::vector<Matrix> diffs)
    : ring_(ring), lo_(lo), ranks_(std::move(ranks)), diffs_(std::move(diffs)) {
  if (!ring_) throw DomainError("complex without a ring");
  const std::size_t want = ranks_.empty() ? 0 : ranks_.size() - 1;
  if (diffs_.size() != want)
    throw DomainError("complex: " + std::to_string(ranks_.size()) + " terms need " + std::to_string(want) +
                      " differentials, got " + std::to_string(diffs_.size()));
  for (std::size_t k = 0; k < diffs_.size(); ++k) {
    const int deg = lo_ + static_cast<int>(k);
    const Matrix& m = diffs_[k];
    if (m.ring() != ring_) throw DomainError("complex: differential d(" + std::to_string(deg) + ") has wrong ring");
    if (m.rows() != ranks_[k + 1] || m.cols() != ranks_[k])
      throw DomainError("complex: differential d(" + std::to_string(deg) + ") must be " +
                        std::to_string(ranks_[k + 1]) + "x" + std::to_string(ranks_[k]));
  }
  for (std::size_t k = 0; k + 1 < diffs_.size(); ++k) {
    if (!(diffs_[k + 1] * diffs_[k]).is_zero()) {
      const int deg = lo_ + static_cast<int>(k);
      throw DomainError("complex: d(" + std::to_string(deg + 1) + ") * d(" + std::to_string(deg) + ") != 0");
    }
  }
  // Trim zero terms at both ends.
  std::size_t first = 0;
  while (first < ranks_.size() && ranks_[first] == 0) ++first;
  std::size_t last = ranks_.size();
  while (last > first && ranks_[last - 1] == 0) --last;
  if (first == last) {
    lo_ = 0;
    ranks_.clear();
    diffs_.clear();
    return;
  }
  lo_ += static_cast<int>(first);
  ranks_ = std::vector<std::size_t>(ranks_.begin() + static_cast<long>(first), ranks_.begin() + static_cast<long>(last));
  diffs_ = std::vector<Matrix>(diffs_.begin() + static_cast<long>(first),
                               diffs_.begin() + static_cast<long>(last) - 1);
}

BoundedComplex BoundedComplex::one_term(Ring ring, int degree, std::size_t rank) {
  return {ring, degree, {rank}, {}};
}

BoundedComplex BoundedComplex::two_term(const Matrix& f, int lo) {
  return {f.ring(), lo, {f.cols(), f.rows()}, {f}};
}

std::size_t BoundedComplex::rank(int n) const {
  if (n < lo_ || n > hi()) return 0;
  return ranks_[static_cast<std::size_t>(n - lo_)];
}

Matrix BoundedComplex::d(int n) const {
  if (n >= lo_ && n < hi()) return diffs_[static_cast<std::size_t>(n - lo_)];
  return Matrix::zero(ring_, rank(n + 1), rank(n));
}

std::size_t BoundedComplex::total_rank() const {
  std::size_t s = 0;
  for (auto r : ranks_) s += r;
  return s;
}

bool BoundedComplex::operator==(const BoundedComplex& o) const {
  return ring_ == o.ring_ && lo_ == o.lo_ && ranks_ == o.ranks_ && diffs_ == o.diffs_;
}

std::string BoundedComplex::to_string() const {
  std::ostringstream os;
  os << "{";
  for (int n = lo_; n <= hi(); ++n) {
    if (n != lo_) os << ",";
    os << "(" << n << "," << rank(n) << ")";
  }
  os << "}";
  for (int n = lo_; n < hi(); ++n) os << " d(" << n << ") = " << d(n).to_string();
  return os.str();
}

// ---------------------------------------------------------------- chain maps

namespace {

Matrix zero_block(Ring r, std::size_t rows, std::size_t cols) { return Matrix::zero(r, rows, cols); }

}  // namespace

bool commutes(const BoundedComplex& s, const BoundedComplex& t, const std::map<int, Matrix>& comps) {
  if (s.is_zero() || t.is_zero()) return true;
  auto comp = [&](int n) {
    auto it = comps.find(n);
    return it == comps.end() ? zero_block(t.ring(), t.rank(n), s.rank(n)) : it->second;
  };
  const int lo = std::min(s.lo(), t.lo()) - 1, hi = std::max(s.hi(), t.hi());
  for (int n = lo; n <= hi; ++n)
    if (!(t.d(n) * comp(n) == comp(n + 1) * s.d(n))) return false;
  return true;
}

ChainMap::ChainMap(BoundedComplex source, BoundedComplex target, std::map<int, Matrix> comps)
    : source_(std::move(source)), target_(std::move(target)) {
  for (auto& [n, m] : comps) {
    if (m.rows() != target_.rank(n) || m.cols() != source_.rank(n))
      throw DomainError("chain map component in degree " + std::to_string(n) + " must be " +
                        std::to_string(target_.rank(n)) + "x" + std::to_string(source_.rank(n)));
    if (m.rows() == 0 || m.cols() == 0) continue;
    if (m.ring() != source_.ring()) throw DomainError("chain map component has wrong ring");
    comps_.emplace(n, std::move(m));
  }
  if (!commutes(source_, target_, comps_)) throw DomainError("chain map does not commute with differentials");
}

ChainMap ChainMap::identity(const BoundedComplex& c) {
  std::map<int, Matrix> m;
  for (int n = c.lo(); n <= c.hi(); ++n) m.emplace(n, Matrix::identity(c.ring(), c.rank(n)));
  return {c, c, std::move(m)};
}

ChainMap ChainMap::zero(const BoundedComplex& s, const BoundedComplex& t) { return {s, t, {}}; }

Matrix ChainMap::at(int n) const {
  auto it = comps_.find(n);
  if (it != comps_.end()) return it->second;
  return zero_block(source_.ring(), target_.rank(n), source_.rank(n));
}

std::pair<int, int> ChainMap::span() const {
  if (source_.is_zero() || target_.is_zero()) return {0, -1};
  return {std::max(source_.lo(), target_.lo()), std::min(source_.hi(), target_.hi())};
}

ChainMap ChainMap::operator+(const ChainMap& o) const {
  if (!(source_ == o.source_) || !(target_ == o.target_)) throw DomainError("chain map sum: endpoints differ");
  std::map<int, Matrix> m;
  auto [lo, hi] = span();
  for (int n = lo; n <= hi; ++n) m.emplace(n, at(n) + o.at(n));
  return {source_, target_, std::move(m)};
}

ChainMap ChainMap::operator-() const {
  std::map<int, Matrix> m;
  for (const auto& [n, c] : comps_) m.emplace(n, -c);
  return {source_, target_, std::move(m)};
}

ChainMap ChainMap::operator-(const ChainMap& o) const { return *this + (-o); }

ChainMap ChainMap::operator*(const ChainMap& o) const {
  if (!(o.target_ == source_)) throw DomainError("chain map composition: complexes do not chain");
  std::map<int, Matrix> m;
  auto [lo, hi] = o.span();
  for (int n = lo; n <= hi; ++n) m.emplace(n, at(n) * o.at(n));
  return {o.source_, target_, std::move(m)};
}

bool ChainMap::operator==(const ChainMap& o) const {
  if (!(source_ == o.source_) || !(target_ == o.target_)) return false;
  auto [lo, hi] = span();
  for (int n = lo; n <= hi; ++n)
    if (!(at(n) == o.at(n))) return false;
  return true;
}

Matrix Homotopy::at(int n, const BoundedComplex& s, const BoundedComplex& t) const {
  auto it = h.find(n);
  if (it != h.end()) return it->second;
  return zero_block(s.ring(), t.rank(n - 1), s.rank(n));
}

bool check_homotopy(const ChainMap& f, const ChainMap& g, const Homotopy& h) {
  const auto& s = f.source();
  const auto& t = f.target();
  if (!(g.source() == s) || !(g.target() == t)) return false;
  for (const auto& [n, m] : h.h)
    if (m.rows() != t.rank(n - 1) || m.cols() != s.rank(n)) return false;
  if (s.is_zero() || t.is_zero()) return true;
  for (int n = s.lo(); n <= s.hi(); ++n) {
    Matrix lhs = f.at(n) - g.at(n);
    Matrix rhs = t.d(n - 1) * h.at(n, s, t) + h.at(n + 1, s, t) * s.d(n);
    if (!(lhs == rhs)) return false;
  }
  return true;
}

BoundedComplex shift(const BoundedComplex& c, int k) {
  if (c.is_zero()) return c;
  std::vector<std::size_t> ranks;
  std::vector<Matrix> diffs;
  const bool flip = (k % 2) != 0;
  for (int n = c.lo(); n <= c.hi(); ++n) ranks.push_back(c.rank(n));
  for (int n = c.lo(); n < c.hi(); ++n) diffs.push_back(flip ? -c.d(n) : c.d(n));
  return {c.ring(), c.lo() - k, std::move(ranks), std::move(diffs)};
}

// ---------------------------------------------------------------- cone

ConeResult cone(const ChainMap& f) {
  const auto& s = f.source();
  const auto& t = f.target();
  Ring r = s.ring();
  if (s.is_zero() && t.is_zero()) {
    auto z = BoundedComplex::zero(r);
    return {z, ChainMap::identity(z), ChainMap::identity(z)};
  }
  int lo = std::min(s.is_zero() ? t.lo() : s.lo() - 1, t.is_zero() ? s.lo() - 1 : t.lo());
  int hi = std::max(s.is_zero() ? t.hi() : s.hi() - 1, t.is_zero() ? s.hi() - 1 : t.hi());
  std::vector<std::size_t> ranks;
  std::vector<Matrix> diffs;
  for (int n = lo; n <= hi; ++n) ranks.push_back(s.rank(n + 1) + t.rank(n));
  for (int n = lo; n < hi; ++n) {
    diffs.push_back(block_matrix({{-s.d(n + 1), zero_block(r, s.rank(n + 2), t.rank(n))},
                                  {f.at(n + 1), t.d(n)}}));
  }
  BoundedComplex c(r, lo, std::move(ranks), std::move(diffs));
  BoundedComplex s1 = shift(s, 1);
  std::map<int, Matrix> iota, pi;
  for (int n = lo; n <= hi; ++n) {
    iota.emplace(n, vcat({zero_block(r, s.rank(n + 1), t.rank(n)), Matrix::identity(r, t.rank(n))}));
    pi.emplace(n, hcat({Matrix::identity(r, s.rank(n + 1)), zero_block(r, s.rank(n + 1), t.rank(n))}));
  }
  return {c, ChainMap(t, c, std::move(iota)), ChainMap(c, s1, std::move(pi))};
}

// ---------------------------------------------------------------- null homotopy

HomotopyResult is_null_homotopic(const ChainMap& f) {
  const auto& s = f.source();
  const auto& t = f.target();
  Ring r = s.ring();
  if (s.is_zero() || t.is_zero()) return {HomotopyStatus::Found, {}};

  // Unknown blocks h^n for every n with s^n and t^{n-1} nonzero.
  std::map<int, std::size_t> offset;
  std::size_t unknowns = 0;
  for (int n = s.lo(); n <= s.hi(); ++n) {
    if (t.rank(n - 1) == 0 || s.rank(n) == 0) continue;
    offset[n] = unknowns;
    unknowns += t.rank(n - 1) * s.rank(n);
  }
  std::size_t equations = 0;
  for (int n = s.lo(); n <= s.hi(); ++n) equations += t.rank(n) * s.rank(n);

  Matrix a(r, equations, unknowns), b(r, equations, 1);
  std::size_t row = 0;
  for (int n = s.lo(); n <= s.hi(); ++n) {
    const Matrix fn = f.at(n), dt = t.d(n - 1), ds = s.d(n);
    const std::size_t tr = t.rank(n), sr = s.rank(n);
    auto lower = offset.find(n), upper = offset.find(n + 1);
    for (std::size_t i = 0; i < tr; ++i)
      for (std::size_t j = 0; j < sr; ++j, ++row) {
        b(row, 0) = fn(i, j);
        // (d_t h^n)_{ij} = sum_c dt(i, c) h^n(c, j)
        if (lower != offset.end())
          for (std::size_t c = 0; c < t.rank(n - 1); ++c)
            if (!dt(i, c).is_zero()) a(row, lower->second + c * sr + j) += dt(i, c);
        // (h^{n+1} d_s)_{ij} = sum_c h^{n+1}(i, c) ds(c, j)
        if (upper != offset.end())
          for (std::size_t c = 0; c < s.rank(n + 1); ++c)
            if (!ds(c, j).is_zero()) a(row, upper->second + i * s.rank(n + 1) + c) += ds(c, j);
      }
  }

  if (unknowns == 0) {
    if (b.is_zero()) return {HomotopyStatus::Found, {}};
    return {r->supports_linear_solving() ? HomotopyStatus::No : HomotopyStatus::Unsupported, {}};
  }
  auto sol = solve_linear(a, b);
  if (sol.status == SolveStatus::Unsupported) return {HomotopyStatus::Unsupported, {}};
  if (sol.status == SolveStatus::NoSolution) return {HomotopyStatus::No, {}};

  Homotopy h;
  for (const auto& [n, off] : offset) {
    const std::size_t rows = t.rank(n - 1), cols = s.rank(n);
    Matrix m(r, rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < cols; ++j) m(i, j) = sol.x(off + i * cols + j, 0);
    h.h.emplace(n, std::move(m));
  }
  return {HomotopyStatus::Found, std::move(h)};
}

HomotopyResult homotopy_equal(const ChainMap& f, const ChainMap& g) { return is_null_homotopic(f - g); }

// ---------------------------------------------------------------- minimize

namespace {

Matrix drop_row(const Matrix& m, std::size_t i) {
  return vcat({m.block(0, 0, i, m.cols()), m.block(i + 1, 0, m.rows() - i - 1, m.cols())});
}

Matrix drop_col(const Matrix& m, std::size_t j) {
  return hcat({m.block(0, 0, m.rows(), j), m.block(0, j + 1, m.rows(), m.cols() - j - 1)});
}

struct Cancel {
  BoundedComplex c;
  ChainMap f, g;
  Homotopy h;
};

// Cancel the unit entry a = d^n(i, j).
Cancel cancel_entry(const BoundedComplex& c, int n, std::size_t i, std::size_t j) {
  Ring r = c.ring();
  const Matrix dn = c.d(n);
  const Scalar ainv = *try_invert(dn(i, j));
  const Matrix col_c = drop_row(dn.block(0, j, dn.rows(), 1), i);   // (r-1) x 1
  const Matrix row_b = drop_col(dn.block(i, 0, 1, dn.cols()), j);   // 1 x (s-1)
  const Matrix big_d = drop_col(drop_row(dn, i), j);
  const Matrix ca = col_c.scaled(ainv);                              // c a^{-1}
  const Matrix ab = row_b.scaled(ainv);                              // a^{-1} b

  std::vector<std::size_t> ranks;
  std::vector<Matrix> diffs;
  for (int m = c.lo(); m <= c.hi(); ++m) ranks.push_back(c.rank(m) - (m == n) - (m == n + 1));
  for (int m = c.lo(); m < c.hi(); ++m) {
    if (m == n) diffs.push_back(big_d - col_c * ab);
    else if (m == n - 1) diffs.push_back(drop_row(c.d(m), j));
    else if (m == n + 1) diffs.push_back(drop_col(c.d(m), i));
    else diffs.push_back(c.d(m));
  }
  BoundedComplex small(r, c.lo(), std::move(ranks), std::move(diffs));

  std::map<int, Matrix> f, g;
  for (int m = c.lo(); m <= c.hi(); ++m) {
    const Matrix id = Matrix::identity(r, c.rank(m));
    if (m == n) {
      f.emplace(m, drop_row(id, j));
      Matrix gm = drop_col(id, j);
      gm.set_block(j, 0, -ab);
      g.emplace(m, gm);
    } else if (m == n + 1) {
      Matrix fm = drop_row(id, i);
      fm.set_block(0, i, -ca);
      f.emplace(m, fm);
      g.emplace(m, drop_col(id, i));
    } else {
      f.emplace(m, id);
      g.emplace(m, id);
    }
  }
  Homotopy h;
  Matrix hm(r, c.rank(n), c.rank(n + 1));
  hm(j, i) = ainv;
  h.h.emplace(n + 1, hm);
  return {small, ChainMap(c, small, std::move(f)), ChainMap(small, c, std::move(g)), std::move(h)};
}

// (g H f)^m = g^{m-1} H^m f^m
Homotopy conjugate(const ChainMap& g, const Homotopy& h, const ChainMap& f) {
  Homotopy out;
  for (const auto& [m, hm] : h.h) out.h.emplace(m, g.at(m - 1) * hm * f.at(m));
  return out;
}

Homotopy add_homotopies(const Homotopy& a, const Homotopy& b) {
  Homotopy out = a;
  for (const auto& [m, hm] : b.h) {
    auto it = out.h.find(m);
    if (it == out.h.end()) out.h.emplace(m, hm);
    else it->second = it->second + hm;
  }
  return out;
}

}  // namespace

std::optional<MinimizeResult> minimize(const BoundedComplex& c) {
  if (!c.ring()->is_field()) return std::nullopt;
  MinimizeResult res{c, ChainMap::identity(c), ChainMap::identity(c), {}};
  while (true) {
    const BoundedComplex& cur = res.model;
    bool found = false;
    int n = 0;
    std::size_t fi = 0, fj = 0;
    for (int m = cur.lo(); m < cur.hi() && !found; ++m) {
      const Matrix dm = cur.d(m);
      for (std::size_t i = 0; i < dm.rows() && !found; ++i)
        for (std::size_t j = 0; j < dm.cols() && !found; ++j)
          if (try_invert(dm(i, j))) n = m, fi = i, fj = j, found = true;
    }
    if (!found) break;
    Cancel step = cancel_entry(cur, n, fi, fj);
    // id - G F = (id - g1 f1) + g1 (id - g2 f2) f1
    res.on_source = add_homotopies(res.on_source, conjugate(res.from_model, step.h, res.to_model));
    res.to_model = step.f * res.to_model;
    res.from_model = res.from_model * step.g;
    res.model = step.c;
  }
  return res;
}

// ---------------------------------------------------------------- truncation

Truncation stupid_truncate(const BoundedComplex& c, int n) {
  Ring r = c.ring();
  auto piece = [&](int from, int to) {
    if (c.is_zero() || from > to) return BoundedComplex::zero(r);
    std::vector<std::size_t> ranks;
    std::vector<Matrix> diffs;
    for (int m = from; m <= to; ++m) ranks.push_back(c.rank(m));
    for (int m = from; m < to; ++m) diffs.push_back(c.d(m));
    return BoundedComplex(r, from, std::move(ranks), std::move(diffs));
  };
  BoundedComplex x = piece(std::max(n, c.lo()), c.hi());
  BoundedComplex y = piece(c.lo(), std::min(n - 1, c.hi()));

  std::map<int, Matrix> incl, proj;
  for (int m = c.lo(); m <= c.hi(); ++m) {
    const Matrix id = Matrix::identity(r, c.rank(m));
    if (m >= n) incl.emplace(m, id);
    else proj.emplace(m, id);
  }
  Truncation t;
  t.x = x;
  t.y = y;
  t.incl = ChainMap(x, c, std::move(incl));
  t.proj = ChainMap(c, y, std::move(proj));
  t.connecting = c.d(n - 1);
  t.cone_incl = cone(t.incl);
  const BoundedComplex& k = t.cone_incl.cone;  // k^m = X^{m+1} ⊕ C^m

  // to_cone: y ↦ (-d y, y), the X-part only nonzero in degree n-1.
  std::map<int, Matrix> to, from;
  for (int m = y.lo(); m <= y.hi() && !y.is_zero(); ++m) {
    const Matrix top = m == n - 1 ? -c.d(m) : Matrix::zero(r, x.rank(m + 1), c.rank(m));
    to.emplace(m, vcat({top, Matrix::identity(r, c.rank(m))}));
  }
  for (int m = k.lo(); m <= k.hi() && !k.is_zero(); ++m) {
    if (m > n - 1) continue;
    from.emplace(m, hcat({Matrix::zero(r, y.rank(m), x.rank(m + 1)), Matrix::identity(r, y.rank(m))}));
  }
  t.to_cone = ChainMap(y, k, std::move(to));
  t.from_cone = ChainMap(k, y, std::move(from));
  // H(x, c) = (c, 0) when c lies in X.
  for (int m = k.lo(); m <= k.hi() && !k.is_zero(); ++m) {
    if (m < n || k.rank(m - 1) == 0) continue;
    Matrix hm(r, k.rank(m - 1), k.rank(m));
    hm.set_block(0, x.rank(m + 1), Matrix::identity(r, c.rank(m)));
    t.cone_homotopy.h.emplace(m, hm);
  }
  return t;
}

}  // namespace cohn
