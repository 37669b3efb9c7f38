#include "cohn/triangular.hpp"

namespace cohn {

bool TriangularCert::only_s_tags() const {
  for (const auto& t : diagonal)
    if (t.kind != DiagTag::Kind::ElementOfS) return false;
  return true;
}

Matrix diagonal_block(const SSet& s, const DiagTag& tag) {
  if (tag.kind == DiagTag::Kind::Identity) return Matrix::identity(s.ring, tag.value);
  if (tag.value >= s.elements.size())
    throw DomainError("certificate refers to S element " + std::to_string(tag.value) + " of " +
                      std::to_string(s.elements.size()));
  return s.elements[tag.value];
}

TriangularCert make_cert(const SSet& s, std::vector<DiagTag> diagonal,
                         std::map<std::pair<std::size_t, std::size_t>, Matrix> below) {
  TriangularCert c;
  c.ring = s.ring;
  c.diagonal = std::move(diagonal);
  std::vector<Matrix> diag;
  for (const auto& t : c.diagonal) {
    diag.push_back(diagonal_block(s, t));
    c.src_ranks.push_back(diag.back().cols());
    c.dst_ranks.push_back(diag.back().rows());
  }
  const std::size_t n = c.diagonal.size();
  std::vector<std::size_t> col_off(n + 1, 0), row_off(n + 1, 0);
  for (std::size_t k = 0; k < n; ++k) {
    col_off[k + 1] = col_off[k] + c.src_ranks[k];
    row_off[k + 1] = row_off[k] + c.dst_ranks[k];
  }
  c.assembled = Matrix(s.ring, row_off[n], col_off[n]);
  for (std::size_t k = 0; k < n; ++k) c.assembled.set_block(row_off[k], col_off[k], diag[k]);
  for (auto& [key, m] : below) {
    auto [k, l] = key;
    if (!(k < l && l < n)) throw DomainError("certificate block f(" + std::to_string(k + 1) + "," +
                                             std::to_string(l + 1) + ") is not below the diagonal");
    if (m.rows() != c.dst_ranks[l] || m.cols() != c.src_ranks[k])
      throw DomainError("certificate block f(" + std::to_string(k + 1) + "," + std::to_string(l + 1) +
                        ") must be " + std::to_string(c.dst_ranks[l]) + "x" + std::to_string(c.src_ranks[k]));
    if (m.rows() * m.cols() == 0 || m.is_zero()) continue;
    if (m.ring() != s.ring) throw DomainError("certificate block has wrong ring");
    c.assembled.set_block(row_off[l], col_off[k], m);
    c.below.emplace(key, std::move(m));
  }
  return c;
}

TriangularCert singleton_cert(const SSet& s, std::size_t index) { return make_cert(s, {DiagTag::element(index)}); }

TriangularCert identity_cert(const SSet& s, std::size_t rank) {
  if (rank == 0) return make_cert(s, {});
  return make_cert(s, {DiagTag::identity(rank)});
}

bool certifies(const SSet& s, const TriangularCert& cert, const Matrix& m) {
  try {
    TriangularCert again = make_cert(s, cert.diagonal, cert.below);
    return again.assembled == cert.assembled && cert.assembled == m;
  } catch (const DomainError&) {
    return false;
  }
}

BoundedComplex assemble(const TriangularCert& cert) { return BoundedComplex::two_term(cert.assembled, -1); }

TriangularCert extend(const SSet& s, const TriangularCert& a, const TriangularCert& b, const Matrix& glue) {
  if (glue.rows() != b.assembled.rows() || glue.cols() != a.assembled.cols())
    throw DomainError("extend: glue must be " + std::to_string(b.assembled.rows()) + "x" +
                      std::to_string(a.assembled.cols()));
  std::vector<DiagTag> diag = a.diagonal;
  diag.insert(diag.end(), b.diagonal.begin(), b.diagonal.end());
  auto below = a.below;
  const std::size_t na = a.size();
  for (const auto& [key, m] : b.below) below.emplace(std::make_pair(key.first + na, key.second + na), m);
  std::size_t r0 = 0;
  for (std::size_t l = 0; l < b.size(); ++l) {
    std::size_t c0 = 0;
    for (std::size_t k = 0; k < na; ++k) {
      Matrix blk = glue.block(r0, c0, b.dst_ranks[l], a.src_ranks[k]);
      below.emplace(std::make_pair(k, na + l), std::move(blk));
      c0 += a.src_ranks[k];
    }
    r0 += b.dst_ranks[l];
  }
  return make_cert(s, std::move(diag), std::move(below));
}

namespace {

TriangularCert leading(const SSet& s, const TriangularCert& c, std::size_t n) {
  std::vector<DiagTag> diag(c.diagonal.begin(), c.diagonal.begin() + static_cast<long>(n));
  std::map<std::pair<std::size_t, std::size_t>, Matrix> below;
  for (const auto& [key, m] : c.below)
    if (key.second < n) below.emplace(key, m);
  return make_cert(s, std::move(diag), std::move(below));
}

}  // namespace

std::vector<ElementaryFactor> factor_elementary(const SSet& s, const TriangularCert& cert) {
  if (!s.contains_identities || !s.closed_under_direct_sums)
    throw PreconditionError("factor_elementary needs S to contain identities and be closed under direct sums");
  const std::size_t n = cert.size();
  if (n == 0) return {};
  if (n == 1) return {{ElementaryFactor::Kind::InS, cert.assembled, cert.diagonal, {}}};

  const TriangularCert t = leading(s, cert, n - 1);
  const std::size_t last_dst = cert.dst_ranks[n - 1];
  const std::size_t t_src = t.assembled.cols();
  Ring r = s.ring;
  // f collects the last block row below the diagonal: source(t) -> S_n^0.
  Matrix f = cert.assembled.block(t.assembled.rows(), 0, last_dst, t_src);

  std::vector<ElementaryFactor> out;
  for (auto& sub : factor_elementary(s, t)) {
    ElementaryFactor e = sub;
    e.m = dsum(sub.m, Matrix::identity(r, last_dst));
    if (e.kind == ElementaryFactor::Kind::InS) {
      if (last_dst) e.layout.push_back(DiagTag::identity(last_dst));
    } else {
      e.inverse = dsum(sub.inverse, Matrix::identity(r, last_dst));
    }
    out.push_back(std::move(e));
  }
  ElementaryFactor mid{ElementaryFactor::Kind::Invertible,
                       block_matrix({{Matrix::identity(r, t_src), Matrix::zero(r, t_src, last_dst)},
                                     {f, Matrix::identity(r, last_dst)}}),
                       {},
                       block_matrix({{Matrix::identity(r, t_src), Matrix::zero(r, t_src, last_dst)},
                                     {-f, Matrix::identity(r, last_dst)}})};
  out.push_back(std::move(mid));
  ElementaryFactor tail{ElementaryFactor::Kind::InS,
                        dsum(Matrix::identity(r, t_src), diagonal_block(s, cert.diagonal[n - 1])),
                        {},
                        {}};
  if (t_src) tail.layout.push_back(DiagTag::identity(t_src));
  tail.layout.push_back(cert.diagonal[n - 1]);
  out.push_back(std::move(tail));
  return out;
}

Matrix multiply_factors(const std::vector<ElementaryFactor>& fs, Ring ring, std::size_t rank_if_empty) {
  if (fs.empty()) return Matrix::identity(ring, rank_if_empty);
  Matrix p = fs.front().m;
  for (std::size_t k = 1; k < fs.size(); ++k) p = p * fs[k].m;
  return p;
}

bool check_ins_layout(const SSet& s, const ElementaryFactor& f) {
  if (f.kind != ElementaryFactor::Kind::InS) return false;
  Matrix acc(s.ring, 0, 0);
  for (const auto& tag : f.layout) {
    if (tag.kind == DiagTag::Kind::ElementOfS && tag.value >= s.elements.size()) return false;
    acc = dsum(acc, diagonal_block(s, tag));
  }
  return acc == f.m;
}

}  // namespace cohn
