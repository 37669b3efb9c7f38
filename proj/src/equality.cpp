#include "cohn/equality.hpp"

#include "block_system.hpp"
#include "cohn/linsolve.hpp"

#include <functional>

namespace cohn {

using detail::System;
using detail::Unknown;

namespace {

Matrix id(Ring r, std::size_t n) { return Matrix::identity(r, n); }
Matrix zero(Ring r, std::size_t rows, std::size_t cols) { return Matrix::zero(r, rows, cols); }

bool has_shape(const Matrix& m, std::size_t rows, std::size_t cols) {
  return m.rows() == rows && m.cols() == cols;
}

Matrix transpose(const Matrix& m) {
  Matrix t(m.ring(), m.cols(), m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) t(j, i) = m(i, j);
  return t;
}

CheckResult fail(std::string why) { return {false, std::move(why)}; }
CheckResult pass() { return {true, {}}; }

}  // namespace

Matrix witness_r(const LocTriple& t1, const LocTriple& t2) {
  Ring r = t1.ring();
  return block_matrix({{t1.i, t1.s, zero(r, t1.s.rows(), t2.s.cols())},
                       {t2.i, zero(r, t2.s.rows(), t1.s.cols()), t2.s}});
}

Matrix witness_x(const LocTriple& t1, const LocTriple& t2) {
  return hcat({zero(t1.ring(), t1.target, t1.source), t1.g, -t2.g});
}

// ---------------------------------------------------------------- factorization

CheckResult check_factorization(const SSet& s, const LocTriple& t1, const LocTriple& t2,
                                const FactorizationWitness& w) {
  if (t1.source != t2.source || t1.target != t2.target) throw DomainError("triples have different endpoints");
  const std::size_t a = t1.source, ap = t1.target;
  const std::size_t cols0 = a + t1.s.cols() + t2.s.cols(), cols1 = t1.s.rows() + t2.s.rows();
  if (!has_shape(w.k1, w.t1, w.z)) return fail("k1 shape");
  if (!has_shape(w.k2, w.z_prime, w.t2)) return fail("k2 shape");
  if (!has_shape(w.p, w.t2, w.z)) return fail("p shape");
  if (!has_shape(w.g, w.z_prime, w.t1)) return fail("g shape");
  if (!has_shape(w.alpha10, w.t1 + w.t2, cols0)) return fail("alpha1^0 shape");
  if (!has_shape(w.alpha11, w.z_prime, cols1)) return fail("alpha1^1 shape");
  if (!has_shape(w.alpha2, ap, w.t1 + w.t2)) return fail("alpha2 shape");
  if (!certifies(s, w.k1_cert, w.k1)) return fail("k1 certificate");
  if (!certifies(s, w.k2_cert, w.k2)) return fail("k2 certificate");
  const Matrix r = witness_r(t1, t2), x = witness_x(t1, t2);
  if (!(w.alpha2 * w.alpha10 == x)) return fail("alpha2 * alpha1^0 != (0, g1, -g2)");
  if (!(w.alpha2 * vcat({w.k1, w.p})).is_zero()) return fail("alpha2 * (k1; p) != 0");
  const Matrix d0 = hcat({w.g, w.k2});
  if (!(d0 * w.alpha10 == w.alpha11 * r)) return fail("(g, k2) * alpha1^0 != alpha1^1 * r");
  if (!(w.g * w.k1 + w.k2 * w.p).is_zero()) return fail("g * k1 + k2 * p != 0");
  return pass();
}

// ---------------------------------------------------------------- Malcolmson

std::pair<Matrix, Matrix> malcolmson_sides(const LocTriple& t1, const LocTriple& t2, const MalcolmsonWitness& w) {
  Ring r = t1.ring();
  const std::size_t c1 = t1.s.rows(), c2 = t2.s.rows(), cp1 = t1.s.cols(), cp2 = t2.s.cols();
  const std::size_t a = t1.source, ap = t1.target;
  Matrix lhs = block_matrix({
      {t1.s, zero(r, c1, cp2), zero(r, c1, w.e1), zero(r, c1, w.e2), t1.i},
      {zero(r, c2, cp1), t2.s, zero(r, c2, w.e1), zero(r, c2, w.e2), -t2.i},
      {zero(r, w.r1, cp1), zero(r, w.r1, cp2), w.l, zero(r, w.r1, w.e2), zero(r, w.r1, a)},
      {zero(r, w.r2, cp1), zero(r, w.r2, cp2), zero(r, w.r2, w.e1), w.m, w.y},
      {t1.g, t2.g, w.x, zero(r, ap, w.e2), zero(r, ap, a)},
  });
  Matrix rhs = vcat({w.p, w.u}) * hcat({w.q, w.v});
  return {lhs, rhs};
}

CheckResult check_malcolmson(const SSet& s, const LocTriple& t1, const LocTriple& t2, const MalcolmsonWitness& w) {
  if (t1.source != t2.source || t1.target != t2.target) throw DomainError("triples have different endpoints");
  const std::size_t c1 = t1.s.rows(), c2 = t2.s.rows(), cp1 = t1.s.cols(), cp2 = t2.s.cols();
  const std::size_t a = t1.source, ap = t1.target;
  if (!has_shape(w.l, w.r1, w.e1)) return fail("L shape");
  if (!has_shape(w.m, w.r2, w.e2)) return fail("M shape");
  if (!has_shape(w.q, w.e, cp1 + cp2 + w.e1 + w.e2)) return fail("Q shape");
  if (!has_shape(w.p, c1 + c2 + w.r1 + w.r2, w.e)) return fail("P shape");
  if (!has_shape(w.u, ap, w.e)) return fail("u shape");
  if (!has_shape(w.v, w.e, a)) return fail("v shape");
  if (!has_shape(w.x, ap, w.e1)) return fail("X shape");
  if (!has_shape(w.y, w.r2, a)) return fail("Y shape");
  if (!certifies(s, w.p_cert, w.p)) return fail("P certificate");
  if (!certifies(s, w.m_cert, w.m)) return fail("M certificate");
  auto [lhs, rhs] = malcolmson_sides(t1, t2, w);
  if (lhs == rhs) return pass();
  // Name the first offending block.
  const std::vector<std::pair<const char*, std::size_t>> rows = {
      {"C1", c1}, {"C2", c2}, {"R1", w.r1}, {"R2", w.r2}, {"A'", ap}};
  const std::vector<std::pair<const char*, std::size_t>> cols = {
      {"C'1", cp1}, {"C'2", cp2}, {"E1", w.e1}, {"E2", w.e2}, {"A", a}};
  std::size_t r0 = 0;
  for (const auto& [rn, rs] : rows) {
    std::size_t k0 = 0;
    for (const auto& [cn, cs] : cols) {
      if (!(lhs.block(r0, k0, rs, cs) == rhs.block(r0, k0, rs, cs)))
        return fail(std::string("block identity fails at row ") + rn + ", column " + cn);
      k0 += cs;
    }
    r0 += rs;
  }
  return fail("block identity fails");
}

MalcolmsonWitness malcolmson_from_factorization(const SSet& s, const LocTriple& t1, const LocTriple& t2,
                                                const FactorizationWitness& w) {
  if (auto c = check_factorization(s, t1, t2, w); !c)
    throw PreconditionError("factorization witness does not verify: " + c.failure);
  Ring r = t1.ring();
  const std::size_t a = t1.source, cp1 = t1.s.cols(), cp2 = t2.s.cols();
  const std::size_t c1 = t1.s.rows(), c2 = t2.s.rows();
  const std::size_t cols0 = a + cp1 + cp2;

  // Fold Z and T1 away: alpha1^0|T1 = k1 zeta, b' = b - p zeta.
  Matrix top = w.alpha10.block(0, 0, w.t1, cols0);
  Matrix b = w.alpha10.block(w.t1, 0, w.t2, cols0);
  Matrix zeta = zero(r, w.z, cols0);
  if (w.t1 > 0 && !top.is_zero()) {
    auto sol = solve_linear(w.k1, top);
    if (sol.status != SolveStatus::Solved)
      throw PreconditionError("alpha1^0 does not factor through k1; translation not available");
    zeta = sol.x;
  }
  Matrix bp = b - w.p * zeta;
  Matrix bA = bp.block(0, 0, w.t2, a), b1 = bp.block(0, a, w.t2, cp1), b2 = bp.block(0, a + cp1, w.t2, cp2);
  Matrix cc1 = w.alpha11.block(0, 0, w.z_prime, c1), cc2 = w.alpha11.block(0, c1, w.z_prime, c2);
  Matrix e2 = w.alpha2.block(0, w.t1, t1.target, w.t2);

  MalcolmsonWitness m;
  m.e1 = 0;
  m.e2 = 0;
  m.r1 = w.z_prime;
  m.r2 = 0;
  m.e = c1 + c2 + w.t2;
  m.l = zero(r, m.r1, 0);
  m.m = zero(r, 0, 0);
  m.m_cert = identity_cert(s, 0);
  Matrix glue = hcat({-cc1, cc2});
  m.p = block_matrix({{id(r, c1 + c2), zero(r, c1 + c2, w.t2)}, {glue, w.k2}});
  m.p_cert = extend(s, identity_cert(s, c1 + c2), w.k2_cert, glue);
  m.q = block_matrix({{t1.s, zero(r, c1, cp2)}, {zero(r, c2, cp1), t2.s}, {b1, -b2}});
  m.v = vcat({t1.i, -t2.i, bA});
  m.u = hcat({zero(r, t1.target, c1 + c2), e2});
  m.x = zero(r, t1.target, 0);
  m.y = zero(r, 0, a);
  if (auto c = check_malcolmson(s, t1, t2, m); !c)
    throw PreconditionError("translated witness does not verify: " + c.failure);
  return m;
}

std::optional<FactorizationWitness> tautological_witness(const SSet& s, const LocTriple& t1, const LocTriple& t2) {
  if (t1.source != t2.source || t1.target != t2.target) return std::nullopt;
  Ring r = t1.ring();
  const Matrix rr = witness_r(t1, t2), x = witness_x(t1, t2);
  std::optional<Matrix> h;
  if (r->is_commutative()) {
    auto sol = solve_linear(transpose(rr), transpose(x));
    if (sol.status == SolveStatus::Solved) h = transpose(sol.x);
  }
  if (!h && t1.g == t2.g && t1.s == t2.s && t1.i == t2.i && t1.s.is_identity() && t1.i.is_identity())
    h = hcat({t1.g, -t2.g});
  if (!h) return std::nullopt;
  const std::size_t ap = t1.target;
  FactorizationWitness w;
  w.z = 0;
  w.t1 = 0;
  w.t2 = ap;
  w.z_prime = ap;
  w.k1 = zero(r, 0, 0);
  w.k1_cert = identity_cert(s, 0);
  w.k2 = id(r, ap);
  w.k2_cert = identity_cert(s, ap);
  w.p = zero(r, ap, 0);
  w.g = zero(r, ap, 0);
  w.alpha10 = x;
  w.alpha11 = *h;
  w.alpha2 = id(r, ap);
  if (!check_factorization(s, t1, t2, w)) return std::nullopt;
  return w;
}

// ---------------------------------------------------------------- oracle

bool oracle_applicable(const SSet& s) {
  const RingKind k = s.ring->kind;
  if (k != RingKind::Integers && k != RingKind::Rationals && k != RingKind::Polynomials) return false;
  RingMap f = fraction_map(s.ring);
  for (const auto& e : s.elements) {
    if (!e.square()) return false;
    if (!invert_matrix(apply_map(f, e))) return false;
  }
  return true;
}

Verdict decide_equal_oracle(const SSet& s, const LocTriple& t1, const LocTriple& t2) {
  if (!oracle_applicable(s)) return Verdict::Inapplicable;
  if (t1.source != t2.source || t1.target != t2.target) return Verdict::False;
  RingMap f = fraction_map(s.ring);
  return evaluate_functor(s, t1, f) == evaluate_functor(s, t2, f) ? Verdict::True : Verdict::False;
}

// ---------------------------------------------------------------- search

namespace {

// Nondecreasing words of length n over an alphabet of size m.
void words(std::size_t n, std::size_t m, std::vector<std::vector<std::size_t>>& out) {
  std::vector<std::size_t> cur;
  std::function<void(std::size_t)> rec = [&](std::size_t from) {
    if (cur.size() == n) {
      out.push_back(cur);
      return;
    }
    for (std::size_t a = from; a < m; ++a) {
      cur.push_back(a);
      rec(a);
      cur.pop_back();
    }
  };
  rec(0);
}

}  // namespace

SearchResult search_equal(const SSet& s, const LocTriple& t1, const LocTriple& t2, std::size_t cap) {
  if (!s.ring->supports_linear_solving() || !s.ring->is_commutative()) return {SearchStatus::Unsupported, {}, 0};
  if (t1.source != t2.source || t1.target != t2.target) throw DomainError("triples have different endpoints");
  Ring r = s.ring;
  const Matrix rr = witness_r(t1, t2), x = witness_x(t1, t2);
  const std::size_t ap = t1.target, cols0 = rr.cols(), cols1 = rr.rows();
  constexpr std::size_t kMaxFixed = 8;

  // Alphabet: id(1) first, then S in declaration order.
  std::vector<DiagTag> alphabet{DiagTag::identity(1)};
  for (std::size_t k = 0; k < s.elements.size(); ++k) alphabet.push_back(DiagTag::element(k));

  std::vector<std::vector<TriangularCert>> by_len(cap + 1);
  for (std::size_t n = 0; n <= cap; ++n) {
    std::vector<std::vector<std::size_t>> ws;
    words(n, alphabet.size(), ws);
    for (const auto& wd : ws) {
      std::vector<DiagTag> diag;
      for (auto a : wd) diag.push_back(alphabet[a]);
      TriangularCert c = make_cert(s, diag);
      if (c.assembled.rows() <= cap && c.assembled.cols() <= cap) by_len[n].push_back(std::move(c));
    }
  }

  SearchResult res{SearchStatus::NotFoundWithinCap, {}, 0};
  for (std::size_t total = 0; total <= 2 * cap; ++total)
    for (std::size_t n2 = 0; n2 <= std::min(total, cap); ++n2) {
      const std::size_t n1 = total - n2;
      if (n1 > cap) continue;
      for (const auto& k1 : by_len[n1])
        for (const auto& k2 : by_len[n2]) {
          const std::size_t z = k1.assembled.cols(), t1r = k1.assembled.rows();
          const std::size_t t2r = k2.assembled.cols(), zp = k2.assembled.rows();
          const std::size_t fixed = ap * (t1r + t2r) + zp * t1r;
          if (fixed > kMaxFixed) continue;
          ++res.shapes_tried;
          std::vector<int> digits(fixed, 0);
          const int vals[3] = {0, 1, -1};
          while (true) {
            Matrix alpha2(r, ap, t1r + t2r), gw(r, zp, t1r);
            std::size_t k = 0;
            for (std::size_t i = 0; i < ap; ++i)
              for (std::size_t j = 0; j < t1r + t2r; ++j) alpha2(i, j) = Scalar::from_int(r, vals[digits[k++]]);
            for (std::size_t i = 0; i < zp; ++i)
              for (std::size_t j = 0; j < t1r; ++j) gw(i, j) = Scalar::from_int(r, vals[digits[k++]]);

            // alpha2 -> -alpha2 is a symmetry: keep the first nonzero entry positive.
            bool canonical = true;
            for (std::size_t q = 0; q < ap * (t1r + t2r); ++q)
              if (digits[q] != 0) {
                canonical = digits[q] == 1;
                break;
              }
            // Rows of alpha2 that vanish force the matching rows of x' to vanish.
            bool viable = canonical;
            for (std::size_t i = 0; i < ap && viable; ++i) {
              bool zero_row = true;
              for (std::size_t j = 0; j < t1r + t2r; ++j) zero_row = zero_row && alpha2(i, j).is_zero();
              if (zero_row && !x.block(i, 0, 1, cols0).is_zero()) viable = false;
            }
            if (viable) {
              // p from (b), (d); alpha1 from (a), (c). The two systems are independent.
              System sp(r);
              Unknown p = sp.add_unknown(t2r, z);
              const Matrix e1 = alpha2.block(0, 0, ap, t1r), e2 = alpha2.block(0, t1r, ap, t2r);
              sp.equation({{&e2, p, nullptr}}, -(e1 * k1.assembled));
              sp.equation({{&k2.assembled, p, nullptr}}, -(gw * k1.assembled));
              auto ps = sp.solve();
              if (ps.status == SolveStatus::Solved) {
                System sa(r);
                Unknown a0 = sa.add_unknown(t1r + t2r, cols0);
                Unknown a1 = sa.add_unknown(zp, cols1);
                const Matrix d0 = hcat({gw, k2.assembled});
                const Matrix neg_r = -rr;
                sa.equation({{&alpha2, a0, nullptr}}, x);
                sa.equation({{&d0, a0, nullptr}, {nullptr, a1, &neg_r}}, zero(r, zp, cols0));
                auto as = sa.solve();
                if (as.status == SolveStatus::Solved) {
                  FactorizationWitness w;
                  w.z = z;
                  w.t1 = t1r;
                  w.t2 = t2r;
                  w.z_prime = zp;
                  w.k1 = k1.assembled;
                  w.k1_cert = k1;
                  w.k2 = k2.assembled;
                  w.k2_cert = k2;
                  w.p = System::extract(ps.x, p);
                  w.g = gw;
                  w.alpha10 = System::extract(as.x, a0);
                  w.alpha11 = System::extract(as.x, a1);
                  w.alpha2 = alpha2;
                  if (check_factorization(s, t1, t2, w)) {
                    res.status = SearchStatus::Found;
                    res.witness = std::move(w);
                    return res;
                  }
                }
              }
            }
            // Next assignment in lexicographic order.
            std::size_t q = fixed;
            while (q > 0 && digits[q - 1] == 2) digits[--q] = 0;
            if (q == 0) break;
            ++digits[q - 1];
          }
        }
    }
  return res;
}

}  // namespace cohn
