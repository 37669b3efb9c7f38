#include "cohn/localization.hpp"

#include "cohn/linsolve.hpp"

#include <sstream>

namespace cohn {

namespace {

Matrix id(Ring r, std::size_t n) { return Matrix::identity(r, n); }
Matrix zero(Ring r, std::size_t rows, std::size_t cols) { return Matrix::zero(r, rows, cols); }

std::string dims(const Matrix& m) { return std::to_string(m.rows()) + "x" + std::to_string(m.cols()); }

}  // namespace

void validate(const SSet& s, const LocTriple& t) {
  if (t.g.rows() != t.target || t.g.cols() != t.s.cols())
    throw DomainError("triple: g is " + dims(t.g) + ", s is " + dims(t.s));
  if (t.i.rows() != t.s.rows() || t.i.cols() != t.source)
    throw DomainError("triple: i is " + dims(t.i) + ", s is " + dims(t.s));
  if (!certifies(s, t.cert, t.s)) throw DomainError("triple: certificate does not assemble to s");
}

LocTriple from_plain(const SSet& s, const Matrix& f) {
  Ring r = f.ring();
  LocTriple t{f.cols(), f.rows(), f, id(r, f.cols()), id(r, f.cols()), identity_cert(s, f.cols()), true};
  return t;
}

LocTriple invert_s(const SSet& s, std::size_t k) {
  if (k >= s.elements.size()) throw DomainError("no S element " + std::to_string(k));
  const Matrix& sk = s.elements[k];
  Ring r = s.ring;
  return {sk.rows(), sk.cols(), id(r, sk.cols()), sk, id(r, sk.rows()), singleton_cert(s, k), true};
}

// ---------------------------------------------------------------- roofs

Roof forward_roof(const SSet& s, const Matrix& f) {
  Ring r = f.ring();
  return {f.cols(), f.rows(), zero(r, 0, f.cols()), f, id(r, f.cols()), identity_cert(s, f.cols())};
}

Roof inverse_roof(const SSet& s, std::size_t k) {
  if (k >= s.elements.size()) throw DomainError("no S element " + std::to_string(k));
  const Matrix& sk = s.elements[k];
  Ring r = s.ring;
  return {sk.rows(), sk.cols(), zero(r, 0, sk.cols()), id(r, sk.cols()), sk, singleton_cert(s, k)};
}

Roof compose_roofs(const SSet& s, const Roof& phi, const Roof& psi) {
  if (phi.target != psi.source)
    throw DomainError("compose_roofs: target " + std::to_string(phi.target) + " vs source " +
                      std::to_string(psi.source));
  Ring r = phi.d.ring();
  const std::size_t l0 = phi.d.cols(), l1 = phi.d.rows(), t0 = psi.d.cols(), t1 = psi.d.rows();
  // LT^0 = L^0 ⊕ T^0, LT^1 = L^1 ⊕ B ⊕ T^1.
  Matrix d = block_matrix({{phi.d, zero(r, l1, t0)}, {-phi.x0, psi.y0}, {zero(r, t1, l0), psi.d}});
  Matrix q0 = hcat({phi.y0, zero(r, phi.source, t0)});
  Matrix r0 = hcat({zero(r, psi.target, l0), psi.x0});
  Matrix glue = vcat({-phi.x0, zero(r, t1, l0)});
  Roof out{phi.source, psi.target, d, r0, q0, extend(s, phi.cert, psi.cert, glue)};
  if (!(out.cert.assembled == vcat({q0, d}))) throw DomainError("compose_roofs: certificate mismatch");
  return out;
}

LocTriple roof_to_triple(const Roof& rf) {
  if (!rf.cert.ring) throw PreconditionError("roof without a certificate");
  Ring r = rf.d.ring();
  Matrix sm = vcat({rf.y0, rf.d});
  if (!(rf.cert.assembled == sm)) throw PreconditionError("roof certificate does not match (y0; d)");
  Matrix in_a = vcat({id(r, rf.source), zero(r, rf.d.rows(), rf.source)});
  return {rf.source, rf.target, rf.x0, sm, in_a, rf.cert, true};
}

// ---------------------------------------------------------------- arithmetic

LocTriple triple_dsum(const SSet& s, const LocTriple& a, const LocTriple& b) {
  LocTriple t{a.source + b.source,
              a.target + b.target,
              dsum(a.g, b.g),
              dsum(a.s, b.s),
              dsum(a.i, b.i),
              extend(s, a.cert, b.cert, zero(a.ring(), b.s.rows(), a.s.cols())),
              a.canonical_i && b.canonical_i && a.s.rows() == a.source};
  return t;
}

LocTriple triple_compose(const SSet& s, const LocTriple& t1, const LocTriple& t2) {
  if (t2.target != t1.source)
    throw DomainError("triple_compose: target " + std::to_string(t2.target) + " vs source " +
                      std::to_string(t1.source));
  Ring r = t1.ring();
  Matrix glue = -(t1.i * t2.g);
  LocTriple t{t2.source,
              t1.target,
              hcat({zero(r, t1.target, t2.s.cols()), t1.g}),
              block_matrix({{t2.s, zero(r, t2.s.rows(), t1.s.cols())}, {glue, t1.s}}),
              vcat({t2.i, zero(r, t1.s.rows(), t2.source)}),
              extend(s, t2.cert, t1.cert, glue),
              t2.canonical_i};
  return t;
}

LocTriple triple_add(const SSet& s, const LocTriple& t1, const LocTriple& t2) {
  if (t1.source != t2.source || t1.target != t2.target) throw DomainError("triple_add: endpoints differ");
  Ring r = t1.ring();
  LocTriple t{t1.source,
              t1.target,
              hcat({t1.g, t2.g}),
              dsum(t1.s, t2.s),
              vcat({t1.i, t2.i}),
              extend(s, t1.cert, t2.cert, zero(r, t2.s.rows(), t1.s.cols())),
              false};
  return t;
}

LocTriple zigzag_normalize(const SSet& s, const std::vector<ZigToken>& word) {
  if (word.empty()) throw DomainError("empty zig-zag");
  auto roof_of = [&](const ZigToken& tok) {
    return tok.kind == ZigToken::Kind::Forward ? forward_roof(s, tok.f) : inverse_roof(s, tok.k);
  };
  Roof acc = roof_of(word.back());
  for (std::size_t k = word.size() - 1; k-- > 0;) {
    Roof next = roof_of(word[k]);
    if (acc.target != next.source)
      throw DomainError("zig-zag does not chain at token " + std::to_string(k + 1));
    acc = compose_roofs(s, acc, next);
  }
  return roof_to_triple(acc);
}

// ---------------------------------------------------------------- functors

RingMap identity_map(Ring ring) {
  return {ring, [](const Scalar& x) { return x; }, {}};
}

RingMap fraction_map(Ring ring) {
  Ring target = fraction_field_of(ring);
  return {target, [](const Scalar& x) { return to_fraction_field(x); }, {}};
}

Matrix apply_map(const RingMap& f, const Matrix& m) {
  Matrix out(f.target, m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = f.apply(m(i, j));
  return out;
}

namespace {

Matrix invert_image(const SSet& s, const TriangularCert& cert, const Matrix& fs, const RingMap& f) {
  if (auto inv = invert_matrix(fs)) return *inv;
  // Fall back on the elementary factors: S-images inverted one by one.
  const Ring r = f.target;
  Matrix inv = id(r, fs.cols());
  auto factors = factor_elementary(s, cert);
  for (const auto& fac : factors) {
    Matrix piece(r, 0, 0);
    if (fac.kind == ElementaryFactor::Kind::Invertible) {
      piece = apply_map(f, fac.inverse);
    } else {
      for (const auto& tag : fac.layout) {
        if (tag.kind == DiagTag::Kind::Identity) {
          piece = dsum(piece, id(r, tag.value));
          continue;
        }
        std::optional<Matrix> sk;
        if (tag.value < f.s_inverses.size()) sk = f.s_inverses[tag.value];
        if (!sk) sk = invert_matrix(apply_map(f, s.elements[tag.value]));
        if (!sk) throw PreconditionError("F(s" + std::to_string(tag.value) + ") is not invertible");
        piece = dsum(piece, *sk);
      }
    }
    inv = piece * inv;  // (f1 f2 ... fm)^-1 = fm^-1 ... f1^-1
  }
  const Matrix one = id(r, fs.rows());
  if (!(fs * inv == one) || !(inv * fs == id(r, fs.cols())))
    throw PreconditionError("F(s) is not invertible");
  return inv;
}

}  // namespace

Matrix evaluate_functor(const SSet& s, const LocTriple& t, const RingMap& f) {
  const Matrix fs = apply_map(f, t.s);
  if (!fs.square()) throw PreconditionError("F(s) is not square, so not invertible");
  return apply_map(f, t.g) * invert_image(s, t.cert, fs, f) * apply_map(f, t.i);
}

Matrix evaluate_roof(const SSet& s, const Roof& r, const RingMap& f) {
  (void)s;
  const Ring tr = f.target;
  // u : A -> C^0 with F(y0) u = id and F(d) u = 0.
  Matrix lhs = vcat({apply_map(f, r.y0), apply_map(f, r.d)});
  Matrix rhs = vcat({id(tr, r.source), zero(tr, r.d.rows(), r.source)});
  auto sol = solve_linear(lhs, rhs);
  if (sol.status != SolveStatus::Solved) throw PreconditionError("roof backward map does not invert under F");
  return apply_map(f, r.x0) * sol.x;
}

std::string describe(const LocTriple& t) {
  std::ostringstream os;
  os << "g = " << t.g.to_string() << "\n";
  os << "s = " << t.s.to_string() << "\n";
  os << "i = " << t.i.to_string() << "\n";
  os << "cert = [";
  for (std::size_t k = 0; k < t.cert.diagonal.size(); ++k) {
    const auto& tag = t.cert.diagonal[k];
    if (k) os << ", ";
    if (tag.kind == DiagTag::Kind::ElementOfS) os << "s" << tag.value;
    else os << "id(" << tag.value << ")";
  }
  os << "]";
  for (const auto& [key, m] : t.cert.below)
    os << " f(" << key.first + 1 << "," << key.second + 1 << ") = " << m.to_string();
  return os.str();
}

}  // namespace cohn
