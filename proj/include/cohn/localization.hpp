#pragma once

// Morphisms of A[S^-1]_add as triples g ∘ s^-1 ∘ i, roofs, zig-zags, and
// evaluation through ring maps that invert S.

#include "cohn/triangular.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace cohn {

struct LocTriple {
  std::size_t source = 0, target = 0;  // A, A'
  Matrix g;                            // A'' -> A'
  Matrix s;                            // A'' -> C
  Matrix i;                            // A -> C
  TriangularCert cert;                 // assembles to s
  bool canonical_i = false;            // i is the coretraction into the first summand

  Ring ring() const { return g.ring(); }
  std::size_t mid_source() const { return s.cols(); }
  std::size_t mid_target() const { return s.rows(); }
};

/// Throws DomainError unless shapes chain and the certificate assembles to s.
void validate(const SSet& s, const LocTriple& t);

LocTriple from_plain(const SSet& s, const Matrix& f);
/// s_k^{-1} as (id_P, s_k, id_Q).
LocTriple invert_s(const SSet& s, std::size_t k);

/// x ∘ y^{-1} with apex C in degrees [0, 1]; cert certifies (y0; d) : C^0 -> A ⊕ C^1.
struct Roof {
  std::size_t source = 0, target = 0;
  Matrix d;   // C^0 -> C^1
  Matrix x0;  // C^0 -> target
  Matrix y0;  // C^0 -> source
  TriangularCert cert;

  BoundedComplex apex() const { return BoundedComplex(d.ring(), 0, {d.cols(), d.rows()}, {d}); }
};

Roof forward_roof(const SSet& s, const Matrix& f);
Roof inverse_roof(const SSet& s, std::size_t k);

/// ψ ∘ φ.
Roof compose_roofs(const SSet& s, const Roof& phi, const Roof& psi);
LocTriple roof_to_triple(const Roof& r);

LocTriple triple_dsum(const SSet& s, const LocTriple& a, const LocTriple& b);
/// t1 ∘ t2
LocTriple triple_compose(const SSet& s, const LocTriple& t1, const LocTriple& t2);
LocTriple triple_add(const SSet& s, const LocTriple& t1, const LocTriple& t2);

struct ZigToken {
  enum class Kind { Forward, InverseOfS };
  Kind kind;
  Matrix f;            // Forward
  std::size_t k = 0;   // InverseOfS
};

/// Tokens in composition order: [t1, ..., tn] means t1 ∘ ... ∘ tn.
LocTriple zigzag_normalize(const SSet& s, const std::vector<ZigToken>& word);

/// A ring map R -> R' plus (optionally) the images of S already inverted.
struct RingMap {
  Ring target = nullptr;
  std::function<Scalar(const Scalar&)> apply;
  std::vector<std::optional<Matrix>> s_inverses;  // F(s_k)^{-1}, computed when absent
};

RingMap identity_map(Ring ring);
/// Z -> Q or Q[t] -> Q(t).
RingMap fraction_map(Ring ring);

Matrix apply_map(const RingMap& f, const Matrix& m);

/// F(g) ∘ F(s)^{-1} ∘ F(i); PreconditionError when F(s) is not invertible.
Matrix evaluate_functor(const SSet& s, const LocTriple& t, const RingMap& f);

/// F(x0) ∘ F((y0; d))^{-1} ∘ in_A, the forward reading of a roof.
Matrix evaluate_roof(const SSet& s, const Roof& r, const RingMap& f);

std::string describe(const LocTriple& t);

}  // namespace cohn
