#pragma once

// The base additive category Free(R): objects are ranks, morphisms matrices.
// Also the Karoubization and its small envelope.

#include "cohn/matrix.hpp"

#include <optional>

namespace cohn {

using MatMorphism = Matrix;

enum class MatOp { Compose, Add, DirectSum, Negate };

/// compose(f, g) = f∘g; negate ignores g.
MatMorphism mat_ops(MatOp op, const MatMorphism& f, const MatMorphism& g);

struct CanonicalMaps {
  MatMorphism in_x, pr_x, in_y, pr_y;
};

/// Coretractions and retractions of X ⊕ Y.
CanonicalMaps canonical_maps(Ring ring, std::size_t x, std::size_t y);

struct KarObject {
  std::size_t base = 0;
  MatMorphism idempotent;
};

bool is_idempotent(const MatMorphism& p);

/// f: (A, p) -> (B, p') is a Kar morphism iff p' f p = f.
bool is_kar_morphism(const KarObject& src, const KarObject& dst, const MatMorphism& f);

struct SmallEnvelopeWitness {
  KarObject object;
  std::size_t complement = 0;
  MatMorphism q;  // base -> Y
  MatMorphism s;  // Y -> base
};

bool check_small_envelope(const SmallEnvelopeWitness& w);

/// Two-sided inverse, or nullopt (NotInvertible). Free algebra: triangular
/// matrices with unit diagonal only.
std::optional<MatMorphism> invert_matrix(const MatMorphism& f);

}  // namespace cohn
