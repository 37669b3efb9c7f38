#pragma once

// Triangular certificates: block lower-triangular matrices whose diagonal
// blocks are elements of S or identities. A certificate whose tags are all
// ElementOfS witnesses cone(assembled) in D; identity tags give the class Ŝ.

#include "cohn/complexes.hpp"

#include <map>
#include <utility>
#include <vector>

namespace cohn {

struct SSet {
  Ring ring = nullptr;
  std::vector<Matrix> elements;
  bool contains_identities = true;
  bool closed_under_direct_sums = true;
};

struct DiagTag {
  enum class Kind { ElementOfS, Identity };
  Kind kind = Kind::Identity;
  std::size_t value = 0;  // index into S, or the rank of the identity

  static DiagTag element(std::size_t idx) { return {Kind::ElementOfS, idx}; }
  static DiagTag identity(std::size_t rank) { return {Kind::Identity, rank}; }
  bool operator==(const DiagTag&) const = default;
};

struct TriangularCert {
  Ring ring = nullptr;
  std::vector<DiagTag> diagonal;
  /// (k, l) with k < l: block f_kl from the source of entry k to the target of entry l.
  std::map<std::pair<std::size_t, std::size_t>, Matrix> below;
  std::vector<std::size_t> src_ranks, dst_ranks;  // per diagonal entry
  Matrix assembled;

  std::size_t size() const { return diagonal.size(); }
  bool only_s_tags() const;
};

/// Validates block shapes against S and assembles.
TriangularCert make_cert(const SSet& s, std::vector<DiagTag> diagonal,
                         std::map<std::pair<std::size_t, std::size_t>, Matrix> below = {});
TriangularCert singleton_cert(const SSet& s, std::size_t index);
/// Identity(rank) tag; rank 0 gives the empty certificate.
TriangularCert identity_cert(const SSet& s, std::size_t rank);

/// Diagonal block of entry k (an element of S or an identity).
Matrix diagonal_block(const SSet& s, const DiagTag& tag);

/// True when `cert` is internally consistent and its assembly equals `m`.
bool certifies(const SSet& s, const TriangularCert& cert, const Matrix& m);

/// The two-term complex ⊕S^{-1} -> ⊕S^0 in degrees (-1, 0).
BoundedComplex assemble(const TriangularCert& cert);

/// [[A, 0], [glue, B]]; glue goes from the source of A to the target of B.
TriangularCert extend(const SSet& s, const TriangularCert& a, const TriangularCert& b, const Matrix& glue);

struct ElementaryFactor {
  enum class Kind { InS, Invertible };
  Kind kind;
  Matrix m;
  std::vector<DiagTag> layout;  // InS: block-diagonal pieces in order
  Matrix inverse;               // Invertible: two-sided inverse
};

/// Ordered factors whose product (left to right) equals cert.assembled.
std::vector<ElementaryFactor> factor_elementary(const SSet& s, const TriangularCert& cert);

/// Product of the factor list (identity of the right size when empty).
Matrix multiply_factors(const std::vector<ElementaryFactor>& fs, Ring ring, std::size_t rank_if_empty);

/// An InS factor is literally the direct sum of its layout pieces.
bool check_ins_layout(const SSet& s, const ElementaryFactor& f);

}  // namespace cohn
