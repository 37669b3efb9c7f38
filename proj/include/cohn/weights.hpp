#pragma once

// The stupid weight structure on K^b(Free(R)): weight decompositions, weight
// ranges, weak weight decompositions of certificate towers, heart hom-sets of
// the localized category, and negativity checks.

#include "cohn/equality.hpp"

#include <climits>
#include <optional>
#include <vector>

namespace cohn {

/// A complex concentrated in degree -k has weight k.
inline constexpr int kWeightPerDegree = -1;
inline constexpr int weight_of_degree(int degree) { return kWeightPerDegree * degree; }
inline constexpr int degree_of_weight(int weight) { return kWeightPerDegree * weight; }

/// Weights of the terms of c as [lo, hi]; {INT_MAX, INT_MIN} for the zero complex.
std::pair<int, int> weight_support(const BoundedComplex& c);

/// X -> M -> Y -> X[1] with X in w<=n and Y in w>=n+1.
struct WeightDecomposition {
  int n = 0;
  Truncation t;             // stupid truncation at degree -n
  Homotopy composite_null;  // proj ∘ incl ~ 0 (it is zero on the nose)
};

WeightDecomposition weight_decompose(const BoundedComplex& m, int n);

/// Re-checks every claim of the decomposition: chain maps, class membership,
/// null composite, and the homotopy equivalence cone(X -> M) ≃ Y.
bool verify_weight_decomposition(const BoundedComplex& m, const WeightDecomposition& wd);

struct WeightRange {
  bool empty = true;
  int lo = INT_MAX, hi = INT_MIN;
  bool operator==(const WeightRange&) const = default;
};

/// Weights of the minimal model; nullopt (Unsupported) outside fields.
std::optional<WeightRange> weight_range(const BoundedComplex& m);

enum class WeightClaim { AtMost, AtLeast, Within };

struct WeightClassQuery {
  BoundedComplex complex;
  WeightClaim claim = WeightClaim::Within;
  int a = 0, b = 0;  // w<=a, w>=a, or w in [a, b]
};

/// Decided through weight_range; nullopt outside fields.
std::optional<bool> holds(const WeightClassQuery& q);

// ---------------------------------------------------------------- towers

/// cone(cert.assembled)[shift]: the two-term complex in degrees (-1-shift, -shift).
struct TowerLayer {
  TriangularCert cert;
  int shift = 0;
};

/// An iterated extension of shifted layers. The differential of the total
/// complex is the layer differentials plus glue: glue[{k, j}] (k < j) lists,
/// per source degree n, the block from layer j in degree n to layer k in
/// degree n + 1.
struct CertTower {
  std::vector<TowerLayer> layers;
  std::map<std::pair<std::size_t, std::size_t>, std::map<int, Matrix>> glue;
};

BoundedComplex layer_complex(const TowerLayer& layer);

/// Total complex; DomainError when blocks are misshapen or d∘d != 0.
BoundedComplex assemble_tower(const SSet& s, const CertTower& tower);

struct WeakWeightDecomposition {
  BoundedComplex m;
  CertTower x_tower;  // layers with shift <= 0
  CertTower y_tower;  // layers with shift >= 1
  BoundedComplex x, y;
  ChainMap incl;  // X -> M
  ChainMap proj;  // M -> Y
  ChainMap glue;  // Y[-1] -> X; M is its cone up to reordering summands
  int m_lo = 0, n_hi = 0;  // shift range of the input tower
  bool x_in_range = false, y_in_range = false;
};

WeakWeightDecomposition weak_weight_decompose(const SSet& s, const CertTower& tower);

/// The permutation cone(glue) -> M; ChainMap validation makes it a chain isomorphism.
ChainMap reassembly(const WeakWeightDecomposition& w);

// ---------------------------------------------------------------- heart

struct HeartReport {
  std::vector<LocTriple> normalized;
  std::vector<std::size_t> class_of;         // probe index -> class index
  std::vector<std::size_t> representatives;  // class index -> first probe
  bool oracle_used = false;
};

/// Probes are zig-zags X -> Y; classes by the fraction oracle when it
/// applies, otherwise by structural equality of normalized triples.
HeartReport heart_hom(const SSet& s, std::size_t x, std::size_t y, const std::vector<std::vector<ZigToken>>& probes);

// ---------------------------------------------------------------- negativity

struct NegativityEntry {
  std::size_t p = 0, q = 0;
  int shift = 0;
  std::size_t chain_maps = 0;  // rank of the chain-map module P -> Q[shift]
  bool violated = false;
  std::optional<ChainMap> witness;  // a chain map that is not null-homotopic
};

struct NegativityReport {
  bool supported = true;
  std::vector<NegativityEntry> entries;  // ordered by (p, q, shift)
  bool negative() const;
};

/// Basis of chain maps P -> Q as a module (Z or a field); nullopt otherwise.
std::optional<std::vector<ChainMap>> chain_map_basis(const BoundedComplex& p, const BoundedComplex& q);

NegativityReport negativity_check(const std::vector<BoundedComplex>& objects, const std::vector<int>& shifts);

}  // namespace cohn
