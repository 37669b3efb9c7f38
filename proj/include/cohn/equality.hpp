#pragma once

// Equality of localized morphisms: certificate checking (factorization and
// Malcolmson forms), the fraction oracle, and a bounded witness search.

#include "cohn/localization.hpp"

#include <optional>
#include <string>

namespace cohn {

/// Data of a factorization of (0, g1, -g2) through
/// W = (Z --(k1;p)--> T1 ⊕ T2 --(g,k2)--> Z') in degrees -1, 0, 1.
struct FactorizationWitness {
  std::size_t z = 0, z_prime = 0, t1 = 0, t2 = 0;
  Matrix k1;  // Z -> T1
  TriangularCert k1_cert;
  Matrix k2;  // T2 -> Z'
  TriangularCert k2_cert;
  Matrix p;        // Z -> T2
  Matrix g;        // T1 -> Z'
  Matrix alpha10;  // A ⊕ C'1 ⊕ C'2 -> T1 ⊕ T2
  Matrix alpha11;  // C1 ⊕ C2 -> Z'
  Matrix alpha2;   // T1 ⊕ T2 -> A'
};

/// Objects E1, E2, R1, R2, E are the ranks below; P and M carry Ŝ certificates.
struct MalcolmsonWitness {
  std::size_t e1 = 0, e2 = 0, r1 = 0, r2 = 0, e = 0;
  Matrix l;  // E1 -> R1
  Matrix m;  // E2 -> R2
  TriangularCert m_cert;
  Matrix q;  // C'1 ⊕ C'2 ⊕ E1 ⊕ E2 -> E
  Matrix p;  // E -> C1 ⊕ C2 ⊕ R1 ⊕ R2
  TriangularCert p_cert;
  Matrix u;  // E -> A'
  Matrix v;  // A -> E
  Matrix x;  // E1 -> A'
  Matrix y;  // A -> R2
};

struct CheckResult {
  bool ok = false;
  std::string failure;  // first failing block or condition
  explicit operator bool() const { return ok; }
};

/// r = [[i1, s1, 0], [i2, 0, s2]] : A ⊕ C'1 ⊕ C'2 -> C1 ⊕ C2.
Matrix witness_r(const LocTriple& t1, const LocTriple& t2);
/// x' = (0, g1, -g2) : A ⊕ C'1 ⊕ C'2 -> A'.
Matrix witness_x(const LocTriple& t1, const LocTriple& t2);

CheckResult check_factorization(const SSet& s, const LocTriple& t1, const LocTriple& t2,
                                const FactorizationWitness& w);
CheckResult check_malcolmson(const SSet& s, const LocTriple& t1, const LocTriple& t2, const MalcolmsonWitness& w);

/// The two sides of the 5x5 block identity (rows C1, C2, R1, R2, A'; columns C'1, C'2, E1, E2, A).
std::pair<Matrix, Matrix> malcolmson_sides(const LocTriple& t1, const LocTriple& t2, const MalcolmsonWitness& w);

/// PreconditionError if w does not verify, or if the T1 part of alpha10 does
/// not factor through k1 (the translation needs that factorization).
MalcolmsonWitness malcolmson_from_factorization(const SSet& s, const LocTriple& t1, const LocTriple& t2,
                                                const FactorizationWitness& w);

/// Witness with Z = T1 = 0, T2 = Z' = A', k2 = id, alpha2 = id built from a
/// null-homotopy h with h r = x'; nullopt when no such h is found.
std::optional<FactorizationWitness> tautological_witness(const SSet& s, const LocTriple& t1, const LocTriple& t2);

enum class Verdict { True, False, Inapplicable };

bool oracle_applicable(const SSet& s);
Verdict decide_equal_oracle(const SSet& s, const LocTriple& t1, const LocTriple& t2);

enum class SearchStatus { Found, NotFoundWithinCap, Unsupported };

struct SearchResult {
  SearchStatus status;
  FactorizationWitness witness;
  std::size_t shapes_tried = 0;
};

/// Enumerates k1, k2 as block-diagonal words in S ∪ {id(1)} (at most `cap`
/// tags, all ranks at most `cap`), fixes alpha2 and g with entries in
/// {-1, 0, 1} (at most 8 fixed scalars), and solves for the rest.
SearchResult search_equal(const SSet& s, const LocTriple& t1, const LocTriple& t2, std::size_t cap);

}  // namespace cohn
