#pragma once

// Bounded cochain complexes over Free(R) and the homotopy category K^b.
// Differentials raise degree: d^n : C^n -> C^{n+1}.

#include "cohn/addcat.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace cohn {

class BoundedComplex {
 public:
  BoundedComplex() = default;
  /// ranks[k] sits in degree lo + k; diffs[k] : degree lo+k -> lo+k+1
  /// (ranks.size() - 1 of them). Validates shapes and d∘d = 0, then trims
  /// zero ranks off both ends.
  BoundedComplex(Ring ring, int lo, std::vector<std::size_t> ranks, std::vector<Matrix> diffs);

  static BoundedComplex zero(Ring ring) { return {ring, 0, {}, {}}; }
  static BoundedComplex one_term(Ring ring, int degree, std::size_t rank);
  /// f : R^c -> R^r placed in degrees (lo, lo + 1).
  static BoundedComplex two_term(const Matrix& f, int lo);

  Ring ring() const { return ring_; }
  bool is_zero() const { return ranks_.empty(); }
  int lo() const { return lo_; }
  int hi() const { return lo_ + static_cast<int>(ranks_.size()) - 1; }  // hi < lo iff zero
  std::size_t rank(int n) const;
  Matrix d(int n) const;  // zero matrix of the right shape outside the support
  std::size_t total_rank() const;

  bool operator==(const BoundedComplex& o) const;
  std::string to_string() const;

 private:
  Ring ring_ = nullptr;
  int lo_ = 0;
  std::vector<std::size_t> ranks_;
  std::vector<Matrix> diffs_;
};

class ChainMap {
 public:
  ChainMap() = default;
  /// Components missing from `comps` are zero. Validates shapes and that the
  /// map commutes with the differentials.
  ChainMap(BoundedComplex source, BoundedComplex target, std::map<int, Matrix> comps);

  static ChainMap identity(const BoundedComplex& c);
  static ChainMap zero(const BoundedComplex& s, const BoundedComplex& t);

  const BoundedComplex& source() const { return source_; }
  const BoundedComplex& target() const { return target_; }
  Matrix at(int n) const;

  ChainMap operator+(const ChainMap& o) const;
  ChainMap operator-(const ChainMap& o) const;
  ChainMap operator-() const;
  /// this ∘ o
  ChainMap operator*(const ChainMap& o) const;
  bool operator==(const ChainMap& o) const;

  /// Degrees where the component can be nonzero.
  std::pair<int, int> span() const;

 private:
  BoundedComplex source_, target_;
  std::map<int, Matrix> comps_;
};

/// h^n : source^n -> target^{n-1}.
struct Homotopy {
  std::map<int, Matrix> h;
  Matrix at(int n, const BoundedComplex& s, const BoundedComplex& t) const;
};

/// f - g = d h + h d in every degree.
bool check_homotopy(const ChainMap& f, const ChainMap& g, const Homotopy& h);

/// True if the components commute with the differentials (used at construction).
bool commutes(const BoundedComplex& s, const BoundedComplex& t, const std::map<int, Matrix>& comps);

BoundedComplex shift(const BoundedComplex& c, int k);

struct ConeResult {
  BoundedComplex cone;
  ChainMap iota;  // target -> cone
  ChainMap pi;    // cone -> source[1]
};

ConeResult cone(const ChainMap& f);

enum class HomotopyStatus { Found, No, Unsupported };

struct HomotopyResult {
  HomotopyStatus status;
  Homotopy h;
};

HomotopyResult is_null_homotopic(const ChainMap& f);
HomotopyResult homotopy_equal(const ChainMap& f, const ChainMap& g);

struct MinimizeResult {
  BoundedComplex model;
  ChainMap to_model;     // C -> M
  ChainMap from_model;   // M -> C
  Homotopy on_source;    // id_C ~ from_model ∘ to_model
  // to_model ∘ from_model = id_M exactly.
};

/// Cancels unit differential entries; nullopt (Unsupported) outside fields.
std::optional<MinimizeResult> minimize(const BoundedComplex& c);

struct Truncation {
  BoundedComplex x;       // degrees >= n
  BoundedComplex y;       // degrees <= n - 1
  ChainMap incl;          // X -> C
  ChainMap proj;          // C -> Y
  Matrix connecting;      // d^{n-1} : Y^{n-1} -> X^n
  ConeResult cone_incl;   // cone(X -> C)
  ChainMap to_cone;       // Y -> cone(incl)
  ChainMap from_cone;     // cone(incl) -> Y
  Homotopy cone_homotopy; // id_cone ~ to_cone ∘ from_cone; from_cone ∘ to_cone = id_Y
};

Truncation stupid_truncate(const BoundedComplex& c, int n);

}  // namespace cohn
