#pragma once

// Exact coefficient rings. Everything downstream (matrices, complexes,
// triples) is generic over Scalar, which carries an interned descriptor
// pointer plus a canonical payload.

#include <gmpxx.h>

#include <compare>
#include <optional>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace cohn {

/// Raised for shape and descriptor mismatches anywhere in the engine.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when an operation's precondition (not a shape) is violated.
class PreconditionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

enum class RingKind {
  Integers,
  Rationals,
  Polynomials,   // Q[t]
  FreeAlgebra,   // Q<x1..xn>
  // Internal: Q(t), only produced by fraction-ring evaluation of Q[t].
  RationalFunctions,
};

struct RingDescriptor {
  RingKind kind;
  std::vector<std::string> generators;  // poly: {variable}; free algebra: names

  bool is_commutative() const;
  bool supports_linear_solving() const;
  bool is_field() const;
  std::string name() const;
};

/// Interned ring handle; two handles are the same ring iff the pointers match.
using Ring = const RingDescriptor*;

Ring integers();
Ring rationals();
Ring polynomials(const std::string& var = "t");
Ring free_algebra(const std::vector<std::string>& generators);
Ring rational_functions(const std::string& var = "t");

/// Dense univariate polynomial over Q, coefficients low to high, no trailing zeros.
struct QPoly {
  std::vector<mpq_class> c;

  bool is_zero() const { return c.empty(); }
  int degree() const { return static_cast<int>(c.size()) - 1; }
  void trim();
  bool operator==(const QPoly&) const = default;
};

QPoly poly_add(const QPoly& a, const QPoly& b);
QPoly poly_neg(const QPoly& a);
QPoly poly_mul(const QPoly& a, const QPoly& b);
// Euclidean division over Q; b nonzero.
std::pair<QPoly, QPoly> poly_divmod(const QPoly& a, const QPoly& b);
QPoly poly_gcd(QPoly a, QPoly b);  // monic, or zero

/// Word in the free algebra: generator indices, compared length-then-lex.
using Word = std::basic_string<std::uint8_t>;

bool shortlex_less(const Word& a, const Word& b);

/// Finite formal sum of (coefficient, word); sorted shortlex, no zero coefficients.
struct FreeSum {
  std::vector<std::pair<Word, mpq_class>> terms;
  bool operator==(const FreeSum&) const = default;
};

/// Element of Q(t) as num/den with gcd 1 and monic denominator.
struct RatFunc {
  QPoly num;
  QPoly den;
  bool operator==(const RatFunc&) const = default;
};

class Scalar {
 public:
  using Payload = std::variant<mpz_class, mpq_class, QPoly, FreeSum, RatFunc>;

  Scalar() = default;
  Scalar(Ring ring, Payload payload);

  static Scalar zero(Ring ring);
  static Scalar one(Ring ring);
  static Scalar from_int(Ring ring, long v);
  static Scalar from_rational(Ring ring, const mpq_class& q);
  /// Single generator of a free algebra or the variable of Q[t] / Q(t).
  static Scalar generator(Ring ring, std::size_t index = 0);

  Ring ring() const { return ring_; }
  const Payload& payload() const { return payload_; }

  bool is_zero() const;
  bool is_one() const;

  Scalar operator+(const Scalar& b) const;
  Scalar operator-(const Scalar& b) const;
  Scalar operator*(const Scalar& b) const;
  Scalar operator-() const;
  Scalar& operator+=(const Scalar& b) { return *this = *this + b; }
  Scalar& operator-=(const Scalar& b) { return *this = *this - b; }
  Scalar& operator*=(const Scalar& b) { return *this = *this * b; }

  /// Structural equality of canonical forms (ring must match too).
  bool operator==(const Scalar& b) const;

  std::string to_string() const;

 private:
  Ring ring_ = nullptr;
  Payload payload_;
};

enum class Arith { Add, Sub, Mul, Neg };

/// Dispatching form of the four ring operations (Neg ignores b).
Scalar ring_arith(Arith op, const Scalar& a, const Scalar& b);

/// Two-sided inverse if `a` is a unit; nullopt is the NotAUnit signal.
std::optional<Scalar> try_invert(const Scalar& a);

/// Parse an element literal ("3", "2/3", "3*t^2 - 1", "2*x*y - y*x + 1").
Scalar parse_scalar(Ring ring, std::string_view text);

/// Exact division a/b in a field (Q, Q(t)); b must be nonzero.
Scalar field_div(const Scalar& a, const Scalar& b);

/// Numerator/denominator helpers used by the fraction-ring functor.
Scalar to_fraction_field(const Scalar& a);
Ring fraction_field_of(Ring ring);

}  // namespace cohn
