#include "cohn/coeff.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>

namespace cohn {

// ---------------------------------------------------------------- descriptors

bool RingDescriptor::is_commutative() const {
  if (kind == RingKind::FreeAlgebra) return generators.size() < 2;
  return true;
}

bool RingDescriptor::supports_linear_solving() const {
  return kind == RingKind::Integers || is_field();
}

bool RingDescriptor::is_field() const {
  return kind == RingKind::Rationals || kind == RingKind::RationalFunctions;
}

std::string RingDescriptor::name() const {
  switch (kind) {
    case RingKind::Integers: return "Z";
    case RingKind::Rationals: return "Q";
    case RingKind::Polynomials: return "Q[" + generators.at(0) + "]";
    case RingKind::RationalFunctions: return "Q(" + generators.at(0) + ")";
    case RingKind::FreeAlgebra: {
      std::string s = "Q<";
      for (std::size_t i = 0; i < generators.size(); ++i) {
        if (i) s += ",";
        s += generators[i];
      }
      return s + ">";
    }
  }
  return "?";
}

namespace {

Ring intern(RingKind kind, std::vector<std::string> gens) {
  static std::mutex mu;
  static std::map<std::pair<int, std::vector<std::string>>, std::unique_ptr<RingDescriptor>> table;
  std::lock_guard lock(mu);
  auto key = std::make_pair(static_cast<int>(kind), gens);
  auto it = table.find(key);
  if (it == table.end()) {
    it = table.emplace(key, std::make_unique<RingDescriptor>(RingDescriptor{kind, std::move(gens)})).first;
  }
  return it->second.get();
}

}  // namespace

Ring integers() { return intern(RingKind::Integers, {}); }
Ring rationals() { return intern(RingKind::Rationals, {}); }
Ring polynomials(const std::string& var) { return intern(RingKind::Polynomials, {var}); }
Ring rational_functions(const std::string& var) { return intern(RingKind::RationalFunctions, {var}); }
Ring free_algebra(const std::vector<std::string>& generators) {
  if (generators.empty() || generators.size() > 255) throw DomainError("free algebra needs 1..255 generators");
  return intern(RingKind::FreeAlgebra, generators);
}

// ---------------------------------------------------------------- polynomials

void QPoly::trim() {
  while (!c.empty() && c.back() == 0) c.pop_back();
}

QPoly poly_add(const QPoly& a, const QPoly& b) {
  QPoly r;
  r.c.resize(std::max(a.c.size(), b.c.size()));
  for (std::size_t i = 0; i < r.c.size(); ++i) {
    if (i < a.c.size()) r.c[i] += a.c[i];
    if (i < b.c.size()) r.c[i] += b.c[i];
  }
  r.trim();
  return r;
}

QPoly poly_neg(const QPoly& a) {
  QPoly r = a;
  for (auto& x : r.c) x = -x;
  return r;
}

QPoly poly_mul(const QPoly& a, const QPoly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  QPoly r;
  r.c.assign(a.c.size() + b.c.size() - 1, mpq_class(0));
  for (std::size_t i = 0; i < a.c.size(); ++i)
    for (std::size_t j = 0; j < b.c.size(); ++j) r.c[i + j] += a.c[i] * b.c[j];
  r.trim();
  return r;
}

std::pair<QPoly, QPoly> poly_divmod(const QPoly& a, const QPoly& b) {
  if (b.is_zero()) throw DomainError("polynomial division by zero");
  QPoly q, r = a;
  if (a.degree() >= b.degree()) q.c.assign(static_cast<std::size_t>(a.degree() - b.degree() + 1), mpq_class(0));
  const mpq_class& lead = b.c.back();
  while (!r.is_zero() && r.degree() >= b.degree()) {
    const auto shift = static_cast<std::size_t>(r.degree() - b.degree());
    mpq_class f = r.c.back() / lead;
    q.c[shift] = f;
    for (std::size_t i = 0; i < b.c.size(); ++i) r.c[i + shift] -= f * b.c[i];
    r.trim();
  }
  q.trim();
  return {q, r};
}

QPoly poly_gcd(QPoly a, QPoly b) {
  while (!b.is_zero()) {
    auto [q, r] = poly_divmod(a, b);
    a = std::move(b);
    b = std::move(r);
  }
  if (!a.is_zero()) {
    mpq_class lead = a.c.back();
    for (auto& x : a.c) x /= lead;
  }
  return a;
}

namespace {

RatFunc make_ratfunc(QPoly num, QPoly den) {
  if (den.is_zero()) throw DomainError("rational function with zero denominator");
  if (num.is_zero()) return {{}, QPoly{{mpq_class(1)}}};
  QPoly g = poly_gcd(num, den);
  if (g.degree() > 0) {
    num = poly_divmod(num, g).first;
    den = poly_divmod(den, g).first;
  }
  mpq_class lead = den.c.back();
  for (auto& x : num.c) x /= lead;
  for (auto& x : den.c) x /= lead;
  return {std::move(num), std::move(den)};
}

// ---------------------------------------------------------------- free algebra

FreeSum free_normalize(std::vector<std::pair<Word, mpq_class>> terms) {
  std::sort(terms.begin(), terms.end(),
            [](const auto& x, const auto& y) { return shortlex_less(x.first, y.first); });
  FreeSum r;
  for (auto& t : terms) {
    if (!r.terms.empty() && r.terms.back().first == t.first) {
      r.terms.back().second += t.second;
    } else {
      r.terms.push_back(std::move(t));
    }
    if (r.terms.back().second == 0) r.terms.pop_back();
  }
  return r;
}

FreeSum free_add(const FreeSum& a, const FreeSum& b) {
  auto terms = a.terms;
  terms.insert(terms.end(), b.terms.begin(), b.terms.end());
  return free_normalize(std::move(terms));
}

FreeSum free_mul(const FreeSum& a, const FreeSum& b) {
  std::vector<std::pair<Word, mpq_class>> terms;
  terms.reserve(a.terms.size() * b.terms.size());
  for (const auto& [wa, ca] : a.terms)
    for (const auto& [wb, cb] : b.terms) terms.emplace_back(wa + wb, ca * cb);
  return free_normalize(std::move(terms));
}

FreeSum free_neg(const FreeSum& a) {
  FreeSum r = a;
  for (auto& t : r.terms) t.second = -t.second;
  return r;
}

void require_same(const Scalar& a, const Scalar& b) {
  if (a.ring() != b.ring()) throw DomainError("ring descriptor mismatch");
}

}  // namespace

bool shortlex_less(const Word& a, const Word& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a < b;
}

// ---------------------------------------------------------------- Scalar

Scalar::Scalar(Ring ring, Payload payload) : ring_(ring), payload_(std::move(payload)) {}

Scalar Scalar::zero(Ring ring) { return from_int(ring, 0); }
Scalar Scalar::one(Ring ring) { return from_int(ring, 1); }

Scalar Scalar::from_int(Ring ring, long v) { return from_rational(ring, mpq_class(v)); }

Scalar Scalar::from_rational(Ring ring, const mpq_class& value) {
  mpq_class q = value;
  q.canonicalize();
  switch (ring->kind) {
    case RingKind::Integers:
      if (q.get_den() != 1) throw DomainError("non-integral value for Z");
      return {ring, mpz_class(q.get_num())};
    case RingKind::Rationals: return {ring, q};
    case RingKind::Polynomials: {
      QPoly p;
      if (q != 0) p.c.push_back(q);
      return {ring, p};
    }
    case RingKind::RationalFunctions: {
      QPoly p;
      if (q != 0) p.c.push_back(q);
      return {ring, make_ratfunc(p, QPoly{{mpq_class(1)}})};
    }
    case RingKind::FreeAlgebra: {
      FreeSum f;
      if (q != 0) f.terms.emplace_back(Word{}, q);
      return {ring, f};
    }
  }
  throw DomainError("unknown ring");
}

Scalar Scalar::generator(Ring ring, std::size_t index) {
  switch (ring->kind) {
    case RingKind::Polynomials:
      return {ring, QPoly{{mpq_class(0), mpq_class(1)}}};
    case RingKind::RationalFunctions:
      return {ring, make_ratfunc(QPoly{{mpq_class(0), mpq_class(1)}}, QPoly{{mpq_class(1)}})};
    case RingKind::FreeAlgebra: {
      if (index >= ring->generators.size()) throw DomainError("generator index out of range");
      FreeSum f;
      f.terms.emplace_back(Word(1, static_cast<std::uint8_t>(index)), mpq_class(1));
      return {ring, f};
    }
    default: throw DomainError("ring " + ring->name() + " has no generators");
  }
}

bool Scalar::is_zero() const {
  return std::visit(
      [](const auto& p) -> bool {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, mpz_class> || std::is_same_v<T, mpq_class>) return p == 0;
        else if constexpr (std::is_same_v<T, QPoly>) return p.is_zero();
        else if constexpr (std::is_same_v<T, FreeSum>) return p.terms.empty();
        else return p.num.is_zero();
      },
      payload_);
}

bool Scalar::is_one() const { return *this == one(ring_); }

Scalar Scalar::operator+(const Scalar& b) const {
  require_same(*this, b);
  return std::visit(
      [&](const auto& p) -> Scalar {
        using T = std::decay_t<decltype(p)>;
        const auto& q = std::get<T>(b.payload_);
        if constexpr (std::is_same_v<T, mpz_class>) return {ring_, mpz_class(p + q)};
        else if constexpr (std::is_same_v<T, mpq_class>) return {ring_, mpq_class(p + q)};
        else if constexpr (std::is_same_v<T, QPoly>) return {ring_, poly_add(p, q)};
        else if constexpr (std::is_same_v<T, FreeSum>) return {ring_, free_add(p, q)};
        else
          return {ring_, make_ratfunc(poly_add(poly_mul(p.num, q.den), poly_mul(q.num, p.den)),
                                      poly_mul(p.den, q.den))};
      },
      payload_);
}

Scalar Scalar::operator-() const {
  return std::visit(
      [&](const auto& p) -> Scalar {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, mpz_class>) return {ring_, mpz_class(-p)};
        else if constexpr (std::is_same_v<T, mpq_class>) return {ring_, mpq_class(-p)};
        else if constexpr (std::is_same_v<T, QPoly>) return {ring_, poly_neg(p)};
        else if constexpr (std::is_same_v<T, FreeSum>) return {ring_, free_neg(p)};
        else return {ring_, RatFunc{poly_neg(p.num), p.den}};
      },
      payload_);
}

Scalar Scalar::operator-(const Scalar& b) const { return *this + (-b); }

Scalar Scalar::operator*(const Scalar& b) const {
  require_same(*this, b);
  return std::visit(
      [&](const auto& p) -> Scalar {
        using T = std::decay_t<decltype(p)>;
        const auto& q = std::get<T>(b.payload_);
        if constexpr (std::is_same_v<T, mpz_class>) return {ring_, mpz_class(p * q)};
        else if constexpr (std::is_same_v<T, mpq_class>) return {ring_, mpq_class(p * q)};
        else if constexpr (std::is_same_v<T, QPoly>) return {ring_, poly_mul(p, q)};
        else if constexpr (std::is_same_v<T, FreeSum>) return {ring_, free_mul(p, q)};
        else return {ring_, make_ratfunc(poly_mul(p.num, q.num), poly_mul(p.den, q.den))};
      },
      payload_);
}

bool Scalar::operator==(const Scalar& b) const { return ring_ == b.ring_ && payload_ == b.payload_; }

namespace {

std::string coeff_prefix(const mpq_class& c, bool has_monomial) {
  // Returns the printed coefficient of a non-leading-sign term, with "*" when
  // a monomial follows. Sign is handled by the caller.
  mpq_class a = abs(c);
  if (has_monomial) {
    if (a == 1) return "";
    return a.get_str() + "*";
  }
  return a.get_str();
}

std::string join_terms(const std::vector<std::pair<mpq_class, std::string>>& terms) {
  if (terms.empty()) return "0";
  std::string out;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const auto& [c, mono] = terms[i];
    const bool neg = c < 0;
    if (i == 0) {
      if (neg) out += "-";
    } else {
      out += neg ? " - " : " + ";
    }
    out += coeff_prefix(c, !mono.empty());
    out += mono;
  }
  return out;
}

std::string poly_string(const QPoly& p, const std::string& var) {
  std::vector<std::pair<mpq_class, std::string>> terms;
  for (int d = p.degree(); d >= 0; --d) {
    const mpq_class& c = p.c[static_cast<std::size_t>(d)];
    if (c == 0) continue;
    std::string mono;
    if (d == 1) mono = var;
    else if (d > 1) mono = var + "^" + std::to_string(d);
    terms.emplace_back(c, mono);
  }
  return join_terms(terms);
}

}  // namespace

std::string Scalar::to_string() const {
  return std::visit(
      [&](const auto& p) -> std::string {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, mpz_class> || std::is_same_v<T, mpq_class>) return p.get_str();
        else if constexpr (std::is_same_v<T, QPoly>) return poly_string(p, ring_->generators.at(0));
        else if constexpr (std::is_same_v<T, FreeSum>) {
          std::vector<std::pair<mpq_class, std::string>> terms;
          for (auto it = p.terms.rbegin(); it != p.terms.rend(); ++it) {
            std::string mono;
            for (std::size_t k = 0; k < it->first.size(); ++k) {
              if (k) mono += "*";
              mono += ring_->generators.at(it->first[k]);
            }
            terms.emplace_back(it->second, mono);
          }
          return join_terms(terms);
        } else {
          const std::string& v = ring_->generators.at(0);
          if (p.den.degree() == 0) return poly_string(p.num, v);
          return "(" + poly_string(p.num, v) + ")/(" + poly_string(p.den, v) + ")";
        }
      },
      payload_);
}

Scalar ring_arith(Arith op, const Scalar& a, const Scalar& b) {
  switch (op) {
    case Arith::Add: return a + b;
    case Arith::Sub: return a - b;
    case Arith::Mul: return a * b;
    case Arith::Neg: return -a;
  }
  throw DomainError("unknown arithmetic op");
}

std::optional<Scalar> try_invert(const Scalar& a) {
  Ring r = a.ring();
  switch (r->kind) {
    case RingKind::Integers: {
      const auto& z = std::get<mpz_class>(a.payload());
      if (z == 1 || z == -1) return a;
      return std::nullopt;
    }
    case RingKind::Rationals: {
      const auto& q = std::get<mpq_class>(a.payload());
      if (q == 0) return std::nullopt;
      return Scalar(r, mpq_class(1 / q));
    }
    case RingKind::Polynomials: {
      const auto& p = std::get<QPoly>(a.payload());
      if (p.degree() != 0) return std::nullopt;
      return Scalar(r, QPoly{{mpq_class(1 / p.c[0])}});
    }
    case RingKind::RationalFunctions: {
      const auto& f = std::get<RatFunc>(a.payload());
      if (f.num.is_zero()) return std::nullopt;
      return Scalar(r, make_ratfunc(f.den, f.num));
    }
    case RingKind::FreeAlgebra: {
      // Units of Q<X> are the nonzero constants.
      const auto& f = std::get<FreeSum>(a.payload());
      if (f.terms.size() != 1 || !f.terms[0].first.empty()) return std::nullopt;
      return Scalar::from_rational(r, 1 / f.terms[0].second);
    }
  }
  return std::nullopt;
}

Scalar field_div(const Scalar& a, const Scalar& b) {
  if (!a.ring()->is_field()) throw DomainError("field_div outside a field");
  auto inv = try_invert(b);
  if (!inv) throw DomainError("division by zero");
  return a * *inv;
}

Ring fraction_field_of(Ring ring) {
  switch (ring->kind) {
    case RingKind::Integers:
    case RingKind::Rationals: return rationals();
    case RingKind::Polynomials:
    case RingKind::RationalFunctions: return rational_functions(ring->generators.at(0));
    case RingKind::FreeAlgebra: break;
  }
  throw DomainError("no fraction field for " + ring->name());
}

Scalar to_fraction_field(const Scalar& a) {
  Ring f = fraction_field_of(a.ring());
  switch (a.ring()->kind) {
    case RingKind::Integers: return {f, mpq_class(std::get<mpz_class>(a.payload()))};
    case RingKind::Polynomials: return {f, make_ratfunc(std::get<QPoly>(a.payload()), QPoly{{mpq_class(1)}})};
    default: return a;
  }
}

// ---------------------------------------------------------------- parsing

namespace {

class ScalarParser {
 public:
  ScalarParser(Ring ring, std::string_view text) : ring_(ring), s_(text) {}

  Scalar parse() {
    skip();
    if (pos_ == s_.size()) fail("empty element literal");
    Scalar acc = Scalar::zero(ring_);
    bool first = true;
    while (true) {
      skip();
      if (pos_ == s_.size()) break;
      int sign = 1;
      if (peek() == '+' || peek() == '-') {
        sign = peek() == '-' ? -1 : 1;
        ++pos_;
      } else if (!first) {
        fail("expected '+' or '-'");
      }
      Scalar t = term();
      acc += sign < 0 ? -t : t;
      first = false;
    }
    return acc;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw DomainError("element literal '" + std::string(s_) + "': " + msg);
  }
  char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  Scalar term() {
    Scalar acc = Scalar::one(ring_);
    while (true) {
      skip();
      acc = acc * factor();
      skip();
      if (peek() == '*') {
        ++pos_;
        continue;
      }
      break;
    }
    return acc;
  }

  Scalar factor() {
    skip();
    if (std::isdigit(static_cast<unsigned char>(peek()))) {
      std::string num = digits();
      mpq_class q{mpz_class(num)};
      if (peek() == '/') {
        ++pos_;
        std::string den = digits();
        if (den.empty()) fail("missing denominator");
        mpz_class d(den);
        if (d == 0) fail("zero denominator");
        q = mpq_class(mpz_class(num), d);
        q.canonicalize();
      }
      if (ring_->kind == RingKind::Integers && q.get_den() != 1) fail("fraction in Z");
      return Scalar::from_rational(ring_, q);
    }
    if (std::isalpha(static_cast<unsigned char>(peek())) || peek() == '_') {
      std::string id;
      while (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_') id += s_[pos_++];
      Scalar g = generator_named(id);
      skip();
      if (peek() == '^') {
        ++pos_;
        skip();
        std::string e = digits();
        if (e.empty()) fail("missing exponent");
        long n = std::stol(e);
        Scalar r = Scalar::one(ring_);
        for (long k = 0; k < n; ++k) r = r * g;
        return r;
      }
      return g;
    }
    fail(std::string("unexpected character '") + peek() + "'");
  }

  Scalar generator_named(const std::string& id) {
    const auto& gens = ring_->generators;
    if (ring_->kind == RingKind::FreeAlgebra || ring_->kind == RingKind::Polynomials ||
        ring_->kind == RingKind::RationalFunctions) {
      for (std::size_t i = 0; i < gens.size(); ++i)
        if (gens[i] == id) return Scalar::generator(ring_, i);
    }
    fail("unknown symbol '" + id + "' for ring " + ring_->name());
  }

  std::string digits() {
    std::string d;
    while (std::isdigit(static_cast<unsigned char>(peek()))) d += s_[pos_++];
    return d;
  }

  Ring ring_;
  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace

Scalar parse_scalar(Ring ring, std::string_view text) { return ScalarParser(ring, text).parse(); }

}  // namespace cohn
