#include "support.hpp"

#include "cohn/linsolve.hpp"

#include <doctest.h>

using namespace testsupport;

TEST_SUITE("coeff") {
  TEST_CASE("capabilities") {
    CHECK(integers()->is_commutative());
    CHECK(rationals()->is_commutative());
    CHECK(polynomials()->is_commutative());
    CHECK_FALSE(free_algebra({"x", "y"})->is_commutative());
    CHECK(integers()->supports_linear_solving());
    CHECK(rationals()->supports_linear_solving());
    CHECK_FALSE(polynomials()->supports_linear_solving());
    CHECK_FALSE(free_algebra({"x", "y"})->supports_linear_solving());
    CHECK(integers() == integers());
    CHECK(free_algebra({"x", "y"}) != free_algebra({"y", "x"}));
  }

  TEST_CASE("ring_arith examples") {
    Ring z = integers(), q = rationals(), f = free_algebra({"x", "y"});
    CHECK(ring_arith(Arith::Add, Scalar::from_int(z, 3), Scalar::from_int(z, -3)).is_zero());
    Scalar x = Scalar::generator(f, 0), y = Scalar::generator(f, 1);
    Scalar xy = ring_arith(Arith::Mul, x, y), yx = ring_arith(Arith::Mul, y, x);
    CHECK(xy.to_string() == "x*y");
    CHECK(yx.to_string() == "y*x");
    CHECK_FALSE(xy == yx);
    Scalar a = parse_scalar(q, "2/3"), b = parse_scalar(q, "9/4");
    CHECK(ring_arith(Arith::Mul, a, b) == Scalar::from_rational(q, mpq_class(3, 2)));
    CHECK(ring_arith(Arith::Sub, a, b) == Scalar::from_rational(q, mpq_class(2, 3) - mpq_class(9, 4)));
    CHECK(ring_arith(Arith::Neg, a, a) == Scalar::from_rational(q, mpq_class(-2, 3)));
  }

  TEST_CASE("mixing rings is a domain error") {
    CHECK_THROWS_AS(Scalar::one(integers()) + Scalar::one(rationals()), DomainError);
  }

  TEST_CASE("canonical forms") {
    Ring q = rationals(), p = polynomials(), f = free_algebra({"x", "y"});
    CHECK(parse_scalar(q, "-4/6").to_string() == "-2/3");
    CHECK(Scalar::from_rational(q, mpq_class(4, -6)).to_string() == "-2/3");
    CHECK(parse_scalar(q, "2/4") == parse_scalar(q, "1/2"));
    Scalar t = Scalar::generator(p);
    Scalar e = (t * t + t) - t * t;
    CHECK(std::get<QPoly>(e.payload()).c.size() == 2);
    CHECK(e == t);
    CHECK((t * t * Scalar::from_int(p, 3) - Scalar::one(p)).to_string() == "3*t^2 - 1");
    Scalar g = parse_scalar(f, "2*x*y - y*x + 1");
    CHECK(g == parse_scalar(f, "1 - y*x + x*y + x*y"));
    const auto& terms = std::get<FreeSum>(g.payload()).terms;
    for (std::size_t k = 1; k < terms.size(); ++k) CHECK(shortlex_less(terms[k - 1].first, terms[k].first));
    CHECK((g - g).is_zero());
    CHECK(std::get<FreeSum>((g - g).payload()).terms.empty());
  }

  TEST_CASE("parse and print round trip") {
    for (Ring r : {integers(), rationals(), polynomials(), free_algebra({"x", "y"})})
      for (int k = 0; k < 200; ++k) {
        Scalar a = random_scalar(r, 9);
        CHECK(parse_scalar(r, a.to_string()) == a);
      }
    CHECK_THROWS(parse_scalar(integers(), "1/2"));
    CHECK_THROWS(parse_scalar(polynomials(), "x"));
  }

  TEST_CASE("ring axioms on random elements") {
    for (Ring r : {integers(), rationals(), polynomials(), free_algebra({"x", "y"})})
      for (int k = 0; k < 150; ++k) {
        Scalar a = random_scalar(r, 9), b = random_scalar(r, 9), c = random_scalar(r, 9);
        CHECK((a + b) + c == a + (b + c));
        CHECK(a * (b * c) == (a * b) * c);
        CHECK(a * (b + c) == a * b + a * c);
        CHECK((a + b) * c == a * c + b * c);
        CHECK(a + (-a) == Scalar::zero(r));
        CHECK(a * Scalar::one(r) == a);
        if (r->is_commutative()) CHECK(a * b == b * a);
      }
  }

  TEST_CASE("polynomial arithmetic agrees with evaluation") {
    Ring p = polynomials();
    for (int k = 0; k < 100; ++k) {
      Scalar a = random_scalar(p, 9), b = random_scalar(p, 9);
      for (long at : {-2L, 0L, 3L}) {
        CHECK(q_entry(a * b, at) == q_entry(a, at) * q_entry(b, at));
        CHECK(q_entry(a - b, at) == q_entry(a, at) - q_entry(b, at));
      }
    }
  }

  TEST_CASE("try_invert") {
    Ring z = integers(), q = rationals(), p = polynomials(), fx = free_algebra({"x"});
    CHECK(*try_invert(parse_scalar(q, "2/5")) == parse_scalar(q, "5/2"));
    CHECK_FALSE(try_invert(Scalar::from_int(z, 2)));
    CHECK(*try_invert(Scalar::from_int(z, -1)) == Scalar::from_int(z, -1));
    CHECK_FALSE(try_invert(Scalar::generator(fx)));
    CHECK_FALSE(try_invert(Scalar::zero(q)));
    CHECK_FALSE(try_invert(Scalar::generator(p)));
    CHECK(try_invert(Scalar::from_int(p, 3)));
    for (Ring r : {integers(), rationals(), polynomials(), free_algebra({"x", "y"})})
      for (int k = 0; k < 100; ++k) {
        Scalar a = random_scalar(r, 9);
        if (auto b = try_invert(a)) {
          CHECK((a * *b).is_one());
          CHECK((*b * a).is_one());
        }
      }
  }

  TEST_CASE("solve_linear examples") {
    Ring q = rationals(), z = integers();
    auto s = solve_linear(mat(q, 2, 2, {1, 2, 0, 1}), mat(q, 2, 1, {3, 1}));
    REQUIRE(s.status == SolveStatus::Solved);
    CHECK(s.x == mat(q, 2, 1, {1, 1}));
    CHECK(solve_linear(mat(z, 1, 1, {2}), mat(z, 1, 1, {1})).status == SolveStatus::NoSolution);
    Ring f = free_algebra({"x", "y"});
    CHECK(solve_linear(Matrix::identity(f, 1), Matrix::identity(f, 1)).status == SolveStatus::Unsupported);
  }

  TEST_CASE("integer solving against a box search") {
    for (int trial = 0; trial < 60; ++trial) {
      const std::size_t n = static_cast<std::size_t>(rand_int(1, 3)), m = static_cast<std::size_t>(rand_int(1, 3));
      Ring z = integers();
      Matrix a = random_matrix(z, m, n, 3), b = random_matrix(z, m, 1, 4);
      auto s = solve_linear(a, b);
      REQUIRE(s.status != SolveStatus::Unsupported);
      if (s.status == SolveStatus::Solved) {
        CHECK(a * s.x == b);
        continue;
      }
      // Exhaustive box: no integer solution with entries in [-6, 6].
      std::vector<long> x(n, -6);
      bool found = false;
      while (true) {
        Matrix xv(z, n, 1);
        for (std::size_t i = 0; i < n; ++i) xv(i, 0) = Scalar::from_int(z, x[i]);
        if (a * xv == b) found = true;
        std::size_t i = 0;
        while (i < n && x[i] == 6) x[i++] = -6;
        if (i == n) break;
        ++x[i];
      }
      CHECK_FALSE(found);
    }
  }

  TEST_CASE("fraction field map") {
    CHECK(fraction_field_of(integers()) == rationals());
    CHECK(fraction_field_of(polynomials()) == rational_functions());
    Scalar t = Scalar::generator(polynomials());
    Scalar ft = to_fraction_field(t);
    CHECK(ft.ring() == rational_functions());
    CHECK((*try_invert(ft) * ft).is_one());
  }
}
