#include "support.hpp"

#include <doctest.h>

using namespace testsupport;

namespace {

ChainMap scalar_map(const BoundedComplex& c, long k) {
  std::map<int, Matrix> comps;
  for (int n = c.lo(); n <= c.hi(); ++n)
    comps[n] = Matrix::identity(c.ring(), c.rank(n)).scaled(Scalar::from_int(c.ring(), k));
  return {c, c, comps};
}

void check_minimize(const BoundedComplex& c) {
  auto m = minimize(c);
  REQUIRE(m);
  CHECK((m->to_model * m->from_model) == ChainMap::identity(m->model));
  CHECK(check_homotopy(ChainMap::identity(c), m->from_model * m->to_model, m->on_source));
  for (int n = m->model.lo(); n <= m->model.hi(); ++n) CHECK(m->model.d(n).is_zero());
}

void check_truncation(const BoundedComplex& c, int n) {
  Truncation t = stupid_truncate(c, n);
  CHECK((t.x.is_zero() || t.x.lo() >= n));
  CHECK((t.y.is_zero() || t.y.hi() <= n - 1));
  CHECK((t.proj * t.incl) == ChainMap::zero(t.x, t.y));
  CHECK(t.connecting == c.d(n - 1).block(0, 0, t.x.rank(n), t.y.rank(n - 1)));
  CHECK((t.from_cone * t.to_cone) == ChainMap::identity(t.y));
  CHECK(check_homotopy(ChainMap::identity(t.cone_incl.cone), t.to_cone * t.from_cone, t.cone_homotopy));
  CHECK(c.total_rank() == t.x.total_rank() + t.y.total_rank());
}

}  // namespace

TEST_SUITE("complexes") {
  TEST_CASE("construction validates d^2 = 0") {
    Ring z = integers();
    CHECK_THROWS_WITH_AS(BoundedComplex(z, 0, {1, 1, 1}, {mat(z, 1, 1, {1}), mat(z, 1, 1, {1})}),
                         "complex: d(1) * d(0) != 0", DomainError);
    CHECK_THROWS_AS(BoundedComplex(z, 0, {1, 2}, {mat(z, 1, 1, {1})}), DomainError);
    BoundedComplex c(z, -3, {0, 1, 0}, {Matrix::zero(z, 1, 0), Matrix::zero(z, 0, 1)});
    CHECK(c.lo() == -2);
    CHECK(c.hi() == -2);
    CHECK(BoundedComplex(z, 4, {0, 0}, {Matrix::zero(z, 0, 0)}).is_zero());
  }

  TEST_CASE("chain maps must commute") {
    Ring z = integers();
    BoundedComplex c = BoundedComplex::two_term(mat(z, 1, 1, {2}), 0);
    CHECK_THROWS_AS(ChainMap(c, c, {{0, mat(z, 1, 1, {1})}}), DomainError);
    CHECK_NOTHROW(ChainMap(c, c, {{0, mat(z, 1, 1, {3})}, {1, mat(z, 1, 1, {3})}}));
  }

  TEST_CASE("shift") {
    Ring z = integers();
    Matrix f = mat(z, 2, 1, {1, -2});
    BoundedComplex c = BoundedComplex::two_term(f, -1);
    CHECK(shift(c, 0) == c);
    CHECK(shift(shift(c, 1), -1) == c);
    CHECK(shift(c, 1) == BoundedComplex::two_term(-f, -2));
    CHECK(shift(c, 2) == BoundedComplex::two_term(f, -3));
    for (int k = 0; k < 30; ++k) {
      BoundedComplex r = random_complex(z, rand_int(-3, 3), 4, 2, 3);
      const int a = static_cast<int>(rand_int(-3, 3)), b = static_cast<int>(rand_int(-3, 3));
      CHECK(shift(shift(r, a), b) == shift(r, a + b));
    }
  }

  TEST_CASE("cone examples") {
    Ring z = integers();
    Scalar s = Scalar::from_int(z, 2);
    BoundedComplex a = BoundedComplex::one_term(z, 0, 1);
    ChainMap f(a, a, {{0, Matrix::scalar(s)}});
    CHECK(cone(f).cone == BoundedComplex::two_term(Matrix::scalar(s), -1));

    BoundedComplex c = BoundedComplex::two_term(mat(z, 1, 2, {1, 3}), 0);
    ConeResult ci = cone(ChainMap::identity(c));
    auto h = is_null_homotopic(ChainMap::identity(ci.cone));
    CHECK(h.status == HomotopyStatus::Found);
    CHECK(check_homotopy(ChainMap::identity(ci.cone), ChainMap::zero(ci.cone, ci.cone), h.h));
  }

  TEST_CASE("cone of zero splits") {
    Ring q = rationals();
    BoundedComplex x = BoundedComplex::one_term(q, 0, 2), y = BoundedComplex::one_term(q, 0, 1);
    ConeResult c = cone(ChainMap::zero(x, y));
    BoundedComplex split(q, -1, {2, 1}, {Matrix::zero(q, 1, 2)});
    CHECK(c.cone == split);
    ChainMap to(c.cone, split, {{-1, Matrix::identity(q, 2)}, {0, Matrix::identity(q, 1)}});
    ChainMap from(split, c.cone, {{-1, Matrix::identity(q, 2)}, {0, Matrix::identity(q, 1)}});
    CHECK(to * from == ChainMap::identity(split));
    CHECK(from * to == ChainMap::identity(c.cone));
  }

  TEST_CASE("cone triangle properties") {
    for (Ring r : {integers(), rationals()})
      for (int k = 0; k < 40; ++k) {
        BoundedComplex s = random_complex(r, -1, 3, 2, 3);
        ChainMap f = scalar_map(s, rand_int(-2, 2));
        ConeResult c = cone(f);
        CHECK(c.pi * c.iota == ChainMap::zero(s, shift(s, 1)));
        auto h = is_null_homotopic(c.iota * f);
        CHECK(h.status == HomotopyStatus::Found);
        CHECK(check_homotopy(c.iota * f, ChainMap::zero(s, c.cone), h.h));
      }
  }

  TEST_CASE("null homotopy examples over Z") {
    Ring z = integers();
    BoundedComplex c = BoundedComplex::two_term(mat(z, 1, 1, {2}), 0);
    auto two = is_null_homotopic(scalar_map(c, 2));
    REQUIRE(two.status == HomotopyStatus::Found);
    CHECK(check_homotopy(scalar_map(c, 2), ChainMap::zero(c, c), two.h));
    CHECK(is_null_homotopic(scalar_map(c, 1)).status == HomotopyStatus::No);
    CHECK(is_null_homotopic(scalar_map(c, 0)).status == HomotopyStatus::Found);
    CHECK(homotopy_equal(scalar_map(c, 3), scalar_map(c, 1)).status == HomotopyStatus::Found);
    CHECK(homotopy_equal(scalar_map(c, 3), scalar_map(c, 2)).status == HomotopyStatus::No);
  }

  TEST_CASE("free algebra is verification only") {
    Ring f = free_algebra({"x", "y"});
    BoundedComplex c = BoundedComplex::two_term(Matrix::scalar(Scalar::generator(f, 0)), 0);
    CHECK(is_null_homotopic(ChainMap::identity(c)).status == HomotopyStatus::Unsupported);
    CHECK(minimize(c) == std::nullopt);
  }

  TEST_CASE("homotopy decisions agree with independent solvers") {
    for (Ring r : {integers(), rationals()})
      for (int k = 0; k < 150; ++k) {
        BoundedComplex c = random_complex(r, 0, 3, 2, 2);
        ChainMap f = scalar_map(c, rand_int(1, 3));
        auto res = is_null_homotopic(f);
        const QSystem sys = homotopy_system(f);
        if (res.status == HomotopyStatus::Found) {
          CHECK(check_homotopy(f, ChainMap::zero(c, c), res.h));
        } else {
          REQUIRE(res.status == HomotopyStatus::No);
          if (r == rationals()) CHECK_FALSE(q_solvable(sys));
          else CHECK_FALSE(z_box_solvable(sys, 4));
        }
        if (r == rationals()) CHECK((res.status == HomotopyStatus::Found) == q_solvable(sys));
      }
  }

  TEST_CASE("minimize examples") {
    Ring q = rationals();
    auto c = minimize(BoundedComplex::two_term(mat(q, 1, 1, {1}), 0));
    REQUIRE(c);
    CHECK(c->model.is_zero());
    BoundedComplex flat(q, 0, {2, 1}, {Matrix::zero(q, 1, 2)});
    CHECK(minimize(flat)->model == flat);
    auto m = minimize(BoundedComplex::two_term(mat(q, 2, 2, {1, 0, 0, 0}), 0));
    CHECK(m->model == BoundedComplex(q, 0, {1, 1}, {Matrix::zero(q, 1, 1)}));
    CHECK(minimize(BoundedComplex::two_term(mat(integers(), 1, 1, {1}), 0)) == std::nullopt);
  }

  TEST_CASE("minimize is a homotopy equivalence") {
    Ring q = rationals();
    for (int k = 0; k < 60; ++k) {
      BoundedComplex c = random_complex(q, static_cast<int>(rand_int(-2, 2)), 4, 3, 4);
      check_minimize(c);
      std::size_t pairs = 0;
      for (int n = c.lo(); n < c.hi(); ++n)
        pairs += rref({to_q(c.d(n)), std::vector<mpq_class>(c.rank(n + 1), 0), c.rank(n)}).pivots.size();
      CHECK(minimize(c)->model.total_rank() == c.total_rank() - 2 * pairs);
    }
  }

  TEST_CASE("stupid truncation examples") {
    Ring z = integers();
    BoundedComplex c = BoundedComplex::two_term(mat(z, 1, 1, {2}), -1);
    Truncation t = stupid_truncate(c, 0);
    CHECK(t.x == BoundedComplex::one_term(z, 0, 1));
    CHECK(t.y == BoundedComplex::one_term(z, -1, 1));
    CHECK(t.connecting == mat(z, 1, 1, {2}));
    CHECK(stupid_truncate(c, -5).x == c);
    CHECK(stupid_truncate(c, -5).y.is_zero());
    CHECK(stupid_truncate(c, 5).y == c);
    CHECK(stupid_truncate(c, 5).x.is_zero());
  }

  TEST_CASE("stupid truncation triangles") {
    for (Ring r : {integers(), rationals(), polynomials()})
      for (int k = 0; k < 30; ++k) {
        BoundedComplex c = random_complex(r, -1, 4, 2, 3);
        for (int n = -2; n <= 4; ++n) check_truncation(c, n);
      }
  }
}
