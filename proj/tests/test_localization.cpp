#include "support.hpp"

#include <doctest.h>

using namespace testsupport;

namespace {

SSet z_sset(std::vector<long> values) {
  Ring z = integers();
  SSet s{z, {}, true, true};
  for (long v : values) s.elements.push_back(mat(z, 1, 1, {v}));
  return s;
}

Matrix qmat(std::size_t r, std::size_t c, std::vector<mpq_class> v) {
  Ring q = rationals();
  Matrix m(q, r, c);
  for (std::size_t k = 0; k < v.size(); ++k) m(k / c, k % c) = Scalar::from_rational(q, v[k]);
  return m;
}

Matrix eval(const SSet& s, const LocTriple& t) { return evaluate_functor(s, t, fraction_map(s.ring)); }

void check_triple(const SSet& s, const LocTriple& t) {
  CHECK_NOTHROW(validate(s, t));
  CHECK(t.cert.assembled == t.s);
  CHECK(assemble(t.cert) == BoundedComplex::two_term(t.s, -1));
}

}  // namespace

TEST_SUITE("localization") {
  TEST_CASE("from_plain and invert_s") {
    SSet s = z_sset({2, 3});
    Ring z = s.ring;
    LocTriple f = from_plain(s, mat(z, 1, 1, {2}));
    CHECK(f.g == mat(z, 1, 1, {2}));
    CHECK(f.s.is_identity());
    CHECK(f.i.is_identity());
    check_triple(s, f);
    CHECK(eval(s, from_plain(s, Matrix::identity(z, 2))).is_identity());
    CHECK(eval(s, from_plain(s, Matrix::zero(z, 2, 3))).is_zero());

    LocTriple inv = invert_s(s, 0);
    check_triple(s, inv);
    CHECK(inv.s == mat(z, 1, 1, {2}));
    CHECK(eval(s, inv) == qmat(1, 1, {mpq_class(1, 2)}));
    CHECK(eval(s, triple_compose(s, inv, from_plain(s, s.elements[0]))).is_identity());
    CHECK(eval(s, triple_compose(s, from_plain(s, s.elements[0]), inv)).is_identity());
    SSet ids = z_sset({1});
    CHECK(eval(ids, invert_s(ids, 0)).is_identity());
  }

  TEST_CASE("validate rejects a bad certificate") {
    SSet s = z_sset({2, 3});
    LocTriple t = invert_s(s, 0);
    t.cert = singleton_cert(s, 1);
    CHECK_THROWS_AS(validate(s, t), DomainError);
  }

  TEST_CASE("arithmetic examples over Z with S = {2}") {
    SSet s = z_sset({2});
    LocTriple inv = invert_s(s, 0);
    CHECK(eval(s, triple_compose(s, inv, inv)) == qmat(1, 1, {mpq_class(1, 4)}));
    CHECK(eval(s, triple_add(s, inv, inv)).is_identity());
    LocTriple sum = triple_add(s, inv, inv);
    check_triple(s, sum);
    CHECK(sum.g == mat(s.ring, 1, 2, {1, 1}));
    CHECK(sum.s == mat(s.ring, 2, 2, {2, 0, 0, 2}));
    CHECK(sum.i == mat(s.ring, 2, 1, {1, 1}));
  }

  TEST_CASE("triple_compose block formula") {
    SSet s = z_sset({2, 3});
    Ring z = s.ring;
    LocTriple t1 = triple_compose(s, from_plain(s, mat(z, 1, 1, {5})), invert_s(s, 1));
    LocTriple t2 = invert_s(s, 0);
    LocTriple c = triple_compose(s, t1, t2);
    const std::size_t m2 = t2.mid_source(), m1 = t1.mid_source();
    CHECK(c.g == hcat({Matrix::zero(z, t1.target, m2), t1.g}));
    CHECK(c.s == block_matrix({{t2.s, Matrix::zero(z, t2.mid_target(), m1)}, {-(t1.i * t2.g), t1.s}}));
    CHECK(c.i == vcat({t2.i, Matrix::zero(z, t1.mid_target(), t2.source)}));
    check_triple(s, c);
  }

  TEST_CASE("plain maps compose and add as matrices") {
    for (Ring r : {integers(), rationals()}) {
      SSet s{r, {Matrix::identity(r, 1)}, true, true};
      for (int k = 0; k < 40; ++k) {
        Matrix f = random_matrix(r, 2, 3, 5), g = random_matrix(r, 3, 2, 5), h = random_matrix(r, 2, 3, 5);
        RingMap id = identity_map(r);
        CHECK(evaluate_functor(s, from_plain(s, f), id) == f);
        CHECK(evaluate_functor(s, triple_compose(s, from_plain(s, f), from_plain(s, g)), id) == f * g);
        CHECK(evaluate_functor(s, triple_add(s, from_plain(s, f), from_plain(s, h)), id) == f + h);
        CHECK(evaluate_functor(s, triple_dsum(s, from_plain(s, f), from_plain(s, g)), id) == dsum(f, g));
      }
    }
  }

  TEST_CASE("dsum with the zero triple") {
    SSet s = z_sset({2});
    LocTriple inv = invert_s(s, 0);
    LocTriple zero = from_plain(s, Matrix::zero(s.ring, 0, 0));
    CHECK(eval(s, triple_dsum(s, inv, zero)) == eval(s, inv));
    CHECK(eval(s, triple_dsum(s, zero, inv)) == eval(s, inv));
  }

  TEST_CASE("roofs") {
    SSet s = z_sset({2});
    Ring z = s.ring;
    Roof r = inverse_roof(s, 0);
    CHECK(evaluate_roof(s, r, fraction_map(z)) == qmat(1, 1, {mpq_class(1, 2)}));
    Roof rr = compose_roofs(s, r, r);
    CHECK(rr.apex().rank(1) == r.apex().rank(1) + r.apex().rank(1) + r.target);
    CHECK(evaluate_roof(s, rr, fraction_map(z)) == qmat(1, 1, {mpq_class(1, 4)}));
    LocTriple t = roof_to_triple(rr);
    check_triple(s, t);
    CHECK(eval(s, t) == qmat(1, 1, {mpq_class(1, 4)}));
    CHECK(t.cert.only_s_tags());

    Matrix f = mat(z, 2, 1, {3, -1});
    Roof plain = forward_roof(s, f);
    LocTriple mixed = roof_to_triple(compose_roofs(s, r, plain));
    check_triple(s, mixed);
    bool id_tag = false, s_tag = false;
    for (const auto& tag : mixed.cert.diagonal) (tag.kind == DiagTag::Kind::Identity ? id_tag : s_tag) = true;
    CHECK(id_tag);
    CHECK(s_tag);
    CHECK(eval(s, mixed) == qmat(2, 1, {mpq_class(3, 2), mpq_class(-1, 2)}));
    CHECK(evaluate_roof(s, plain, identity_map(z)) == f);
    CHECK(evaluate_functor(s, roof_to_triple(plain), identity_map(z)) == f);
    Roof both = compose_roofs(s, forward_roof(s, mat(z, 1, 1, {3})), forward_roof(s, mat(z, 1, 1, {5})));
    CHECK(evaluate_roof(s, both, identity_map(z)) == mat(z, 1, 1, {15}));
  }

  TEST_CASE("zig-zags") {
    SSet s = z_sset({2, 3});
    Ring z = s.ring;
    Matrix f = mat(z, 1, 1, {7});
    CHECK(eval(s, zigzag_normalize(s, {{ZigToken::Kind::Forward, f, 0}})) == apply_map(fraction_map(z), f));
    LocTriple fs = zigzag_normalize(s, {{ZigToken::Kind::Forward, f, 0}, {ZigToken::Kind::InverseOfS, {}, 1}});
    check_triple(s, fs);
    CHECK(eval(s, fs) == qmat(1, 1, {mpq_class(7, 3)}));
    CHECK_THROWS_AS(zigzag_normalize(s, {{ZigToken::Kind::Forward, mat(z, 1, 2, {1, 1}), 0},
                                         {ZigToken::Kind::InverseOfS, {}, 1}}),
                    DomainError);
    for (int k = 0; k < 40; ++k) {
      std::vector<ZigToken> word, back;
      for (long n = rand_int(1, 4); n > 0; --n) {
        const auto j = static_cast<std::size_t>(rand_int(0, 1));
        if (rand_int(0, 1)) {
          word.push_back({ZigToken::Kind::InverseOfS, {}, j});
          back.insert(back.begin(), {ZigToken::Kind::Forward, s.elements[j], 0});
        } else {
          word.push_back({ZigToken::Kind::Forward, s.elements[j], 0});
          back.insert(back.begin(), {ZigToken::Kind::InverseOfS, {}, j});
        }
      }
      word.insert(word.end(), back.begin(), back.end());
      LocTriple t = zigzag_normalize(s, word);
      check_triple(s, t);
      CHECK(eval(s, t).is_identity());
    }
  }

  TEST_CASE("evaluation is a functor on random triples over Z") {
    SSet s = z_sset({2, 3, 5});
    for (int k = 0; k < 60; ++k) {
      const auto a = static_cast<std::size_t>(rand_int(1, 2)), b = static_cast<std::size_t>(rand_int(1, 2)),
                 c = static_cast<std::size_t>(rand_int(1, 2));
      LocTriple x = random_triple(s, a, b, 2, 9), y = random_triple(s, c, a, 2, 9), x2 = random_triple(s, a, b, 2, 9);
      for (const LocTriple* t : {&x, &y, &x2}) {
        check_triple(s, *t);
        CHECK(to_q(eval(s, *t)) == *oracle_triple(*t));
      }
      CHECK(eval(s, triple_compose(s, x, y)) == eval(s, x) * eval(s, y));
      CHECK(eval(s, triple_add(s, x, x2)) == eval(s, x) + eval(s, x2));
      CHECK(eval(s, triple_dsum(s, x, y)) == dsum(eval(s, x), eval(s, y)));
    }
  }

  TEST_CASE("evaluation over Q[t] with S = {t}") {
    Ring p = polynomials();
    SSet s{p, {Matrix::scalar(Scalar::generator(p))}, true, true};
    for (int k = 0; k < 30; ++k) {
      LocTriple x = random_triple(s, 1, 2, 2, 5), y = random_triple(s, 2, 1, 2, 5);
      Matrix ex = eval(s, x), ey = eval(s, y);
      CHECK(ex.ring() == rational_functions());
      CHECK(eval(s, triple_compose(s, x, y)) == ex * ey);
      CHECK(eval(s, triple_compose(s, y, x)) == ey * ex);
      for (long at : {1L, -2L, 5L}) CHECK(to_q(ex, at) == *oracle_triple(x, at));
    }
  }

  TEST_CASE("non-invertible image is a precondition error") {
    SSet s = z_sset({2});
    CHECK_THROWS_AS(evaluate_functor(s, invert_s(s, 0), identity_map(s.ring)), PreconditionError);
  }
}
