#include "support.hpp"

#include "cohn/session.hpp"

#include <doctest.h>

#include <fstream>
#include <sstream>

using namespace testsupport;

namespace {

SSet single(Ring r, long v) { return {r, {mat(r, 1, 1, {v})}, true, true}; }

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Hand-built witness for from_plain(f) against itself: E = A ⊕ A, P and Q
// identities, v = (id; -id), u = (f, f).
MalcolmsonWitness padded_identity_witness(const SSet& s, const Matrix& f) {
  Ring r = f.ring();
  const std::size_t a = f.cols(), ap = f.rows();
  MalcolmsonWitness w;
  w.e = 2 * a;
  w.l = Matrix::zero(r, 0, 0);
  w.m = Matrix::zero(r, 0, 0);
  w.m_cert = identity_cert(s, 0);
  w.q = Matrix::identity(r, 2 * a);
  w.p = Matrix::identity(r, 2 * a);
  w.p_cert = identity_cert(s, 2 * a);
  w.u = hcat({f, f});
  w.v = vcat({Matrix::identity(r, a), -Matrix::identity(r, a)});
  w.x = Matrix::zero(r, ap, 0);
  w.y = Matrix::zero(r, 0, a);
  return w;
}

Matrix* malcolmson_block(MalcolmsonWitness& w, int k) {
  Matrix* blocks[] = {&w.l, &w.m, &w.q, &w.p, &w.u, &w.v, &w.x, &w.y};
  return blocks[k];
}

Matrix* factorization_block(FactorizationWitness& w, int k) {
  Matrix* blocks[] = {&w.k1, &w.k2, &w.p, &w.g, &w.alpha10, &w.alpha11, &w.alpha2};
  return blocks[k];
}

bool perturb_entry(Matrix& m) {
  if (m.rows() == 0 || m.cols() == 0) return false;
  const auto i = static_cast<std::size_t>(rand_int(0, static_cast<long>(m.rows()) - 1));
  const auto j = static_cast<std::size_t>(rand_int(0, static_cast<long>(m.cols()) - 1));
  Scalar d = random_scalar(m.ring(), 5);
  while (d.is_zero()) d = random_scalar(m.ring(), 5);
  m(i, j) += d;
  return true;
}

}  // namespace

TEST_SUITE("equality") {
  TEST_CASE("witness_r and witness_x") {
    SSet s = single(integers(), 2);
    LocTriple t1 = invert_s(s, 0), t2 = from_plain(s, mat(s.ring, 1, 1, {3}));
    CHECK(witness_r(t1, t2) == mat(s.ring, 2, 3, {1, 2, 0, 1, 0, 1}));
    CHECK(witness_x(t1, t2) == mat(s.ring, 1, 3, {0, 1, -3}));
  }

  TEST_CASE("padded identity Malcolmson witness") {
    for (Ring r : {integers(), rationals()}) {
      SSet s = single(r, 2);
      Matrix f = random_matrix(r, 2, 1, 5);
      LocTriple t = from_plain(s, f);
      MalcolmsonWitness w = padded_identity_witness(s, f);
      CHECK(check_malcolmson(s, t, t, w));
      Matrix g = f;
      g(0, 0) += Scalar::one(r);
      CHECK_FALSE(check_malcolmson(s, t, from_plain(s, g), w));
      w.u(0, 1) += Scalar::one(r);
      auto bad = check_malcolmson(s, t, t, w);
      CHECK_FALSE(bad);
      CHECK(bad.failure == "block identity fails at row A', column C'2");
    }
  }

  TEST_CASE("tautological factorization witness") {
    SSet s = single(rationals(), 2);
    LocTriple t = triple_compose(s, from_plain(s, mat(s.ring, 1, 1, {3})), invert_s(s, 0));
    auto w = tautological_witness(s, t, t);
    REQUIRE(w);
    CHECK(check_factorization(s, t, t, *w));
    MalcolmsonWitness m = malcolmson_from_factorization(s, t, t, *w);
    CHECK(check_malcolmson(s, t, t, m));
    FactorizationWitness bad = *w;
    bad.alpha2(0, 0) += Scalar::one(s.ring);
    auto res = check_factorization(s, t, t, bad);
    CHECK_FALSE(res);
    CHECK(res.failure == "alpha2 * alpha1^0 != (0, g1, -g2)");
    CHECK_THROWS_AS(malcolmson_from_factorization(s, t, t, bad), PreconditionError);

    Ring f = free_algebra({"x", "y"});
    SSet fs = single(f, 1);
    LocTriple plain = from_plain(fs, Matrix::scalar(parse_scalar(f, "x*y")));
    auto fw = tautological_witness(fs, plain, plain);
    REQUIRE(fw);
    CHECK(check_factorization(fs, plain, plain, *fw));
  }

  TEST_CASE("golden witness for 1/2 + 1/2 = 1") {
    const std::string session_text = "ring Z\ns s0 = [[2]]\n";
    cohn::Session base = parse_session(session_text);
    cohn::Session ses = parse_session(read_file(std::string(COHN_TEST_DATA) + "/half_plus_half.witness"), &base);
    const cohn::Witness& w = ses.witnesses.at("half");
    LocTriple lhs = evaluate(ses, w.lhs), rhs = evaluate(ses, w.rhs);
    CHECK(check_factorization(ses.s, lhs, rhs, w.f));
    CHECK(check_malcolmson(ses.s, lhs, rhs, malcolmson_from_factorization(ses.s, lhs, rhs, w.f)));
    CHECK(decide_equal_oracle(ses.s, lhs, rhs) == Verdict::True);

    auto found = search_equal(ses.s, lhs, rhs, 4);
    REQUIRE(found.status == SearchStatus::Found);
    CHECK(check_factorization(ses.s, lhs, rhs, found.witness));
    CHECK(found.witness.alpha10 == w.f.alpha10);
    CHECK(found.witness.alpha11 == w.f.alpha11);
    CHECK(found.witness.alpha2 == w.f.alpha2);
    CHECK(found.witness.k2 == w.f.k2);
  }

  TEST_CASE("oracle examples") {
    SSet z2 = single(integers(), 2);
    LocTriple inv = invert_s(z2, 0), one = from_plain(z2, Matrix::identity(z2.ring, 1));
    CHECK(oracle_applicable(z2));
    CHECK(decide_equal_oracle(z2, triple_add(z2, inv, inv), one) == Verdict::True);
    CHECK(decide_equal_oracle(z2, inv, one) == Verdict::False);
    CHECK(decide_equal_oracle(z2, one, one) == Verdict::True);
    CHECK(decide_equal_oracle(z2, triple_compose(z2, inv, from_plain(z2, z2.elements[0])), one) == Verdict::True);
    SSet fs = single(free_algebra({"x", "y"}), 1);
    LocTriple fx = from_plain(fs, Matrix::scalar(Scalar::generator(fs.ring, 0)));
    CHECK_FALSE(oracle_applicable(fs));
    CHECK(decide_equal_oracle(fs, fx, fx) == Verdict::Inapplicable);
    CHECK(search_equal(fs, fx, fx, 2).status == SearchStatus::Unsupported);
  }

  TEST_CASE("search over Q") {
    SSet s = single(rationals(), 2);
    LocTriple inv = invert_s(s, 0), one = from_plain(s, Matrix::identity(s.ring, 1));
    auto found = search_equal(s, triple_add(s, inv, inv), one, 4);
    REQUIRE(found.status == SearchStatus::Found);
    CHECK(check_factorization(s, triple_add(s, inv, inv), one, found.witness));
    auto self = search_equal(s, inv, inv, 1);
    CHECK(self.status == SearchStatus::Found);
    auto miss = search_equal(s, inv, one, 4);
    CHECK(miss.status == SearchStatus::NotFoundWithinCap);
    CHECK(decide_equal_oracle(s, inv, one) == Verdict::False);
  }

  TEST_CASE("search results agree with the oracle") {
    SSet s{integers(), {mat(integers(), 1, 1, {2}), mat(integers(), 1, 1, {3})}, true, true};
    LocTriple a = invert_s(s, 0), b = invert_s(s, 1);
    LocTriple ab = triple_compose(s, a, b), ba = triple_compose(s, b, a);
    const std::vector<std::pair<LocTriple, LocTriple>> pairs = {
        {ab, ba}, {a, a}, {triple_add(s, a, b), triple_add(s, b, a)}, {a, b}};
    for (const auto& [x, y] : pairs) {
      auto r = search_equal(s, x, y, 2);
      if (r.status == SearchStatus::Found) {
        CHECK(check_factorization(s, x, y, r.witness));
        CHECK(decide_equal_oracle(s, x, y) == Verdict::True);
      }
    }
    CHECK(decide_equal_oracle(s, a, b) == Verdict::False);
  }

  TEST_CASE("random witnesses translate and verify") {
    for (int k = 0; k < 25; ++k) {
      FactorizationCase fc = random_factorization_case();
      REQUIRE(check_factorization(fc.s, fc.t1, fc.t2, fc.w));
      CHECK(decide_equal_oracle(fc.s, fc.t1, fc.t2) == Verdict::True);
      MalcolmsonWitness m = malcolmson_from_factorization(fc.s, fc.t1, fc.t2, fc.w);
      CHECK(check_malcolmson(fc.s, fc.t1, fc.t2, m));
    }
  }

  TEST_CASE("single-block tampering is detected") {
    int malcolmson_trials = 0, factorization_trials = 0;
    while (malcolmson_trials < 100 || factorization_trials < 100) {
      FactorizationCase fc = random_factorization_case();
      const MalcolmsonWitness m = malcolmson_from_factorization(fc.s, fc.t1, fc.t2, fc.w);
      for (int k = 0; k < 4; ++k) {
        MalcolmsonWitness bad = m;
        if (!perturb_entry(*malcolmson_block(bad, static_cast<int>(rand_int(0, 7))))) continue;
        ++malcolmson_trials;
        CHECK_FALSE(check_malcolmson(fc.s, fc.t1, fc.t2, bad));
      }
      for (int k = 0; k < 4; ++k) {
        FactorizationWitness bad = fc.w;
        const int which = static_cast<int>(rand_int(0, 6));
        if (!perturb_entry(*factorization_block(bad, which))) continue;
        ++factorization_trials;
        CHECK_FALSE(check_factorization(fc.s, fc.t1, fc.t2, bad));
      }
    }
  }

  TEST_CASE("witnesses imply oracle equality over Z") {
    SSet s{integers(), {mat(integers(), 1, 1, {2}), mat(integers(), 1, 1, {3})}, true, true};
    for (int k = 0; k < 40; ++k) {
      LocTriple t = random_triple(s, 1, 1, 2, 4);
      LocTriple u = triple_compose(s, t, from_plain(s, Matrix::identity(s.ring, 1)));
      if (auto w = tautological_witness(s, t, u)) {
        CHECK(check_factorization(s, t, u, *w));
        CHECK(decide_equal_oracle(s, t, u) == Verdict::True);
      }
      LocTriple v = triple_add(s, t, from_plain(s, Matrix::identity(s.ring, 1)));
      CHECK(decide_equal_oracle(s, t, v) == Verdict::False);
      CHECK_FALSE(tautological_witness(s, t, v));
    }
  }
}
