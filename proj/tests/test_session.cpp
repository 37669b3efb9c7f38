#include "support.hpp"

#include "cohn/session.hpp"

#include <doctest.h>

using namespace testsupport;

namespace {

const char* kHalf = R"(# Z with S = {[2]}
ring Z
s s0 = [[2]]
mat two = [[2]]
let h = inv(s0) + inv(s0)
)";

cohn::SessionError session_error(const std::string& text) {
  try {
    parse_session(text);
  } catch (const cohn::SessionError& e) {
    return e;
  }
  FAIL("expected a session error");
  return cohn::SessionError(0, 0, "");
}

}  // namespace

TEST_SUITE("session") {
  TEST_CASE("empty session") {
    cohn::Session s = parse_session("");
    CHECK(s.ring == integers());
    CHECK(s.s.elements.empty());
    CHECK(s.matrices.empty());
    CHECK(parse_session("# only a comment\n\n").names.empty());
  }

  TEST_CASE("declarations") {
    cohn::Session s = parse_session(kHalf);
    CHECK(s.s_names == std::vector<std::string>{"s0"});
    CHECK(s.matrices.at("two") == mat(integers(), 1, 1, {2}));
    auto zig = as_zigzag(parse_expr(s, "two * inv(s0)"));
    REQUIRE(zig);
    CHECK(zig->size() == 2);
    CHECK((*zig)[1].kind == ZigToken::Kind::InverseOfS);
    const cohn::ExprPtr h = s.lets.at("h");
    CHECK(h->kind == cohn::Expr::Kind::Add);
    CHECK(h->a->kind == cohn::Expr::Kind::Inverse);
    CHECK_FALSE(as_zigzag(h));
    CHECK(decide_equal_oracle(s.s, evaluate(s, h), evaluate(s, parse_expr(s, "id(1)"))) == Verdict::True);

    cohn::Session q = parse_session("ring Q[t]\ns st = [[t]]\nmat p = [[t^2 - 1, 1/2]]\n");
    CHECK(q.ring == polynomials());
    CHECK(q.matrices.at("p")(0, 1) == parse_scalar(q.ring, "1/2"));
    cohn::Session c = parse_session("ring Q\ncx C = {(-1,2),(0,2)} d(-1) = [[1, 0], [0, 0]]\n");
    CHECK(c.complexes.at("C") == BoundedComplex::two_term(mat(rationals(), 2, 2, {1, 0, 0, 0}), -1));
  }

  TEST_CASE("diagnostics are anchored") {
    auto d2 = session_error("ring Z\ncx C = {(0,1),(1,1),(2,1)} d(0) = [[1]] d(1) = [[1]]\n");
    CHECK(d2.line == 2);
    CHECK(std::string(d2.what()).find("d(1) * d(0) != 0") != std::string::npos);
    auto syntax = session_error("ring Z\nmat f = [[1,2]\n");
    CHECK(syntax.line == 2);
    CHECK(syntax.column == 15);
    auto dup = session_error("ring Z\nmat f = [[1]]\nmat f = [[2]]\n");
    CHECK(dup.line == 3);
    CHECK(std::string(dup.what()).find("already declared") != std::string::npos);
    CHECK(session_error("ring Z\nmat f = [[1/2]]\n").line == 2);
    CHECK(session_error("ring Z\nmat f = [[1, 2], [3]]\n").line == 2);
    CHECK(session_error("ring Q<x,y>\ns a = [[x]]\nlet e = inv(a) * [[1], [1]]\n").line == 3);
    cohn::Session s = parse_session(kHalf);
    CHECK_THROWS_AS(parse_expr(s, "inv(two)"), cohn::SessionError);
    CHECK_THROWS_AS(parse_expr(s, "nope"), cohn::SessionError);
  }

  TEST_CASE("commands") {
    cohn::Session s = parse_session(kHalf);
    auto norm = run_command(s, "normalize", {"inv(s0)*s0"});
    CHECK(norm.exit_code == 0);
    CHECK(norm.json.at("command") == "normalize");
    for (const char* key : {"command", "inputs", "result", "witnesses", "timing"}) CHECK(norm.json.contains(key));

    CHECK(run_command(s, "eq", {"inv(s0)*s0", "id(1)"}).exit_code == 0);
    CHECK(run_command(s, "eq", {"inv(s0)", "id(1)"}).exit_code == 1);
    cohn::CommandOptions search;
    search.mode = "search";
    auto found = run_command(s, "eq", {"h", "id(1)"}, search);
    CHECK(found.exit_code == 0);
    CHECK_FALSE(found.json.at("witnesses").empty());
    CHECK_THROWS(run_command(s, "eq", {"h"}));
    CHECK_THROWS(run_command(s, "frobnicate", {}));
  }

  TEST_CASE("witness round trip through the session format") {
    cohn::Session s = parse_session(kHalf);
    cohn::LocTriple lhs = evaluate(s, s.lets.at("h")), rhs = evaluate(s, parse_expr(s, "id(1)"));
    auto found = search_equal(s.s, lhs, rhs, 4);
    REQUIRE(found.status == SearchStatus::Found);
    cohn::Witness w;
    w.lhs_text = "inv(s0) + inv(s0)";
    w.rhs_text = "id(1)";
    w.f = found.witness;
    const std::string text = format_witness(s, "w", w);
    cohn::Session back = parse_session(text, &s);
    const cohn::Witness& parsed = back.witnesses.at("w");
    CHECK(parsed.f.alpha10 == w.f.alpha10);
    CHECK(parsed.f.alpha11 == w.f.alpha11);
    CHECK(parsed.f.k2 == w.f.k2);
    CHECK(check_factorization(back.s, evaluate(back, parsed.lhs), evaluate(back, parsed.rhs), parsed.f));
  }

  TEST_CASE("certificates in session syntax") {
    cohn::Session s = parse_session("ring Z\ns a = [[2]]\ns b = [[3]]\ncert K = [a, b, id(1)] f(1,2) = [[5]] f(1,3) = [[1]]\n");
    const TriangularCert& k = s.certs.at("K");
    CHECK(k.assembled == mat(integers(), 3, 3, {2, 0, 0, 5, 3, 0, 1, 0, 1}));
    CHECK(parse_session("cert L = " + format_cert(s, k) + "\n", &s).certs.at("L").assembled == k.assembled);
  }
}
