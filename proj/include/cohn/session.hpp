#pragma once

// Session files and the command layer behind the `cohn` tool.
//
//   ring Z | Q | Q[t] | Q<x,y>
//   s s0 = [[2]]
//   mat f = [[1, 1], [0, 1]]          (also zero(r,c), id(n))
//   cx C = {(-1,1),(0,1)} d(-1) = [[2]]
//   cert K = [s0, id(1)] f(1,2) = [[5]]
//   let h = inv(s0) + inv(s0)
//   witness W factorization: inv(s0) + inv(s0) == id(1)
//     k1 = []
//     k2 = [s0]
//     ...
//   end
//
// Expressions: names, inv(sname), id(n), dsum(a, b), a * b (a after b),
// a + b, a - b, -a, parentheses.

#include "cohn/weights.hpp"

#include <json.hpp>

#include <memory>
#include <set>
#include <stdexcept>

namespace cohn {

/// Bad input: unknown names, malformed syntax, usage errors.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SessionError : InputError {
  SessionError(std::size_t line, std::size_t column, const std::string& msg);
  std::size_t line, column;
};

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  enum class Kind { Matrix, Inverse, Compose, Add, Sub, Neg, DSum };
  Kind kind;
  std::string name;  // Matrix: the name or literal it came from; Inverse: the S name
  cohn::Matrix value;
  std::size_t s_index = 0;
  ExprPtr a, b;
};

struct Witness {
  enum class Kind { Factorization, Malcolmson };
  Kind kind = Kind::Factorization;
  std::string lhs_text, rhs_text;
  ExprPtr lhs, rhs;
  FactorizationWitness f;
  MalcolmsonWitness m;
};

struct Session {
  Ring ring = integers();
  SSet s{integers(), {}};
  std::vector<std::string> s_names;
  std::map<std::string, Matrix> matrices;
  std::map<std::string, BoundedComplex> complexes;
  std::map<std::string, TriangularCert> certs;
  std::map<std::string, ExprPtr> lets;
  std::map<std::string, Witness> witnesses;
  std::set<std::string> names;
};

/// Parses a whole session. With `base`, declarations extend a copy of it
/// (the ring line is then optional and must agree).
Session parse_session(const std::string& text, const Session* base = nullptr);

ExprPtr parse_expr(const Session& s, const std::string& text);
LocTriple evaluate(const Session& s, const ExprPtr& e);
/// Tokens when the expression is a plain product of matrices and inverses.
std::optional<std::vector<ZigToken>> as_zigzag(const ExprPtr& e);

/// Cert in session syntax, e.g. "[s0, id(1)] f(1,2) = [[5]]".
std::string format_cert(const Session& s, const TriangularCert& c);
/// A complete `witness ... end` block.
std::string format_witness(const Session& s, const std::string& name, const Witness& w);

struct CommandOptions {
  std::string mode = "oracle";
  std::string mode_arg;  // witness name or file for --mode witness
  std::size_t cap = 4;
  std::vector<int> shifts{1};
};

struct Report {
  std::string text;
  nlohmann::json json;  // command, inputs, result, witnesses, timing
  int exit_code = 0;
};

inline const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"normalize", "compose", "add",    "dsum",  "eq",         "factor",
                                              "cone",      "wdecomp", "wrange", "heart", "negativity", "check-witness"};
  return names;
}

/// Runs one command. Throws InputError, DomainError or PreconditionError on bad input.
Report run_command(const Session& s, const std::string& command, const std::vector<std::string>& args,
                   const CommandOptions& opts = {});

}  // namespace cohn
