#include "cohn/session.hpp"

#include <chrono>
#include <fstream>
#include <sstream>

namespace cohn {

using nlohmann::json;

namespace {

json jtriple(const Session& s, const LocTriple& t) {
  return {{"source", t.source}, {"target", t.target}, {"g", t.g.to_string()}, {"s", t.s.to_string()},
          {"i", t.i.to_string()}, {"cert", format_cert(s, t.cert)}};
}

std::string ttriple(const Session& s, const LocTriple& t) {
  return "g = " + t.g.to_string() + "\ns = " + t.s.to_string() + "\ni = " + t.i.to_string() +
         "\ncert = " + format_cert(s, t.cert) + "\n";
}

json jmap(const ChainMap& f) {
  json out = json::object();
  auto [lo, hi] = f.span();
  for (int n = lo; n <= hi; ++n) {
    Matrix m = f.at(n);
    if (m.rows() * m.cols() != 0) out[std::to_string(n)] = m.to_string();
  }
  return out;
}

json jhomotopy(const Homotopy& h) {
  json out = json::object();
  for (const auto& [n, m] : h.h)
    if (m.rows() * m.cols() != 0) out[std::to_string(n)] = m.to_string();
  return out;
}

std::string verdict_name(Verdict v) {
  switch (v) {
    case Verdict::True: return "true";
    case Verdict::False: return "false";
    case Verdict::Inapplicable: return "inapplicable";
  }
  return "?";
}

void need_args(const std::string& cmd, const std::vector<std::string>& args, std::size_t n, const char* usage) {
  if (args.size() != n) throw InputError(cmd + ": expected " + usage);
}

const BoundedComplex& complex_named(const Session& s, const std::string& name) {
  auto it = s.complexes.find(name);
  if (it == s.complexes.end()) throw InputError("unknown complex '" + name + "'");
  return it->second;
}

int parse_int(const std::string& text, const char* what) {
  try {
    std::size_t used = 0;
    int v = std::stoi(text, &used);
    if (used == text.size()) return v;
  } catch (const std::exception&) {
  }
  throw InputError(std::string("expected an integer for ") + what + ", got '" + text + "'");
}

/// Oracle value of t when the oracle applies.
std::optional<Matrix> oracle_value(const Session& s, const LocTriple& t) {
  if (!oracle_applicable(s.s)) return std::nullopt;
  return evaluate_functor(s.s, t, fraction_map(s.ring));
}

// A witness named in the session, or the single witness declared in a file.
std::pair<std::string, Witness> find_witness(const Session& s, const std::string& ref) {
  if (auto it = s.witnesses.find(ref); it != s.witnesses.end()) return *it;
  std::ifstream in(ref);
  if (!in) throw InputError("no witness named '" + ref + "' and no such file");
  std::stringstream buf;
  buf << in.rdbuf();
  Session ext = parse_session(buf.str(), &s);
  std::vector<std::string> fresh;
  for (const auto& [name, w] : ext.witnesses)
    if (!s.witnesses.count(name)) fresh.push_back(name);
  if (fresh.size() != 1) throw InputError(ref + ": expected exactly one witness declaration");
  return {fresh.front(), ext.witnesses.at(fresh.front())};
}

CheckResult check_witness(const Session& s, const Witness& w, const LocTriple& t1, const LocTriple& t2) {
  return w.kind == Witness::Kind::Factorization ? check_factorization(s.s, t1, t2, w.f)
                                                : check_malcolmson(s.s, t1, t2, w.m);
}

// Serialized witness, emitted only after it re-verifies.
json jwitness(const Session& s, const std::string& name, const Witness& w) {
  const LocTriple t1 = evaluate(s, w.lhs), t2 = evaluate(s, w.rhs);
  if (!check_witness(s, w, t1, t2)) throw PreconditionError("internal: witness " + name + " does not verify");
  return {{"name", name},
          {"kind", w.kind == Witness::Kind::Factorization ? "factorization" : "malcolmson"},
          {"verified", true},
          {"session_text", format_witness(s, name, w)}};
}

// The Malcolmson form of a verifying factorization witness, when the translation applies.
std::optional<Witness> translated(const Session& s, const Witness& w) {
  if (w.kind != Witness::Kind::Factorization) return std::nullopt;
  try {
    Witness m = w;
    m.kind = Witness::Kind::Malcolmson;
    m.m = malcolmson_from_factorization(s.s, evaluate(s, w.lhs), evaluate(s, w.rhs), w.f);
    return m;
  } catch (const PreconditionError&) {
    return std::nullopt;
  }
}

// ---------------------------------------------------------------- commands

void cmd_normalize(const Session& s, const std::vector<std::string>& args, Report& r) {
  need_args("normalize", args, 1, "one expression");
  ExprPtr e = parse_expr(s, args[0]);
  auto zz = as_zigzag(e);
  LocTriple t = zz ? zigzag_normalize(s.s, *zz) : evaluate(s, e);
  validate(s.s, t);
  r.json["result"] = {{"route", zz ? "zigzag" : "arithmetic"}, {"triple", jtriple(s, t)}};
  r.text = ttriple(s, t);
  if (auto v = oracle_value(s, t)) {
    r.json["result"]["value"] = v->to_string();
    r.text += "value = " + v->to_string() + "\n";
  }
}

void cmd_binary(const Session& s, const std::string& cmd, const std::vector<std::string>& args, Report& r) {
  need_args(cmd, args, 2, "two expressions");
  const LocTriple a = evaluate(s, parse_expr(s, args[0])), b = evaluate(s, parse_expr(s, args[1]));
  LocTriple t = cmd == "compose" ? triple_compose(s.s, a, b) : cmd == "add" ? triple_add(s.s, a, b) : triple_dsum(s.s, a, b);
  validate(s.s, t);
  r.json["result"] = {{"triple", jtriple(s, t)}};
  r.text = ttriple(s, t);
  if (auto v = oracle_value(s, t)) {
    const Matrix va = *oracle_value(s, a), vb = *oracle_value(s, b);
    const Matrix expect = cmd == "compose" ? va * vb : cmd == "add" ? va + vb : dsum(va, vb);
    r.json["result"]["value"] = v->to_string();
    r.json["result"]["value_matches_operands"] = *v == expect;
    r.text += "value = " + v->to_string() + "\n";
  }
}

void cmd_eq(const Session& s, const std::vector<std::string>& args, const CommandOptions& o, Report& r) {
  need_args("eq", args, 2, "two expressions");
  const ExprPtr e1 = parse_expr(s, args[0]), e2 = parse_expr(s, args[1]);
  const LocTriple t1 = evaluate(s, e1), t2 = evaluate(s, e2);
  r.json["inputs"]["mode"] = o.mode;
  json res;
  res["mode"] = o.mode;
  if (o.mode == "oracle") {
    const Verdict v = decide_equal_oracle(s.s, t1, t2);
    res["result"] = verdict_name(v);
    r.text = "oracle: " + verdict_name(v) + "\n";
    if (v == Verdict::False) r.exit_code = 1;
  } else if (o.mode == "witness") {
    if (o.mode_arg.empty()) throw InputError("eq --mode witness needs a witness name or file");
    r.json["inputs"]["witness"] = o.mode_arg;
    auto [name, w] = find_witness(s, o.mode_arg);
    const CheckResult c = check_witness(s, w, t1, t2);
    res["result"] = c.ok ? "true" : "false";
    res["witness"] = name;
    if (!c.ok) {
      res["failure"] = c.failure;
      r.exit_code = 1;
    }
    r.text = "witness " + name + ": " + (c.ok ? "verifies" : "fails (" + c.failure + ")") + "\n";
  } else if (o.mode == "search") {
    r.json["inputs"]["cap"] = o.cap;
    const SearchResult sr = search_equal(s.s, t1, t2, o.cap);
    res["shapes_tried"] = sr.shapes_tried;
    if (sr.status == SearchStatus::Unsupported) {
      res["result"] = "unsupported";
      r.text = "search: unsupported over " + s.ring->name() + "\n";
    } else if (sr.status == SearchStatus::NotFoundWithinCap) {
      res["result"] = "not-found-within-cap";
      r.text = "search: no witness within cap " + std::to_string(o.cap) + " (not a proof of inequality)\n";
    } else {
      Witness w;
      w.lhs_text = args[0];
      w.rhs_text = args[1];
      w.lhs = e1;
      w.rhs = e2;
      w.f = sr.witness;
      res["result"] = "true";
      res["witness"] = "found";
      r.json["witnesses"].push_back(jwitness(s, "found", w));
      r.text = "search: witness found\n" + format_witness(s, "found", w);
      if (auto m = translated(s, w)) {
        r.json["witnesses"].push_back(jwitness(s, "found_malcolmson", *m));
        r.text += format_witness(s, "found_malcolmson", *m);
      }
      if (oracle_applicable(s.s)) res["oracle"] = verdict_name(decide_equal_oracle(s.s, t1, t2));
    }
  } else {
    throw InputError("unknown eq mode '" + o.mode + "' (oracle, witness, search)");
  }
  r.json["result"] = res;
}

void cmd_check_witness(const Session& s, const std::vector<std::string>& args, Report& r) {
  need_args("check-witness", args, 1, "a witness name or file");
  auto [name, w] = find_witness(s, args[0]);
  const CheckResult c = check_witness(s, w, evaluate(s, w.lhs), evaluate(s, w.rhs));
  json res{{"witness", name},
           {"kind", w.kind == Witness::Kind::Factorization ? "factorization" : "malcolmson"},
           {"lhs", w.lhs_text},
           {"rhs", w.rhs_text},
           {"result", c.ok ? "true" : "false"}};
  r.text = "witness " + name + ": " + (c.ok ? "verifies" : "fails (" + c.failure + ")") + "\n";
  if (!c.ok) {
    res["failure"] = c.failure;
    r.exit_code = 1;
  } else {
    r.json["witnesses"].push_back(jwitness(s, name, w));
    if (auto m = translated(s, w)) {
      r.json["witnesses"].push_back(jwitness(s, name + "_malcolmson", *m));
      r.text += format_witness(s, name + "_malcolmson", *m);
    }
  }
  r.json["result"] = res;
}

void cmd_factor(const Session& s, const std::vector<std::string>& args, Report& r) {
  need_args("factor", args, 1, "a certificate name");
  auto it = s.certs.find(args[0]);
  if (it == s.certs.end()) throw InputError("unknown certificate '" + args[0] + "'");
  const TriangularCert& cert = it->second;
  const auto factors = factor_elementary(s.s, cert);
  const Matrix product = multiply_factors(factors, s.ring, cert.assembled.cols());
  bool ok = product == cert.assembled;
  json fs = json::array();
  std::ostringstream text;
  for (std::size_t k = 0; k < factors.size(); ++k) {
    const auto& f = factors[k];
    json jf{{"matrix", f.m.to_string()}};
    if (f.kind == ElementaryFactor::Kind::InS) {
      TriangularCert layout;
      layout.diagonal = f.layout;
      jf["kind"] = "in-S";
      jf["layout"] = format_cert(s, layout);
      ok = ok && check_ins_layout(s.s, f);
    } else {
      jf["kind"] = "invertible";
      jf["inverse"] = f.inverse.to_string();
      const Matrix one = Matrix::identity(s.ring, f.m.rows());
      ok = ok && f.m * f.inverse == one && f.inverse * f.m == one;
    }
    text << k + 1 << ". " << jf["kind"].get<std::string>() << " " << f.m.to_string() << "\n";
    fs.push_back(std::move(jf));
  }
  r.json["result"] = {{"factors", fs}, {"product", product.to_string()}, {"assembled", cert.assembled.to_string()},
                      {"verified", ok}};
  text << "product = " << product.to_string() << (ok ? " (verified)" : " (MISMATCH)") << "\n";
  r.text = text.str();
}

void cmd_cone(const Session& s, const std::vector<std::string>& args, Report& r) {
  need_args("cone", args, 1, "a matrix or complex name");
  ChainMap f;
  if (auto it = s.complexes.find(args[0]); it != s.complexes.end()) {
    f = ChainMap::identity(it->second);
  } else {
    ExprPtr e = parse_expr(s, args[0]);
    if (e->kind != Expr::Kind::Matrix) throw InputError("cone: '" + args[0] + "' is not a matrix or complex");
    const Matrix& m = e->value;
    f = ChainMap(BoundedComplex::one_term(s.ring, 0, m.cols()), BoundedComplex::one_term(s.ring, 0, m.rows()),
                 {{0, m}});
  }
  const ConeResult c = cone(f);
  const HomotopyResult h = is_null_homotopic(ChainMap::identity(c.cone));
  r.json["result"] = {{"cone", c.cone.to_string()},
                      {"iota", jmap(c.iota)},
                      {"pi", jmap(c.pi)},
                      {"contractible", h.status == HomotopyStatus::Found   ? "true"
                                       : h.status == HomotopyStatus::No ? "false"
                                                                        : "unsupported"}};
  if (h.status == HomotopyStatus::Found) r.json["result"]["contraction"] = jhomotopy(h.h);
  r.text = "cone = " + c.cone.to_string() + "\ncontractible: " + r.json["result"]["contractible"].get<std::string>() + "\n";
}

void cmd_wdecomp(const Session& s, const std::vector<std::string>& args, Report& r) {
  need_args("wdecomp", args, 2, "a complex name and a weight n");
  const BoundedComplex& m = complex_named(s, args[0]);
  const int n = parse_int(args[1], "the weight");
  const WeightDecomposition wd = weight_decompose(m, n);
  const bool ok = verify_weight_decomposition(m, wd);
  const Truncation& t = wd.t;
  r.json["result"] = {{"n", n},
                      {"x", t.x.to_string()},
                      {"y", t.y.to_string()},
                      {"incl", jmap(t.incl)},
                      {"proj", jmap(t.proj)},
                      {"connecting", t.connecting.to_string()},
                      {"cone", t.cone_incl.cone.to_string()},
                      {"to_cone", jmap(t.to_cone)},
                      {"from_cone", jmap(t.from_cone)},
                      {"cone_homotopy", jhomotopy(t.cone_homotopy)},
                      {"verified", ok}};
  r.text = "X (w<=" + std::to_string(n) + ") = " + t.x.to_string() + "\nY (w>=" + std::to_string(n + 1) +
           ") = " + t.y.to_string() + "\nverified: " + (ok ? "true" : "false") + "\n";
}

void cmd_wrange(const Session& s, const std::vector<std::string>& args, Report& r) {
  need_args("wrange", args, 1, "a complex name");
  const BoundedComplex& m = complex_named(s, args[0]);
  auto wr = weight_range(m);
  if (!wr) {
    r.json["result"] = {{"range", "unsupported"}};
    r.text = "weight range: unsupported over " + s.ring->name() + "\n";
    return;
  }
  if (wr->empty) {
    r.json["result"] = {{"range", "empty"}, {"claim", "w=[+inf,-inf]"}};
    r.text = "weight range: empty\n";
    return;
  }
  r.json["result"] = {{"range", {wr->lo, wr->hi}}, {"model", minimize(m)->model.to_string()}};
  r.text = "weight range: [" + std::to_string(wr->lo) + ", " + std::to_string(wr->hi) + "]\n";
}

void cmd_heart(const Session& s, const std::vector<std::string>& args, Report& r) {
  if (args.size() < 3) throw InputError("heart: expected source rank, target rank and at least one probe");
  const int x = parse_int(args[0], "the source rank"), y = parse_int(args[1], "the target rank");
  if (x < 0 || y < 0) throw InputError("heart: ranks must be non-negative");
  std::vector<std::vector<ZigToken>> probes;
  for (std::size_t k = 2; k < args.size(); ++k) {
    auto zz = as_zigzag(parse_expr(s, args[k]));
    if (!zz) throw InputError("heart: probe '" + args[k] + "' is not a zig-zag (a product of matrices and inverses)");
    probes.push_back(std::move(*zz));
  }
  const HeartReport h = heart_hom(s.s, static_cast<std::size_t>(x), static_cast<std::size_t>(y), probes);
  json classes = json::array();
  std::ostringstream text;
  for (std::size_t c = 0; c < h.representatives.size(); ++c) {
    json members = json::array();
    for (std::size_t k = 0; k < h.class_of.size(); ++k)
      if (h.class_of[k] == c) members.push_back(args[k + 2]);
    json jc{{"members", members}, {"representative", jtriple(s, h.normalized[h.representatives[c]])}};
    if (h.oracle_used) jc["value"] = evaluate_functor(s.s, h.normalized[h.representatives[c]], fraction_map(s.ring)).to_string();
    text << "class " << c << ": " << members.dump() << "\n";
    classes.push_back(std::move(jc));
  }
  r.json["result"] = {{"classes", classes}, {"oracle_used", h.oracle_used}};
  r.text = text.str();
}

void cmd_negativity(const Session& s, const std::vector<std::string>& args, const CommandOptions& o, Report& r) {
  if (args.empty()) throw InputError("negativity: expected complex names");
  std::vector<BoundedComplex> objs;
  for (const auto& a : args) objs.push_back(complex_named(s, a));
  r.json["inputs"]["shifts"] = o.shifts;
  const NegativityReport rep = negativity_check(objs, o.shifts);
  if (!rep.supported) {
    r.json["result"] = {{"negative", "unsupported"}};
    r.text = "negativity: unsupported over " + s.ring->name() + "\n";
    return;
  }
  json entries = json::array();
  std::ostringstream text;
  for (const auto& e : rep.entries) {
    json je{{"p", args[e.p]}, {"q", args[e.q]}, {"shift", e.shift}, {"chain_maps", e.chain_maps}, {"violated", e.violated}};
    if (e.witness) je["witness"] = jmap(*e.witness);
    if (e.violated) text << "violation: " << args[e.p] << " -> " << args[e.q] << "[" << e.shift << "]\n";
    entries.push_back(std::move(je));
  }
  r.json["result"] = {{"entries", entries}, {"negative", rep.negative()}};
  text << "negative: " << (rep.negative() ? "true" : "false") << "\n";
  r.text = text.str();
}

}  // namespace

Report run_command(const Session& s, const std::string& command, const std::vector<std::string>& args,
                   const CommandOptions& opts) {
  const auto start = std::chrono::steady_clock::now();
  Report r;
  r.json["command"] = command;
  r.json["inputs"] = {{"args", args}};
  r.json["witnesses"] = json::array();
  if (command == "normalize") cmd_normalize(s, args, r);
  else if (command == "compose" || command == "add" || command == "dsum") cmd_binary(s, command, args, r);
  else if (command == "eq") cmd_eq(s, args, opts, r);
  else if (command == "check-witness") cmd_check_witness(s, args, r);
  else if (command == "factor") cmd_factor(s, args, r);
  else if (command == "cone") cmd_cone(s, args, r);
  else if (command == "wdecomp") cmd_wdecomp(s, args, r);
  else if (command == "wrange") cmd_wrange(s, args, r);
  else if (command == "heart") cmd_heart(s, args, r);
  else if (command == "negativity") cmd_negativity(s, args, opts, r);
  else throw InputError("unknown command '" + command + "'");
  const std::chrono::duration<double, std::milli> ms = std::chrono::steady_clock::now() - start;
  r.json["timing"] = ms.count();
  return r;
}

}  // namespace cohn
