#include "cohn/session.hpp"

#include <cctype>
#include <sstream>

namespace cohn {

SessionError::SessionError(std::size_t line, std::size_t column, const std::string& msg)
    : InputError(line ? "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + msg
                      : "column " + std::to_string(column) + ": " + msg),
      line(line),
      column(column) {}

namespace {

const std::set<std::string> kReserved{"inv", "id", "dsum", "zero", "end", "ring", "s", "mat", "cx", "cert", "let", "witness"};

class Cursor {
 public:
  Cursor(std::string_view text, std::size_t line) : text_(text), line_(line) {}

  void ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool eof() {
    ws();
    return pos_ >= text_.size();
  }
  char peek() {
    ws();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }
  bool accept(char c) {
    if (peek() != c) return false;
    ++pos_;
    return true;
  }
  bool accept(std::string_view s) {
    ws();
    if (text_.substr(pos_, s.size()) != s) return false;
    pos_ += s.size();
    return true;
  }
  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }
  bool at_ident() {
    const char c = peek();
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
  }
  std::string ident() {
    if (!at_ident()) fail("expected a name");
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_' || text_[pos_] == '\''))
      ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }
  /// An identifier followed by '(' without consuming anything otherwise.
  bool accept_call(std::string_view name) {
    const std::size_t save = pos_;
    if (at_ident() && ident() == name && accept('(')) return true;
    pos_ = save;
    return false;
  }
  long integer() {
    ws();
    const std::size_t start = pos_;
    if (pos_ < text_.size() && (text_[pos_] == '-' || text_[pos_] == '+')) ++pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    const std::string s(text_.substr(start, pos_ - start));
    if (s.empty() || s == "-" || s == "+") {
      pos_ = start;
      fail("expected an integer");
    }
    return std::stol(s);
  }
  std::size_t natural() {
    const std::size_t at = pos_;
    long v = integer();
    if (v < 0) {
      pos_ = at;
      fail("expected a non-negative integer");
    }
    return static_cast<std::size_t>(v);
  }
  /// Text up to the first top-level character in `stops`.
  std::string until(std::string_view stops) {
    ws();
    const std::size_t start = pos_;
    int depth = 0;
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (depth == 0 && stops.find(c) != std::string_view::npos) break;
      if (c == '(') ++depth;
      if (c == ')') --depth;
      ++pos_;
    }
    std::string s(text_.substr(start, pos_ - start));
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
    return s;
  }
  std::size_t pos() const { return pos_; }
  void seek(std::size_t p) { pos_ = p; }
  std::size_t column() const { return pos_ + 1; }
  std::size_t line() const { return line_; }

  [[noreturn]] void fail(const std::string& msg) const { throw SessionError(line_, pos_ + 1, msg); }
  [[noreturn]] void fail_at(std::size_t p, const std::string& msg) const { throw SessionError(line_, p + 1, msg); }

 private:
  std::string_view text_;
  std::size_t line_;
  std::size_t pos_ = 0;
};

Ring parse_ring(Cursor& c) {
  const std::size_t at = c.pos();
  if (c.accept('Z')) return integers();
  if (!c.accept('Q')) c.fail("unknown ring; expected Z, Q, Q[t] or Q<x,y>");
  if (c.accept('[')) {
    std::string v = c.ident();
    c.expect(']');
    return polynomials(v);
  }
  if (c.accept('<')) {
    std::vector<std::string> gens{c.ident()};
    while (c.accept(',')) gens.push_back(c.ident());
    c.expect('>');
    try {
      return free_algebra(gens);
    } catch (const DomainError& e) {
      c.fail_at(at, e.what());
    }
  }
  return rationals();
}

std::size_t s_index(const Session& s, const std::string& name) {
  for (std::size_t k = 0; k < s.s_names.size(); ++k)
    if (s.s_names[k] == name) return k;
  return s.s_names.size();
}

Matrix parse_matrix(Cursor& c, const Session& s) {
  const std::size_t at = c.pos();
  if (c.accept_call("zero")) {
    std::size_t r = c.natural();
    c.expect(',');
    std::size_t k = c.natural();
    c.expect(')');
    return Matrix::zero(s.ring, r, k);
  }
  if (c.accept_call("id")) {
    std::size_t n = c.natural();
    c.expect(')');
    return Matrix::identity(s.ring, n);
  }
  if (c.at_ident()) {
    std::string name = c.ident();
    if (auto it = s.matrices.find(name); it != s.matrices.end()) return it->second;
    if (auto k = s_index(s, name); k < s.s_names.size()) return s.s.elements[k];
    if (auto it = s.certs.find(name); it != s.certs.end()) return it->second.assembled;
    c.fail_at(at, "unknown matrix '" + name + "'");
  }
  c.expect('[');
  if (c.peek() != '[') c.fail("expected '[' to start a row (use zero(r,c) for empty matrices)");
  std::vector<std::vector<Scalar>> rows;
  do {
    c.expect('[');
    std::vector<Scalar> row;
    do {
      const std::size_t ep = c.pos();
      std::string entry = c.until(",]");
      if (entry.empty()) c.fail("expected a matrix entry");
      try {
        row.push_back(parse_scalar(s.ring, entry));
      } catch (const std::exception& e) {
        c.fail_at(ep, "bad entry '" + entry + "': " + e.what());
      }
    } while (c.accept(','));
    c.expect(']');
    if (!rows.empty() && row.size() != rows.front().size())
      c.fail("row " + std::to_string(rows.size() + 1) + " has " + std::to_string(row.size()) + " entries, expected " +
             std::to_string(rows.front().size()));
    rows.push_back(std::move(row));
  } while (c.accept(','));
  c.expect(']');
  Matrix m(s.ring, rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
  return m;
}

TriangularCert parse_cert(Cursor& c, const Session& s) {
  const std::size_t at = c.pos();
  if (c.at_ident()) {
    std::string name = c.ident();
    if (auto it = s.certs.find(name); it != s.certs.end()) return it->second;
    c.fail_at(at, "unknown certificate '" + name + "'");
  }
  c.expect('[');
  std::vector<DiagTag> diag;
  if (!c.accept(']')) {
    do {
      const std::size_t tp = c.pos();
      if (c.accept_call("id")) {
        std::size_t n = c.natural();
        c.expect(')');
        diag.push_back(DiagTag::identity(n));
        continue;
      }
      std::string name = c.ident();
      std::size_t k = s_index(s, name);
      if (k == s.s_names.size()) c.fail_at(tp, "'" + name + "' is not an element of S");
      diag.push_back(DiagTag::element(k));
    } while (c.accept(','));
    c.expect(']');
  }
  std::map<std::pair<std::size_t, std::size_t>, Matrix> below;
  while (!c.eof() && c.accept_call("f")) {
    const std::size_t bp = c.pos();
    std::size_t k = c.natural();
    c.expect(',');
    std::size_t l = c.natural();
    c.expect(')');
    c.expect('=');
    if (k == 0 || l == 0 || k >= l || l > diag.size())
      c.fail_at(bp, "f(k,l) needs 1 <= k < l <= " + std::to_string(diag.size()));
    below[{k - 1, l - 1}] = parse_matrix(c, s);
  }
  try {
    return make_cert(s.s, std::move(diag), std::move(below));
  } catch (const DomainError& e) {
    c.fail_at(at, e.what());
  }
}

BoundedComplex parse_complex(Cursor& c, const Session& s, const std::string& name) {
  const std::size_t at = c.pos();
  c.expect('{');
  std::map<int, std::size_t> ranks;
  if (!c.accept('}')) {
    do {
      c.expect('(');
      int deg = static_cast<int>(c.integer());
      c.expect(',');
      std::size_t r = c.natural();
      c.expect(')');
      if (ranks.count(deg)) c.fail("degree " + std::to_string(deg) + " listed twice");
      ranks[deg] = r;
    } while (c.accept(','));
    c.expect('}');
  }
  std::map<int, Matrix> diffs;
  while (!c.eof()) {
    const std::size_t dp = c.pos();
    if (!c.accept_call("d")) c.fail("expected d(n) = ...");
    int n = static_cast<int>(c.integer());
    c.expect(')');
    c.expect('=');
    if (diffs.count(n)) c.fail_at(dp, "d(" + std::to_string(n) + ") given twice");
    diffs.emplace(n, parse_matrix(c, s));
  }
  if (ranks.empty()) {
    if (!diffs.empty()) c.fail_at(at, "complex " + name + " has differentials but no terms");
    return BoundedComplex::zero(s.ring);
  }
  const int lo = ranks.begin()->first, hi = ranks.rbegin()->first;
  auto rank = [&](int n) { return ranks.count(n) ? ranks.at(n) : std::size_t{0}; };
  std::vector<std::size_t> rs;
  std::vector<Matrix> ds;
  for (int n = lo; n <= hi; ++n) rs.push_back(rank(n));
  for (const auto& [n, m] : diffs)
    if (n < lo || n >= hi) {
      if (m.rows() * m.cols() != 0 && !m.is_zero())
        c.fail_at(at, "complex " + name + ": d(" + std::to_string(n) + ") leaves the listed degrees");
    }
  for (int n = lo; n < hi; ++n) {
    auto it = diffs.find(n);
    ds.push_back(it != diffs.end() ? it->second : Matrix::zero(s.ring, rank(n + 1), rank(n)));
  }
  try {
    return BoundedComplex(s.ring, lo, std::move(rs), std::move(ds));
  } catch (const DomainError& e) {
    c.fail_at(at, "complex " + name + ": " + e.what());
  }
}

ExprPtr make(Expr::Kind k, ExprPtr a, ExprPtr b = nullptr) {
  auto e = std::make_shared<Expr>();
  e->kind = k;
  e->a = std::move(a);
  e->b = std::move(b);
  return e;
}

ExprPtr leaf(std::string name, Matrix m) {
  auto e = std::make_shared<Expr>();
  e->kind = Expr::Kind::Matrix;
  e->name = std::move(name);
  e->value = std::move(m);
  return e;
}

class ExprParser {
 public:
  ExprParser(Cursor& c, const Session& s) : c_(c), s_(s) {}

  ExprPtr expr() {
    ExprPtr e = term();
    while (true) {
      if (c_.accept('+')) e = make(Expr::Kind::Add, e, term());
      else if (c_.accept('-')) e = make(Expr::Kind::Sub, e, term());
      else return e;
    }
  }

 private:
  ExprPtr term() {
    ExprPtr e = unary();
    while (c_.accept('*')) e = make(Expr::Kind::Compose, e, unary());
    return e;
  }
  ExprPtr unary() {
    if (c_.accept('-')) return make(Expr::Kind::Neg, unary());
    return primary();
  }
  ExprPtr primary() {
    const std::size_t at = c_.pos();
    if (c_.accept('(')) {
      ExprPtr e = expr();
      c_.expect(')');
      return e;
    }
    if (c_.peek() == '[') return leaf("literal", parse_matrix(c_, s_));
    if (c_.accept_call("inv")) {
      const std::size_t np = c_.pos();
      std::string name = c_.ident();
      c_.expect(')');
      std::size_t k = s_index(s_, name);
      if (k == s_.s_names.size()) c_.fail_at(np, "inv() needs an element of S, got '" + name + "'");
      auto e = std::make_shared<Expr>();
      e->kind = Expr::Kind::Inverse;
      e->name = name;
      e->s_index = k;
      return e;
    }
    if (c_.accept_call("dsum")) {
      ExprPtr a = expr();
      c_.expect(',');
      ExprPtr b = expr();
      c_.expect(')');
      return make(Expr::Kind::DSum, a, b);
    }
    if (c_.accept_call("id")) {
      std::size_t n = c_.natural();
      c_.expect(')');
      return leaf("id(" + std::to_string(n) + ")", Matrix::identity(s_.ring, n));
    }
    if (c_.accept_call("zero")) {
      c_.seek(at);
      return leaf("literal", parse_matrix(c_, s_));
    }
    if (!c_.at_ident()) c_.fail("expected an expression");
    std::string name = c_.ident();
    if (auto it = s_.lets.find(name); it != s_.lets.end()) return it->second;
    if (auto it = s_.matrices.find(name); it != s_.matrices.end()) return leaf(name, it->second);
    if (auto k = s_index(s_, name); k < s_.s_names.size()) return leaf(name, s_.s.elements[k]);
    c_.fail_at(at, "unknown name '" + name + "'");
  }

  Cursor& c_;
  const Session& s_;
};

void declare(Session& s, Cursor& c, std::size_t at, const std::string& name) {
  if (kReserved.count(name)) c.fail_at(at, "'" + name + "' is reserved");
  if (!s.names.insert(name).second) c.fail_at(at, "name '" + name + "' is already declared");
}

struct Line {
  std::size_t number;
  std::string text;
};

void parse_witness(Session& s, Cursor& head, const std::string& name, const std::vector<Line>& lines,
                   std::size_t& idx) {
  const std::size_t kp = head.pos();
  std::string kind = head.ident();
  Witness w;
  if (kind == "factorization") w.kind = Witness::Kind::Factorization;
  else if (kind == "malcolmson") w.kind = Witness::Kind::Malcolmson;
  else head.fail_at(kp, "witness kind must be factorization or malcolmson");
  head.expect(':');
  const std::size_t lp = head.pos();
  w.lhs_text = head.until("=");
  if (!head.accept("==")) head.fail("expected '==' between the two morphisms");
  const std::size_t rp = head.pos();
  w.rhs_text = head.until("");
  {
    Cursor l(w.lhs_text, head.line());
    w.lhs = ExprParser(l, s).expr();
    if (!l.eof()) head.fail_at(lp + l.pos(), "unexpected text in expression");
    Cursor r(w.rhs_text, head.line());
    w.rhs = ExprParser(r, s).expr();
    if (!r.eof()) head.fail_at(rp + r.pos(), "unexpected text in expression");
  }
  LocTriple t1, t2;
  try {
    t1 = evaluate(s, w.lhs);
    t2 = evaluate(s, w.rhs);
  } catch (const std::exception& e) {
    head.fail_at(lp, e.what());
  }
  if (t1.source != t2.source || t1.target != t2.target) head.fail_at(lp, "the two sides have different endpoints");

  std::map<std::string, Matrix> mats;
  std::map<std::string, TriangularCert> certs;
  const std::set<std::string> cert_keys =
      w.kind == Witness::Kind::Factorization ? std::set<std::string>{"k1", "k2"} : std::set<std::string>{"m", "p"};
  const std::set<std::string> mat_keys = w.kind == Witness::Kind::Factorization
                                             ? std::set<std::string>{"p", "g", "alpha10", "alpha11", "alpha2"}
                                             : std::set<std::string>{"l", "q", "u", "v", "x", "y"};
  const std::size_t start_line = head.line();
  bool closed = false;
  while (++idx < lines.size()) {
    Cursor c(lines[idx].text, lines[idx].number);
    if (c.eof()) continue;
    const std::size_t fp = c.pos();
    std::string key = c.ident();
    if (key == "end" && c.eof()) {
      closed = true;
      break;
    }
    c.expect('=');
    if (cert_keys.count(key)) {
      if (certs.count(key)) c.fail_at(fp, "field '" + key + "' given twice");
      certs.emplace(key, parse_cert(c, s));
    } else if (mat_keys.count(key)) {
      if (mats.count(key)) c.fail_at(fp, "field '" + key + "' given twice");
      mats.emplace(key, parse_matrix(c, s));
    } else {
      c.fail_at(fp, "unknown " + kind + " witness field '" + key + "'");
    }
    if (!c.eof()) c.fail("unexpected text after the value");
  }
  if (!closed) throw SessionError(start_line, 1, "witness " + name + " is missing 'end'");
  for (const auto& k : cert_keys)
    if (!certs.count(k)) throw SessionError(start_line, 1, "witness " + name + " lacks field '" + k + "'");
  for (const auto& k : mat_keys)
    if (!mats.count(k)) throw SessionError(start_line, 1, "witness " + name + " lacks field '" + k + "'");

  if (w.kind == Witness::Kind::Factorization) {
    FactorizationWitness& f = w.f;
    f.k1_cert = certs.at("k1");
    f.k2_cert = certs.at("k2");
    f.k1 = f.k1_cert.assembled;
    f.k2 = f.k2_cert.assembled;
    f.z = f.k1.cols();
    f.t1 = f.k1.rows();
    f.t2 = f.k2.cols();
    f.z_prime = f.k2.rows();
    f.p = mats.at("p");
    f.g = mats.at("g");
    f.alpha10 = mats.at("alpha10");
    f.alpha11 = mats.at("alpha11");
    f.alpha2 = mats.at("alpha2");
  } else {
    MalcolmsonWitness& m = w.m;
    m.m_cert = certs.at("m");
    m.p_cert = certs.at("p");
    m.m = m.m_cert.assembled;
    m.p = m.p_cert.assembled;
    m.l = mats.at("l");
    m.q = mats.at("q");
    m.u = mats.at("u");
    m.v = mats.at("v");
    m.x = mats.at("x");
    m.y = mats.at("y");
    m.e1 = m.l.cols();
    m.r1 = m.l.rows();
    m.e2 = m.m.cols();
    m.r2 = m.m.rows();
    m.e = m.q.rows();
  }
  s.witnesses.emplace(name, std::move(w));
}

}  // namespace

Session parse_session(const std::string& text, const Session* base) {
  Session s = base ? *base : Session{};
  std::vector<Line> lines;
  {
    std::istringstream in(text);
    std::string l;
    std::size_t n = 0;
    while (std::getline(in, l)) {
      ++n;
      if (auto h = l.find('#'); h != std::string::npos) l.erase(h);
      lines.push_back({n, l});
    }
  }
  bool declared_anything = base != nullptr;
  for (std::size_t idx = 0; idx < lines.size(); ++idx) {
    Cursor c(lines[idx].text, lines[idx].number);
    if (c.eof()) continue;
    const std::size_t kp = c.pos();
    std::string kw = c.ident();
    if (kw == "ring") {
      Ring r = parse_ring(c);
      if (declared_anything && r != s.ring)
        c.fail_at(kp, "ring must be declared before anything else");
      s.ring = r;
      s.s.ring = r;
    } else if (kw == "s" || kw == "mat" || kw == "cx" || kw == "cert" || kw == "let" || kw == "witness") {
      const std::size_t np = c.pos();
      std::string name = c.ident();
      declare(s, c, np, name);
      if (kw == "witness") {
        parse_witness(s, c, name, lines, idx);
        declared_anything = true;
        continue;
      }
      c.expect('=');
      if (kw == "s") {
        Matrix m = parse_matrix(c, s);
        s.s_names.push_back(name);
        s.s.elements.push_back(std::move(m));
      } else if (kw == "mat") {
        s.matrices.emplace(name, parse_matrix(c, s));
      } else if (kw == "cx") {
        s.complexes.emplace(name, parse_complex(c, s, name));
      } else if (kw == "cert") {
        s.certs.emplace(name, parse_cert(c, s));
      } else {
        const std::size_t ep = c.pos();
        ExprPtr e = ExprParser(c, s).expr();
        try {
          (void)evaluate(s, e);
        } catch (const std::exception& ex) {
          c.fail_at(ep, ex.what());
        }
        s.lets.emplace(name, e);
      }
    } else {
      c.fail_at(kp, "unknown declaration '" + kw + "'");
    }
    if (!c.eof()) c.fail("unexpected text");
    declared_anything = true;
  }
  return s;
}

ExprPtr parse_expr(const Session& s, const std::string& text) {
  Cursor c(text, 0);
  ExprPtr e = ExprParser(c, s).expr();
  if (!c.eof()) c.fail("unexpected text in expression");
  return e;
}

LocTriple evaluate(const Session& s, const ExprPtr& e) {
  switch (e->kind) {
    case Expr::Kind::Matrix: return from_plain(s.s, e->value);
    case Expr::Kind::Inverse: return invert_s(s.s, e->s_index);
    case Expr::Kind::Compose: return triple_compose(s.s, evaluate(s, e->a), evaluate(s, e->b));
    case Expr::Kind::Add: return triple_add(s.s, evaluate(s, e->a), evaluate(s, e->b));
    case Expr::Kind::Sub: {
      LocTriple b = evaluate(s, e->b);
      b.g = -b.g;
      return triple_add(s.s, evaluate(s, e->a), b);
    }
    case Expr::Kind::Neg: {
      LocTriple a = evaluate(s, e->a);
      a.g = -a.g;
      return a;
    }
    case Expr::Kind::DSum: return triple_dsum(s.s, evaluate(s, e->a), evaluate(s, e->b));
  }
  throw DomainError("bad expression");
}

std::optional<std::vector<ZigToken>> as_zigzag(const ExprPtr& e) {
  switch (e->kind) {
    case Expr::Kind::Matrix: return std::vector<ZigToken>{{ZigToken::Kind::Forward, e->value, 0}};
    case Expr::Kind::Inverse: return std::vector<ZigToken>{{ZigToken::Kind::InverseOfS, {}, e->s_index}};
    case Expr::Kind::Compose: {
      auto a = as_zigzag(e->a), b = as_zigzag(e->b);
      if (!a || !b) return std::nullopt;
      a->insert(a->end(), b->begin(), b->end());
      return a;
    }
    default: return std::nullopt;
  }
}

std::string format_cert(const Session& s, const TriangularCert& c) {
  std::string out = "[";
  for (std::size_t k = 0; k < c.diagonal.size(); ++k) {
    if (k) out += ", ";
    const auto& t = c.diagonal[k];
    out += t.kind == DiagTag::Kind::ElementOfS ? s.s_names.at(t.value) : "id(" + std::to_string(t.value) + ")";
  }
  out += "]";
  for (const auto& [key, m] : c.below)
    out += " f(" + std::to_string(key.first + 1) + "," + std::to_string(key.second + 1) + ") = " + m.to_string();
  return out;
}

std::string format_witness(const Session& s, const std::string& name, const Witness& w) {
  std::ostringstream os;
  const bool fact = w.kind == Witness::Kind::Factorization;
  os << "witness " << name << (fact ? " factorization: " : " malcolmson: ") << w.lhs_text << " == " << w.rhs_text
     << "\n";
  if (fact) {
    const auto& f = w.f;
    os << "  k1 = " << format_cert(s, f.k1_cert) << "\n"
       << "  k2 = " << format_cert(s, f.k2_cert) << "\n"
       << "  p = " << f.p.to_string() << "\n"
       << "  g = " << f.g.to_string() << "\n"
       << "  alpha10 = " << f.alpha10.to_string() << "\n"
       << "  alpha11 = " << f.alpha11.to_string() << "\n"
       << "  alpha2 = " << f.alpha2.to_string() << "\n";
  } else {
    const auto& m = w.m;
    os << "  l = " << m.l.to_string() << "\n"
       << "  m = " << format_cert(s, m.m_cert) << "\n"
       << "  q = " << m.q.to_string() << "\n"
       << "  p = " << format_cert(s, m.p_cert) << "\n"
       << "  u = " << m.u.to_string() << "\n"
       << "  v = " << m.v.to_string() << "\n"
       << "  x = " << m.x.to_string() << "\n"
       << "  y = " << m.y.to_string() << "\n";
  }
  os << "end\n";
  return os.str();
}

}  // namespace cohn
