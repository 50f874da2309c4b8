#include <algorithm>
#include <cctype>
#include <map>
#include <set>

#include "gradcalc/dsl.hpp"

namespace gradcalc {

namespace {

enum class Tok { ident, integer, dbasis, punct, newline, end };

struct Token {
  Tok kind;
  std::string text;
  SourcePos pos;
  std::size_t begin = 0;  // byte offsets in the normalized source
  std::size_t end = 0;
};

[[noreturn]] void fail(const char* code, std::string msg, SourcePos pos) {
  throw ScriptError(Diagnostic{code, std::move(msg), pos});
}

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

std::vector<Token> lex(const std::string& s) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto push = [&](Tok k, std::size_t b, std::size_t e, SourcePos p, std::string text) {
    out.push_back(Token{k, std::move(text), p, b, e});
  };
  while (i < s.size()) {
    char c = s[i];
    SourcePos p{line, col};
    if (c == '\n') {
      push(Tok::newline, i, i + 1, p, "\n");
      ++i, ++line, col = 1;
      continue;
    }
    if (c == ' ' || c == '\t' || c == '\r') {
      ++i, ++col;
      continue;
    }
    if (c == '#') {
      while (i < s.size() && s[i] != '\n') ++i;
      continue;
    }
    std::size_t b = i;
    if (std::isdigit(static_cast<unsigned char>(c))) {
      while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
      if (i < s.size() && ident_start(s[i])) fail("E_LEX", "malformed number", p);
      push(Tok::integer, b, i, p, s.substr(b, i - b));
    } else if (ident_start(c)) {
      while (i < s.size() && ident_char(s[i])) ++i;
      std::string word = s.substr(b, i - b);
      if (word == "d" && i + 2 < s.size() && s[i] == '/' && s[i + 1] == 'd' && ident_start(s[i + 2])) {
        i += 2;
        std::size_t nb = i;
        while (i < s.size() && ident_char(s[i])) ++i;
        push(Tok::dbasis, b, i, p, s.substr(nb, i - nb));
      } else {
        push(Tok::ident, b, i, p, std::move(word));
      }
    } else if (c == '^' && i + 1 < s.size() && s[i + 1] == '^') {
      i += 2;
      push(Tok::punct, b, i, p, "^^");
    } else if (std::string_view("{}(),:=+-*/^;").find(c) != std::string_view::npos) {
      ++i;
      push(Tok::punct, b, i, p, std::string(1, c));
    } else {
      fail("E_LEX", std::string("unexpected character '") + c + "'", p);
    }
    col += static_cast<int>(i - b);
  }
  push(Tok::end, s.size(), s.size(), SourcePos{line, col}, "");
  return out;
}

struct Signature {
  std::size_t min_args;
  std::size_t max_args;  // SIZE_MAX for variadic
  std::set<std::string> options;
  std::set<std::string> required;
  bool point = false;
  bool alias = false;
  std::set<std::string> kinds;  // allowed first argument, if any
};

const std::map<std::string, Signature>& signatures() {
  static const std::map<std::string, Signature> table{
      {"lift", {1, 1, {"lambda", "r"}, {"lambda", "r"}, false, true, {}}},
      {"bracket", {3, 3, {}, {}, false, true, {"lie", "schouten", "fn", "nr"}}},
      {"d", {1, 1, {}, {}, false, true, {}}},
      {"liederiv", {2, 2, {}, {}, false, true, {}}},
      {"interior", {2, 2, {}, {}, false, true, {}}},
      {"degree", {1, 1, {"component"}, {}, false, false, {}}},
      {"check",
       {2,
        SIZE_MAX,
        {"k", "component"},
        {},
        false,
        false,
        {"poisson", "weighted", "weighted-poisson", "nijenhuis", "weighted-nijenhuis", "almost-complex",
         "almost-product", "almost-tangent", "pn", "weighted-distribution", "involutive", "contact", "identity",
         "equal"}}},
      {"prolong", {1, 1, {"r"}, {"r"}, false, true, {}}},
      {"lift-connection", {1, 1, {"r"}, {"r"}, false, true, {}}},
      {"covderiv", {3, 3, {}, {}, false, true, {}}},
      {"eval", {1, 1, {}, {}, true, true, {}}},
      {"oracle", {2, 5, {"lambda", "r"}, {}, false, false, {"taylor", "schouten", "koszul", "torsion"}}},
      {"sharp", {1, 1, {}, {}, false, false, {}}},
      {"flat", {1, 1, {}, {}, false, false, {}}},
      {"torsion", {1, 1, {}, {}, false, true, {}}},
      {"concomitant", {2, 2, {}, {}, false, true, {}}},
      {"compose", {2, 2, {}, {}, false, true, {}}},
      {"show", {1, 1, {}, {}, false, false, {}}},
  };
  return table;
}

class Parser {
 public:
  Parser(const std::string& src, std::vector<Token> toks) : src_(src), t_(std::move(toks)) {}

  Script script() {
    Script s;
    for (;;) {
      while (peek().kind == Tok::newline || is(";")) ++i_;
      if (peek().kind == Tok::end) break;
      s.statements.push_back(statement());
    }
    return s;
  }

  Expr expression_only() {
    Expr e = sum();
    if (peek().kind != Tok::end) fail("E_SYNTAX", "unexpected '" + peek().text + "' after expression", peek().pos);
    return e;
  }

 private:
  const Token& peek(std::size_t k = 0) const { return t_[std::min(i_ + k, t_.size() - 1)]; }
  bool is(std::string_view p, std::size_t k = 0) const {
    return peek(k).kind == Tok::punct && peek(k).text == p;
  }
  bool is_word(std::string_view w) const { return peek().kind == Tok::ident && peek().text == w; }
  const Token& next() { return t_[i_ < t_.size() - 1 ? i_++ : i_]; }

  [[noreturn]] void expected(const std::string& what) const {
    const auto& t = peek();
    std::string got = t.kind == Tok::end ? "end of input" : t.kind == Tok::newline ? "end of line" : "'" + t.text + "'";
    fail("E_SYNTAX", "expected " + what + ", got " + got, t.pos);
  }
  void expect(std::string_view p) {
    if (!is(p)) expected("'" + std::string(p) + "'");
    ++i_;
  }
  std::string ident(const std::string& what) {
    if (peek().kind != Tok::ident) expected(what);
    return next().text;
  }
  void expect_word(std::string_view w) {
    if (!is_word(w)) expected("'" + std::string(w) + "'");
    ++i_;
  }
  long integer() {
    bool neg = false;
    if (is("-")) {
      neg = true;
      ++i_;
    }
    if (peek().kind != Tok::integer) expected("an integer");
    const auto& t = next();
    long v;
    try {
      v = std::stol(t.text);
    } catch (const std::exception&) {
      fail("E_SYNTAX", "integer out of range", t.pos);
    }
    return neg ? -v : v;
  }
  Rational rational() {
    bool neg = false;
    if (is("-")) {
      neg = true;
      ++i_;
    }
    if (peek().kind != Tok::integer) expected("a number");
    Rational v(next().text);
    if (is("/")) {
      ++i_;
      if (peek().kind != Tok::integer) expected("a denominator");
      const auto& t = next();
      Rational d(t.text);
      if (d == 0) fail("E_SYNTAX", "zero denominator", t.pos);
      v /= d;
    }
    return neg ? Rational(-v) : v;
  }
  // words like lift-connection: identifiers glued by '-' without spaces
  std::string word() {
    std::string w = ident("a word");
    while (is("-") && peek().begin == t_[i_ - 1].end && peek(1).kind == Tok::ident && peek(1).begin == peek().end) {
      ++i_;
      w += "-" + next().text;
    }
    return w;
  }
  void end_statement() {
    if (peek().kind == Tok::newline || is(";") || peek().kind == Tok::end) return;
    expected("end of statement");
  }

  Statement statement() {
    Statement st;
    const Token& first = peek();
    st.pos = first.pos;
    std::size_t begin = first.begin;
    if (is_word("chart")) {
      st.kind = Statement::Kind::chart;
      st.chart = chart();
    } else if (is_word("fn") || is_word("vf") || is_word("form") || is_word("tensor")) {
      st.kind = Statement::Kind::tensor;
      st.tensor = tensor_decl();
    } else if (is_word("connection")) {
      st.kind = Statement::Kind::connection;
      st.connection = connection();
    } else {
      st.kind = Statement::Kind::command;
      st.command = command();
    }
    end_statement();
    std::size_t end = t_[i_ - 1].end;
    st.text = src_.substr(begin, end - begin);
    // collapse line breaks inside braces
    std::replace(st.text.begin(), st.text.end(), '\n', ' ');
    return st;
  }

  void skip_newlines() {
    while (peek().kind == Tok::newline) ++i_;
  }

  ChartDecl chart() {
    ChartDecl c;
    expect_word("chart");
    c.name = ident("a chart name");
    expect("{");
    skip_newlines();
    while (!is("}")) {
      auto pos = peek().pos;
      std::string v = ident("a variable name");
      expect(":");
      std::vector<int> w{static_cast<int>(integer())};
      while (is(",") && (peek(1).kind == Tok::integer || (peek(1).text == "-" && peek(2).kind == Tok::integer))) {
        ++i_;
        w.push_back(static_cast<int>(integer()));
      }
      for (const auto& [n, ws] : c.vars)
        if (n == v) fail("E_SYNTAX", "variable " + v + " declared twice", pos);
      c.vars.emplace_back(v, std::move(w));
      skip_newlines();
      if (is(",")) {
        ++i_;
        skip_newlines();
      } else if (!is("}")) {
        expected("',' or '}'");
      }
    }
    expect("}");
    if (c.vars.empty()) expected("at least one variable");
    if (is_word("vb")) {
      ++i_;
      expect("=");
      c.vb = static_cast<int>(integer());
    }
    return c;
  }

  TensorDecl tensor_decl() {
    TensorDecl d;
    d.kind = next().text;
    if (d.kind == "tensor") {
      expect("(");
      d.q = static_cast<int>(integer());
      expect(",");
      d.p = static_cast<int>(integer());
      expect(")");
      if (d.q < 0 || d.p < 0) fail("E_SYNTAX", "negative valence", t_[i_ - 1].pos);
      if (is_word("antisym")) {
        ++i_;
        d.symmetry = Symmetry::antisymmetric;
      } else if (is_word("sym")) {
        ++i_;
        d.symmetry = Symmetry::symmetric;
      }
    }
    d.name = ident("a name");
    expect_word("on");
    d.chart = ident("a chart name");
    expect("=");
    d.value = sum();
    return d;
  }

  ConnectionDecl connection() {
    ConnectionDecl c;
    expect_word("connection");
    c.name = ident("a connection name");
    expect_word("on");
    c.chart = ident("a chart name");
    expect("{");
    skip_newlines();
    while (!is("}")) {
      ConnectionDecl::Entry e;
      e.pos = peek().pos;
      e.upper = ident("an upper index");
      e.lower1 = ident("a lower index");
      e.lower2 = ident("a lower index");
      expect(":");
      e.value = sum();
      c.entries.push_back(std::move(e));
      skip_newlines();
      if (is(",")) {
        ++i_;
        skip_newlines();
      } else if (!is("}")) {
        expected("',' or '}'");
      }
    }
    expect("}");
    return c;
  }

  Command command() {
    Command c;
    auto pos = peek().pos;
    if (peek().kind != Tok::ident) expected("a statement");
    c.verb = word();
    auto it = signatures().find(c.verb);
    if (it == signatures().end()) fail("E_SYNTAX", "unknown command '" + c.verb + "'", pos);
    const auto& sig = it->second;
    while (peek().kind != Tok::newline && peek().kind != Tok::end && !is(";")) {
      auto apos = peek().pos;
      if (is_word("at") && is("(", 1)) {
        if (!sig.point || c.has_point) fail("E_SYNTAX", "unexpected point", apos);
        i_ += 2;
        c.has_point = true;
        while (!is(")")) {
          std::string v = ident("a variable name");
          expect("=");
          c.point.emplace_back(v, rational());
          if (is(","))
            ++i_;
          else if (!is(")"))
            expected("',' or ')'");
        }
        ++i_;
      } else if (is_word("as")) {
        if (!sig.alias || c.alias) fail("E_SYNTAX", "'as' is not allowed here", apos);
        ++i_;
        c.alias = ident("a name");
      } else if (peek().kind == Tok::ident && is("=", 1)) {
        std::string k = next().text;
        ++i_;
        if (!sig.options.count(k)) fail("E_SYNTAX", "unknown option '" + k + "' for " + c.verb, apos);
        if (std::any_of(c.options.begin(), c.options.end(), [&](const auto& o) { return o.first == k; }))
          fail("E_SYNTAX", "option '" + k + "' given twice", apos);
        c.options.emplace_back(k, integer());
      } else if (peek().kind == Tok::ident) {
        c.args.push_back(word());
      } else {
        expected("an argument");
      }
    }
    if (c.args.size() < sig.min_args || c.args.size() > sig.max_args)
      fail("E_SYNTAX", c.verb + ": wrong number of arguments", pos);
    if (!sig.kinds.empty() && !sig.kinds.count(c.args[0]))
      fail("E_SYNTAX", c.verb + ": unknown kind '" + c.args[0] + "'", pos);
    for (const auto& r : sig.required)
      if (std::none_of(c.options.begin(), c.options.end(), [&](const auto& o) { return o.first == r; }))
        fail("E_SYNTAX", c.verb + ": missing " + r + "=", pos);
    if (sig.point && !c.has_point) fail("E_SYNTAX", c.verb + ": missing 'at (...)'", pos);
    return c;
  }

  // + -  <  ox  <  ^^  <  * /  <  unary -  <  ^
  Expr sum() {
    Expr e = ox();
    while (is("+") || is("-")) {
      auto pos = peek().pos;
      Expr::Kind k = next().text == "+" ? Expr::Kind::add : Expr::Kind::sub;
      e = binary(k, std::move(e), ox(), pos);
    }
    return e;
  }
  Expr ox() {
    Expr e = wedge();
    while (is_word("ox")) {
      auto pos = next().pos;
      e = binary(Expr::Kind::tensor, std::move(e), wedge(), pos);
    }
    return e;
  }
  Expr wedge() {
    Expr e = product();
    while (is("^^")) {
      auto pos = next().pos;
      e = binary(Expr::Kind::wedge, std::move(e), product(), pos);
    }
    return e;
  }
  Expr product() {
    Expr e = unary();
    while (is("*") || is("/")) {
      auto pos = peek().pos;
      Expr::Kind k = next().text == "*" ? Expr::Kind::mul : Expr::Kind::div;
      e = binary(k, std::move(e), unary(), pos);
    }
    return e;
  }
  Expr unary() {
    if (is("-")) {
      Expr e;
      e.kind = Expr::Kind::neg;
      e.pos = next().pos;
      e.args.push_back(unary());
      return e;
    }
    return power();
  }
  Expr power() {
    Expr e = atom();
    if (is("^")) {
      auto pos = next().pos;
      if (peek().kind != Tok::integer) expected("an exponent");
      Expr n;
      n.kind = Expr::Kind::number;
      n.pos = peek().pos;
      n.value = Rational(next().text);
      e = binary(Expr::Kind::pow, std::move(e), std::move(n), pos);
    }
    return e;
  }
  Expr atom() {
    Expr e;
    e.pos = peek().pos;
    const auto& t = peek();
    if (t.kind == Tok::integer) {
      e.kind = Expr::Kind::number;
      e.value = Rational(next().text);
    } else if (t.kind == Tok::dbasis) {
      e.kind = Expr::Kind::vector_basis;
      e.name = next().text;
    } else if (t.kind == Tok::ident && t.text != "ox") {
      e.kind = Expr::Kind::ident;
      e.name = next().text;
    } else if (is("(")) {
      ++i_;
      e = sum();
      expect(")");
    } else {
      expected("an expression");
    }
    return e;
  }
  static Expr binary(Expr::Kind k, Expr a, Expr b, SourcePos pos) {
    Expr e;
    e.kind = k;
    e.pos = pos;
    e.args.push_back(std::move(a));
    e.args.push_back(std::move(b));
    return e;
  }

  const std::string& src_;
  std::vector<Token> t_;
  std::size_t i_ = 0;
};

}  // namespace

std::string normalize_unicode(std::string_view in) {
  static const std::vector<std::pair<std::string_view, std::string_view>> table{
      {"∂/∂", "d/d"}, {"⊗", " ox "}, {"∧", " ^^ "}, {"·", "*"},  {"⋅", "*"},
      {"−", "-"},          {"λ", "lambda"}, {"×", "*"},
  };
  static const std::string_view subs[] = {"₀", "₁", "₂", "₃", "₄",
                                          "₅", "₆", "₇", "₈", "₉"};
  std::string out;
  out.reserve(in.size());
  bool in_sub = false;
  std::size_t i = 0;
  while (i < in.size()) {
    bool hit = false;
    for (int d = 0; d < 10 && !hit; ++d)
      if (in.substr(i, subs[d].size()) == subs[d]) {
        if (!in_sub) out += '_';
        out += static_cast<char>('0' + d);
        i += subs[d].size();
        in_sub = hit = true;
      }
    if (hit) continue;
    in_sub = false;
    for (const auto& [from, to] : table)
      if (in.substr(i, from.size()) == from) {
        out += to;
        i += from.size();
        hit = true;
        break;
      }
    if (!hit) out += in[i++];
  }
  return out;
}

Script parse_script(std::string_view text) {
  std::string src = normalize_unicode(text);
  Parser p(src, lex(src));
  return p.script();
}

Expr parse_expression(std::string_view text) {
  std::string src = normalize_unicode(text);
  Parser p(src, lex(src));
  return p.expression_only();
}

}  // namespace gradcalc
