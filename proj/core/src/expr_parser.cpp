#include <cctype>
#include <string>
#include <vector>

#include "chern/chartexpr.hpp"

namespace chern {

namespace {

struct Lexer {
  const std::string& s;
  std::size_t pos = 0;

  void skip_ws() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }
  char peek() {
    skip_ws();
    return pos < s.size() ? s[pos] : '\0';
  }
  char get() {
    skip_ws();
    return pos < s.size() ? s[pos++] : '\0';
  }
  bool eat(char c) {
    if (peek() == c) {
      ++pos;
      return true;
    }
    return false;
  }
  std::string ident() {
    skip_ws();
    std::size_t start = pos;
    while (pos < s.size() && (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_')) ++pos;
    return s.substr(start, pos - start);
  }
  BigInt integer() {
    skip_ws();
    std::size_t start = pos;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
    if (pos == start) throw ParseError("expected integer", int(pos));
    return BigInt(s.substr(start, pos - start));
  }
};

struct Parser {
  Lexer lex;
  const std::vector<std::string>& vars;
  int n;

  Parser(const std::string& text, const std::vector<std::string>& names)
      : lex{text}, vars(names), n(int(names.size())) {}

  ChartExpr parse() {
    ChartExpr e = expr();
    lex.skip_ws();
    if (lex.pos != lex.s.size()) throw ParseError("trailing input", int(lex.pos));
    return e;
  }

  ChartExpr expr() {
    ChartExpr acc = term();
    for (;;) {
      char c = lex.peek();
      if (c == '+') {
        lex.get();
        acc = acc + term();
      } else if (c == '-') {
        lex.get();
        acc = acc - term();
      } else {
        return acc;
      }
    }
  }

  ChartExpr term() {
    ChartExpr acc = factor();
    for (;;) {
      char c = lex.peek();
      if (c == '*') {
        lex.get();
        acc = acc * factor();
      } else if (c == '/') {
        lex.get();
        acc = acc / factor();
      } else {
        return acc;
      }
    }
  }

  ChartExpr factor() {
    char c = lex.peek();
    if (c == '-') {
      lex.get();
      return -factor();
    }
    if (c == '+') {
      lex.get();
      return factor();
    }
    ChartExpr base = primary();
    if (lex.peek() == '^') {
      lex.get();
      bool neg = lex.eat('-');
      BigInt k = lex.integer();
      long e = k.convert_to<long>();
      return base.pow(neg ? -int(e) : int(e));
    }
    return base;
  }

  ChartExpr primary() {
    char c = lex.peek();
    if (c == '(') {
      lex.get();
      ChartExpr e = expr();
      if (!lex.eat(')')) throw ParseError("expected ')'", int(lex.pos));
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      BigInt v = lex.integer();
      return ChartExpr::constant(n, CRat(Rat(v)));
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::string name = lex.ident();
      if (name == "i") return ChartExpr::constant(n, CRat::i());
      if (name == "conj") {
        if (!lex.eat('(')) throw ParseError("expected '(' after conj", int(lex.pos));
        ChartExpr e = expr();
        if (!lex.eat(')')) throw ParseError("expected ')'", int(lex.pos));
        return e.conjugated();
      }
      for (int v = 0; v < n; ++v)
        if (vars[v] == name) return ChartExpr::coordinate(n, v);
      throw ParseError("unknown identifier '" + name + "'", int(lex.pos));
    }
    throw ParseError("unexpected character", int(lex.pos));
  }
};

}  // namespace

ChartExpr parse_expr(const std::string& text, const std::vector<std::string>& var_names) {
  Parser p(text, var_names);
  return p.parse();
}

}  // namespace chern
