#include "weylscope/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>

#include "weylscope/errors.hpp"

namespace weylscope::expr {

namespace {

enum class TokKind { number, ident, plus, minus, star, slash, caret, lparen, rparen, end };

struct Token {
  TokKind kind;
  double number = 0.0;
  std::string text;
  int column = 0;  // 1-based
};

struct Lexer {
  const std::string& src;
  int line;
  std::size_t pos = 0;
  Token current;

  Lexer(const std::string& s, int line_number) : src(s), line(line_number) { advance(); }

  [[noreturn]] void fail(const std::string& expected, int column) const {
    throw SyntaxError("line " + std::to_string(line) + ", column " + std::to_string(column) +
                          ": expected " + expected,
                      line, column);
  }

  void advance() {
    while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos]))) ++pos;
    current = Token{};
    current.column = int(pos) + 1;
    if (pos >= src.size()) {
      current.kind = TokKind::end;
      return;
    }
    const char c = src[pos];
    switch (c) {
      case '+': current.kind = TokKind::plus; ++pos; return;
      case '-': current.kind = TokKind::minus; ++pos; return;
      case '*': current.kind = TokKind::star; ++pos; return;
      case '/': current.kind = TokKind::slash; ++pos; return;
      case '^': current.kind = TokKind::caret; ++pos; return;
      case '(': current.kind = TokKind::lparen; ++pos; return;
      case ')': current.kind = TokKind::rparen; ++pos; return;
      default: break;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const char* begin = src.c_str() + pos;
      char* end = nullptr;
      current.number = std::strtod(begin, &end);
      if (end == begin) fail("a number", current.column);
      pos += std::size_t(end - begin);
      current.kind = TokKind::number;
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos;
      while (pos < src.size() &&
             (std::isalnum(static_cast<unsigned char>(src[pos])) || src[pos] == '_'))
        ++pos;
      current.kind = TokKind::ident;
      current.text = src.substr(start, pos - start);
      return;
    }
    fail("a number, name, operator, or parenthesis (found '" + std::string(1, c) + "')",
         current.column);
  }
};

NodePtr make(Op op, NodePtr lhs = nullptr, NodePtr rhs = nullptr) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  return n;
}

struct Parser {
  Lexer lex;

  NodePtr parse_additive() {
    NodePtr lhs = parse_multiplicative();
    while (lex.current.kind == TokKind::plus || lex.current.kind == TokKind::minus) {
      const Op op = lex.current.kind == TokKind::plus ? Op::add : Op::sub;
      lex.advance();
      lhs = make(op, lhs, parse_multiplicative());
    }
    return lhs;
  }

  NodePtr parse_multiplicative() {
    NodePtr lhs = parse_unary();
    while (lex.current.kind == TokKind::star || lex.current.kind == TokKind::slash) {
      const Op op = lex.current.kind == TokKind::star ? Op::mul : Op::div;
      lex.advance();
      lhs = make(op, lhs, parse_unary());
    }
    return lhs;
  }

  NodePtr parse_unary() {
    if (lex.current.kind == TokKind::minus) {
      lex.advance();
      return make(Op::neg, parse_unary());
    }
    return parse_power();
  }

  // '^' is right-associative and binds above unary minus: -x^2 == -(x^2).
  NodePtr parse_power() {
    NodePtr base = parse_primary();
    if (lex.current.kind == TokKind::caret) {
      lex.advance();
      return make(Op::pow, base, parse_unary());
    }
    return base;
  }

  NodePtr parse_primary() {
    const Token tok = lex.current;
    switch (tok.kind) {
      case TokKind::number: {
        lex.advance();
        auto n = make(Op::number);
        const_cast<Node&>(*n).value = tok.number;
        return n;
      }
      case TokKind::lparen: {
        lex.advance();
        NodePtr inner = parse_additive();
        if (lex.current.kind != TokKind::rparen) lex.fail("')'", lex.current.column);
        lex.advance();
        return inner;
      }
      case TokKind::ident: {
        lex.advance();
        if (tok.text.size() == 2 && tok.text[0] == 'x' && tok.text[1] >= '1' && tok.text[1] <= '4') {
          auto n = make(Op::variable);
          const_cast<Node&>(*n).var_index = tok.text[1] - '1';
          return n;
        }
        Op fn;
        if (tok.text == "sin") fn = Op::sin;
        else if (tok.text == "cos") fn = Op::cos;
        else if (tok.text == "exp") fn = Op::exp;
        else if (tok.text == "sqrt") fn = Op::sqrt;
        else
          throw UndefinedSymbolError("line " + std::to_string(lex.line) + ", column " +
                                     std::to_string(tok.column) + ": unknown symbol '" +
                                     tok.text + "' (expected x1..x4, sin, cos, exp, sqrt)");
        if (lex.current.kind != TokKind::lparen) lex.fail("'(' after " + tok.text, lex.current.column);
        lex.advance();
        NodePtr arg = parse_additive();
        if (lex.current.kind != TokKind::rparen) lex.fail("')'", lex.current.column);
        lex.advance();
        return make(fn, arg);
      }
      default:
        lex.fail("a number, variable, function, or '('", tok.column);
    }
  }
};

int precedence(Op op) {
  switch (op) {
    case Op::add:
    case Op::sub: return 1;
    case Op::mul:
    case Op::div: return 2;
    case Op::neg: return 3;
    case Op::pow: return 4;
    default: return 5;
  }
}

/// min_prec: parenthesize this node unless its precedence is >= min_prec.
void print(const Node& n, std::string& out, int min_prec) {
  const int prec = precedence(n.op);
  const bool parens = prec < min_prec;
  if (parens) out += '(';
  switch (n.op) {
    case Op::number: {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.17g", n.value);
      out += buf;
      break;
    }
    case Op::variable:
      out += 'x';
      out += char('1' + n.var_index);
      break;
    case Op::add:
    case Op::sub:
    case Op::mul:
    case Op::div: {
      const char* sym = n.op == Op::add ? " + " : n.op == Op::sub ? " - "
                        : n.op == Op::mul ? "*" : "/";
      print(*n.lhs, out, prec);      // left-associative chains stay flat
      out += sym;
      print(*n.rhs, out, prec + 1);  // right operand binds tighter or parens
      break;
    }
    case Op::pow:
      print(*n.lhs, out, prec + 1);  // (a^b)^c and (-a)^b keep parens
      out += '^';
      print(*n.rhs, out, prec);      // right-associative: a^b^c
      break;
    case Op::neg:
      out += '-';
      print(*n.lhs, out, prec + 1);
      break;
    case Op::sin: out += "sin("; print(*n.lhs, out, 0); out += ')'; break;
    case Op::cos: out += "cos("; print(*n.lhs, out, 0); out += ')'; break;
    case Op::exp: out += "exp("; print(*n.lhs, out, 0); out += ')'; break;
    case Op::sqrt: out += "sqrt("; print(*n.lhs, out, 0); out += ')'; break;
  }
  if (parens) out += ')';
}

}  // namespace

NodePtr parse_expression(const std::string& source, int line_number) {
  Parser parser{Lexer(source, line_number)};
  NodePtr root = parser.parse_additive();
  if (parser.lex.current.kind != TokKind::end)
    parser.lex.fail("end of expression", parser.lex.current.column);
  return root;
}

double evaluate(const Node& node, const std::array<double, 4>& x) {
  switch (node.op) {
    case Op::number: return node.value;
    case Op::variable: return x[std::size_t(node.var_index)];
    case Op::add: return evaluate(*node.lhs, x) + evaluate(*node.rhs, x);
    case Op::sub: return evaluate(*node.lhs, x) - evaluate(*node.rhs, x);
    case Op::mul: return evaluate(*node.lhs, x) * evaluate(*node.rhs, x);
    case Op::div: return evaluate(*node.lhs, x) / evaluate(*node.rhs, x);
    case Op::pow: return std::pow(evaluate(*node.lhs, x), evaluate(*node.rhs, x));
    case Op::neg: return -evaluate(*node.lhs, x);
    case Op::sin: return std::sin(evaluate(*node.lhs, x));
    case Op::cos: return std::cos(evaluate(*node.lhs, x));
    case Op::exp: return std::exp(evaluate(*node.lhs, x));
    case Op::sqrt: return std::sqrt(evaluate(*node.lhs, x));
  }
  throw ValidationError("corrupt expression node");
}

std::string pretty_print(const Node& node) {
  std::string out;
  print(node, out, 0);
  return out;
}

}  // namespace weylscope::expr
