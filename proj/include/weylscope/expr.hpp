#pragma once

#include <array>
#include <memory>
#include <string>

namespace weylscope::expr {

/// AST for the metric-definition expression language: infix arithmetic over
/// x1..x4 with + - * / ^, unary minus, sin, cos, exp, sqrt and numeric
/// literals. '^' is right-associative and binds above unary minus.
struct Node;
using NodePtr = std::shared_ptr<const Node>;

enum class Op { add, sub, mul, div, pow, neg, sin, cos, exp, sqrt, number, variable };

struct Node {
  Op op;
  double value = 0.0;  // number
  int var_index = 0;   // variable: 0..3
  NodePtr lhs, rhs;    // rhs empty for unary
};

/// Parse a single expression. Throws SyntaxError (position + expected set)
/// or UndefinedSymbolError for unknown identifiers.
NodePtr parse_expression(const std::string& source, int line_number = 1);

double evaluate(const Node& node, const std::array<double, 4>& x);

/// Canonical infix form; parsing it back yields an equivalent evaluator.
std::string pretty_print(const Node& node);

}  // namespace weylscope::expr
