#pragma once

// Shared test utilities: an independent expression-evaluation oracle
// (shunting-yard, no AST), random generators, and the synthetic algebraic
// curvature-operator builder used by the round-trip tests. Everything here
// is deliberately written against a different algorithm than the library
// path it checks.

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "weylscope/frames.hpp"
#include "weylscope/linalg.hpp"
#include "weylscope/metric.hpp"
#include "weylscope/tensor.hpp"

namespace testsupport {

using weylscope::ChartDomain;
using weylscope::ChartPoint;
using weylscope::Mat3;
using weylscope::Mat4;
using weylscope::Tensor4;

// ---------------------------------------------------------------------------
// Shunting-yard oracle: infix -> RPN -> stack evaluation.
// ---------------------------------------------------------------------------

namespace shunting {

struct Tok {
  enum Kind { num, var, func, op, unary_minus, lparen, rparen } kind;
  double value = 0.0;
  int var_index = 0;
  std::string name;  // func or op symbol
};

inline int prec(const Tok& t) {
  if (t.kind == Tok::unary_minus) return 3;
  if (t.name == "+" || t.name == "-") return 1;
  if (t.name == "*" || t.name == "/") return 2;
  if (t.name == "^") return 4;
  throw std::runtime_error("oracle: unknown operator");
}

inline bool right_assoc(const Tok& t) { return t.kind == Tok::unary_minus || t.name == "^"; }

inline std::vector<Tok> lex(const std::string& s) {
  std::vector<Tok> out;
  std::size_t i = 0;
  bool operand_expected = true;
  while (i < s.size()) {
    const char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      char* end = nullptr;
      const double v = std::strtod(s.c_str() + i, &end);
      out.push_back({Tok::num, v, 0, ""});
      i = std::size_t(end - s.c_str());
      operand_expected = false;
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < s.size() && std::isalnum(static_cast<unsigned char>(s[j]))) ++j;
      const std::string name = s.substr(i, j - i);
      i = j;
      if (name.size() == 2 && name[0] == 'x' && name[1] >= '1' && name[1] <= '4') {
        out.push_back({Tok::var, 0.0, name[1] - '1', ""});
        operand_expected = false;
      } else {
        out.push_back({Tok::func, 0.0, 0, name});
        operand_expected = true;
      }
      continue;
    }
    switch (c) {
      case '(': out.push_back({Tok::lparen, 0.0, 0, ""}); operand_expected = true; break;
      case ')': out.push_back({Tok::rparen, 0.0, 0, ""}); operand_expected = false; break;
      case '-':
        if (operand_expected)
          out.push_back({Tok::unary_minus, 0.0, 0, "u-"});
        else
          out.push_back({Tok::op, 0.0, 0, "-"});
        operand_expected = true;
        break;
      case '+': case '*': case '/': case '^':
        out.push_back({Tok::op, 0.0, 0, std::string(1, c)});
        operand_expected = true;
        break;
      default:
        throw std::runtime_error("oracle: bad character");
    }
    ++i;
  }
  return out;
}

inline std::vector<Tok> to_rpn(const std::vector<Tok>& tokens) {
  std::vector<Tok> output, stack;
  for (const Tok& t : tokens) {
    switch (t.kind) {
      case Tok::num:
      case Tok::var: output.push_back(t); break;
      case Tok::func: stack.push_back(t); break;
      case Tok::unary_minus: stack.push_back(t); break;  // prefix: never pops
      case Tok::op: {
        while (!stack.empty() &&
               (stack.back().kind == Tok::op || stack.back().kind == Tok::unary_minus) &&
               (prec(stack.back()) > prec(t) ||
                (prec(stack.back()) == prec(t) && !right_assoc(t)))) {
          output.push_back(stack.back());
          stack.pop_back();
        }
        stack.push_back(t);
        break;
      }
      case Tok::lparen: stack.push_back(t); break;
      case Tok::rparen: {
        while (!stack.empty() && stack.back().kind != Tok::lparen) {
          output.push_back(stack.back());
          stack.pop_back();
        }
        if (stack.empty()) throw std::runtime_error("oracle: unbalanced parens");
        stack.pop_back();
        if (!stack.empty() && stack.back().kind == Tok::func) {
          output.push_back(stack.back());
          stack.pop_back();
        }
        break;
      }
    }
  }
  while (!stack.empty()) {
    if (stack.back().kind == Tok::lparen) throw std::runtime_error("oracle: unbalanced parens");
    output.push_back(stack.back());
    stack.pop_back();
  }
  return output;
}

inline double eval_rpn(const std::vector<Tok>& rpn, const std::array<double, 4>& x) {
  std::vector<double> st;
  auto pop = [&st] {
    const double v = st.back();
    st.pop_back();
    return v;
  };
  for (const Tok& t : rpn) {
    switch (t.kind) {
      case Tok::num: st.push_back(t.value); break;
      case Tok::var: st.push_back(x[std::size_t(t.var_index)]); break;
      case Tok::unary_minus: st.back() = -st.back(); break;
      case Tok::func: {
        const double v = pop();
        if (t.name == "sin") st.push_back(std::sin(v));
        else if (t.name == "cos") st.push_back(std::cos(v));
        else if (t.name == "exp") st.push_back(std::exp(v));
        else if (t.name == "sqrt") st.push_back(std::sqrt(v));
        else throw std::runtime_error("oracle: unknown function " + t.name);
        break;
      }
      case Tok::op: {
        const double b = pop(), a = pop();
        if (t.name == "+") st.push_back(a + b);
        else if (t.name == "-") st.push_back(a - b);
        else if (t.name == "*") st.push_back(a * b);
        else if (t.name == "/") st.push_back(a / b);
        else st.push_back(std::pow(a, b));
        break;
      }
      default: throw std::runtime_error("oracle: parens in rpn");
    }
  }
  if (st.size() != 1) throw std::runtime_error("oracle: malformed expression");
  return st[0];
}

inline double evaluate(const std::string& source, const std::array<double, 4>& x) {
  return eval_rpn(to_rpn(lex(source)), x);
}

}  // namespace shunting

// ---------------------------------------------------------------------------
// Random expression source generator.
// ---------------------------------------------------------------------------

inline std::string random_expression(std::mt19937_64& rng, int depth = 0) {
  std::uniform_int_distribution<int> pick(0, depth >= 4 ? 1 : 9);
  std::uniform_real_distribution<double> num(0.1, 4.0);
  std::uniform_int_distribution<int> var(1, 4);
  switch (pick(rng)) {
    case 0: {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.6g", num(rng));
      return buf;
    }
    case 1: return "x" + std::to_string(var(rng));
    case 2: return random_expression(rng, depth + 1) + " + " + random_expression(rng, depth + 1);
    case 3: return random_expression(rng, depth + 1) + " - " + random_expression(rng, depth + 1);
    case 4: return "(" + random_expression(rng, depth + 1) + ")*(" +
                   random_expression(rng, depth + 1) + ")";
    case 5: return "(" + random_expression(rng, depth + 1) + ")/(" +
                   random_expression(rng, depth + 1) + " + 5)";
    case 6: return "sin(" + random_expression(rng, depth + 1) + ")";
    case 7: return "cos(" + random_expression(rng, depth + 1) + ")";
    case 8: return "-" + std::string("(") + random_expression(rng, depth + 1) + ")";
    default: {
      std::uniform_int_distribution<int> small(1, 3);
      return "(" + random_expression(rng, depth + 1) + ")^" + std::to_string(small(rng));
    }
  }
}

// ---------------------------------------------------------------------------
// Random sampling helpers.
// ---------------------------------------------------------------------------

inline ChartPoint random_point(const ChartDomain& box, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  ChartPoint p;
  for (int i = 0; i < 4; ++i) p.x[i] = box.lower[i] + (box.upper[i] - box.lower[i]) * unit(rng);
  return p;
}

inline Mat3 random_symmetric3(std::mt19937_64& rng, double scale = 1.0) {
  std::uniform_real_distribution<double> unit(-scale, scale);
  Mat3 m;
  for (int a = 0; a < 3; ++a)
    for (int b = a; b < 3; ++b) m(a, b) = m(b, a) = unit(rng);
  return m;
}

inline Mat3 random_traceless3(std::mt19937_64& rng, double scale = 1.0) {
  Mat3 m = random_symmetric3(rng, scale);
  m -= (m.trace() / 3.0) * Mat3::Identity();
  return m;
}

inline Mat4 random_traceless_symmetric4(std::mt19937_64& rng, double scale = 1.0) {
  std::uniform_real_distribution<double> unit(-scale, scale);
  Mat4 m;
  for (int a = 0; a < 4; ++a)
    for (int b = a; b < 4; ++b) m(a, b) = m(b, a) = unit(rng);
  m -= (m.trace() / 4.0) * Mat4::Identity();
  return m;
}

/// Random rotation via QR of a Gaussian matrix, det fixed to +1.
template <typename Mat>
Mat random_rotation(std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Mat a;
  for (int i = 0; i < Mat::RowsAtCompileTime; ++i)
    for (int j = 0; j < Mat::ColsAtCompileTime; ++j) a(i, j) = gauss(rng);
  Eigen::HouseholderQR<Mat> qr(a);
  Mat q = qr.householderQ();
  Mat r = qr.matrixQR().template triangularView<Eigen::Upper>();
  for (int i = 0; i < Mat::RowsAtCompileTime; ++i)
    if (r(i, i) < 0) q.col(i) = -q.col(i);
  if (q.determinant() < 0) q.col(0) = -q.col(0);
  return q;
}

// ---------------------------------------------------------------------------
// Synthetic algebraic curvature tensors in an orthonormal frame (g = I).
//   R = (S/12) (d_ac d_bd - d_ad d_bc) + (1/2)(Ric0 kn I) + Weyl(W+, W-)
// ---------------------------------------------------------------------------

inline Tensor4 synthetic_curvature(double scalar, const Mat4& ric0, const Mat3& wplus,
                                   const Mat3& wminus) {
  using weylscope::frames::kPairs;
  Tensor4 r;
  const Mat4 id = Mat4::Identity();
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int c = 0; c < 4; ++c)
        for (int d = 0; d < 4; ++d) {
          double v = scalar / 12.0 * (id(a, c) * id(b, d) - id(a, d) * id(b, c));
          v += 0.5 * (ric0(a, c) * id(b, d) - ric0(a, d) * id(b, c) + id(a, c) * ric0(b, d) -
                      id(a, d) * ric0(b, c));
          r(a, b, c, d) = v;
        }

  // Weyl parts from the bivector picture: sum W_ab w_a (x) w_b over the
  // self-dual / anti-self-dual unit bases of the identity frame.
  const weylscope::OrthonormalFrame frame;
  const weylscope::BivectorBasis basis = weylscope::frames::selfdual_basis(frame, id);
  auto add_block = [&r, &basis](const Mat3& w, int first) {
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) {
        const double wab = w(a, b);
        if (wab == 0.0) continue;
        const Mat4& fa = basis.chart_form[std::size_t(first + a)];
        const Mat4& fb = basis.chart_form[std::size_t(first + b)];
        for (int i = 0; i < 4; ++i)
          for (int j = 0; j < 4; ++j)
            for (int k = 0; k < 4; ++k)
              for (int l = 0; l < 4; ++l) r(i, j, k, l) += wab * fa(i, j) * fb(k, l);
      }
  };
  add_block(wplus, 0);
  add_block(wminus, 3);
  return r;
}

/// CurvatureData wrapper for a synthetic tensor (flat chart, identity frame).
inline weylscope::CurvatureData synthetic_curvature_data(const Tensor4& r) {
  weylscope::CurvatureData cd;
  cd.metric = Mat4::Identity();
  cd.metric_inv = Mat4::Identity();
  cd.riemann = r;
  for (int j = 0; j < 4; ++j)
    for (int l = 0; l < 4; ++l) {
      double s = 0.0;
      for (int i = 0; i < 4; ++i) s += r(i, j, i, l);
      cd.ricci(j, l) = s;
    }
  cd.scalar = cd.ricci.trace();
  cd.frame = weylscope::OrthonormalFrame{};
  return cd;
}

}  // namespace testsupport
