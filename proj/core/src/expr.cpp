// Copyright (c) 2026 the grushin project authors
// SPDX-License-Identifier: Apache-2.0

#include "grushin/expr.hpp"

#include <cctype>
#include <cmath>
#include <charconv>
#include <utility>
#include <vector>

#include "grushin/grid.hpp"

namespace grushin {

namespace {

enum class Fn { sin, cos, exp, log, abs, sqrt };

const char* fn_name(Fn f) {
  switch (f) {
    case Fn::sin: return "sin";
    case Fn::cos: return "cos";
    case Fn::exp: return "exp";
    case Fn::log: return "log";
    case Fn::abs: return "abs";
    case Fn::sqrt: return "sqrt";
  }
  return "?";
}

}  // namespace

struct Expr::Node {
  enum class Kind { number, variable, unary_minus, binary, call };

  Kind kind;
  double number = 0.0;
  int var = 0;  // coordinate index into (x1..xn, y1..ym) flattened
  char op = 0;  // + - * / ^
  Fn fn = Fn::sin;
  std::shared_ptr<const Node> a, b;
};

namespace {

using NodePtr = std::shared_ptr<const Expr::Node>;

NodePtr make_number(double v) {
  auto n = std::make_shared<Expr::Node>();
  n->kind = Expr::Node::Kind::number;
  n->number = v;
  return n;
}

NodePtr make_var(int idx) {
  auto n = std::make_shared<Expr::Node>();
  n->kind = Expr::Node::Kind::variable;
  n->var = idx;
  return n;
}

NodePtr make_unary(NodePtr a) {
  auto n = std::make_shared<Expr::Node>();
  n->kind = Expr::Node::Kind::unary_minus;
  n->a = std::move(a);
  return n;
}

NodePtr make_binary(char op, NodePtr a, NodePtr b) {
  auto n = std::make_shared<Expr::Node>();
  n->kind = Expr::Node::Kind::binary;
  n->op = op;
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}

NodePtr make_call(Fn fn, NodePtr a) {
  auto n = std::make_shared<Expr::Node>();
  n->kind = Expr::Node::Kind::call;
  n->fn = fn;
  n->a = std::move(a);
  return n;
}

class Parser {
 public:
  Parser(std::string_view text, int n, int m) : text_(text), n_(n), m_(m) {}

  NodePtr run() {
    if (text_.empty()) throw ParseError("empty expression", 0);
    skip_ws();
    NodePtr e = parse_sum();
    skip_ws();
    if (pos_ != text_.size()) throw ParseError("unexpected trailing input", pos_);
    return e;
  }

 private:
  // sum  := product (('+'|'-') product)*          left-assoc
  // product := unary (('*'|'/') unary)*           left-assoc
  // unary := '-' unary | power
  // power := primary ('^' unary)?                 right-assoc
  // primary := number | variable | fn '(' sum ')' | '(' sum ')'

  NodePtr parse_sum() {
    NodePtr lhs = parse_product();
    for (;;) {
      skip_ws();
      if (peek() == '+' || peek() == '-') {
        char op = take();
        lhs = make_binary(op, std::move(lhs), parse_product());
      } else {
        return lhs;
      }
    }
  }

  NodePtr parse_product() {
    NodePtr lhs = parse_unary();
    for (;;) {
      skip_ws();
      if (peek() == '*' || peek() == '/') {
        char op = take();
        lhs = make_binary(op, std::move(lhs), parse_unary());
      } else {
        return lhs;
      }
    }
  }

  NodePtr parse_unary() {
    skip_ws();
    if (peek() == '-') {
      take();
      return make_unary(parse_unary());
    }
    return parse_power();
  }

  NodePtr parse_power() {
    NodePtr base = parse_primary();
    skip_ws();
    if (peek() == '^') {
      take();
      // right operand parses as unary so 2^-3 and a^b^c (right-assoc) work
      return make_binary('^', std::move(base), parse_unary());
    }
    return base;
  }

  NodePtr parse_primary() {
    skip_ws();
    if (pos_ >= text_.size()) throw ParseError("unexpected end of expression", pos_);
    char c = text_[pos_];
    if (c == '(') {
      take();
      NodePtr inner = parse_sum();
      expect(')');
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c))) return parse_identifier();
    throw ParseError(std::string("unexpected character '") + c + "'", pos_);
  }

  NodePtr parse_number() {
    const char* begin = text_.data() + pos_;
    const char* end = text_.data() + text_.size();
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr == begin) throw ParseError("malformed number", pos_);
    pos_ += static_cast<std::size_t>(ptr - begin);
    return make_number(value);
  }

  NodePtr parse_identifier() {
    std::size_t start = pos_;
    while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])))) ++pos_;
    std::string_view id = text_.substr(start, pos_ - start);

    if ((id[0] == 'x' || id[0] == 'y') && id.size() > 1 &&
        std::isdigit(static_cast<unsigned char>(id[1]))) {
      int idx = 0;
      for (std::size_t i = 1; i < id.size(); ++i) {
        if (!std::isdigit(static_cast<unsigned char>(id[i])))
          throw ParseError("malformed variable '" + std::string(id) + "'", start);
        idx = idx * 10 + (id[i] - '0');
      }
      const int limit = (id[0] == 'x') ? n_ : m_;
      if (idx < 1 || idx > limit)
        throw ParseError("variable '" + std::string(id) + "' out of range for (n=" +
                             std::to_string(n_) + ", m=" + std::to_string(m_) + ")",
                         start);
      return make_var(id[0] == 'x' ? idx - 1 : n_ + idx - 1);
    }

    static constexpr std::pair<std::string_view, Fn> table[] = {
        {"sin", Fn::sin}, {"cos", Fn::cos}, {"exp", Fn::exp},
        {"log", Fn::log}, {"abs", Fn::abs}, {"sqrt", Fn::sqrt},
    };
    for (auto [name, fn] : table) {
      if (id == name) {
        skip_ws();
        expect('(');
        NodePtr arg = parse_sum();
        expect(')');
        return make_call(fn, std::move(arg));
      }
    }
    throw ParseError("unknown identifier '" + std::string(id) + "'", start);
  }

  void expect(char c) {
    skip_ws();
    if (pos_ >= text_.size() || text_[pos_] != c)
      throw ParseError(std::string("expected '") + c + "'", pos_);
    ++pos_;
  }

  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }
  char take() { return text_[pos_++]; }
  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int n_, m_;
};

double eval_node(const Expr::Node& n, std::span<const double> point) {
  using Kind = Expr::Node::Kind;
  switch (n.kind) {
    case Kind::number:
      return n.number;
    case Kind::variable:
      return point[static_cast<std::size_t>(n.var)];
    case Kind::unary_minus:
      return -eval_node(*n.a, point);
    case Kind::binary: {
      const double a = eval_node(*n.a, point);
      const double b = eval_node(*n.b, point);
      switch (n.op) {
        case '+': return a + b;
        case '-': return a - b;
        case '*': return a * b;
        case '/':
          if (b == 0.0) throw EvalError("division by zero");
          return a / b;
        case '^': {
          if (a < 0.0 && b != std::floor(b))
            throw EvalError("non-integer power of a negative base");
          if (a == 0.0 && b < 0.0) throw EvalError("zero raised to a negative power");
          return std::pow(a, b);
        }
      }
      throw EvalError("corrupt operator node");
    }
    case Kind::call: {
      const double a = eval_node(*n.a, point);
      switch (n.fn) {
        case Fn::sin: return std::sin(a);
        case Fn::cos: return std::cos(a);
        case Fn::exp: return std::exp(a);
        case Fn::abs: return std::fabs(a);
        case Fn::log:
          if (a <= 0.0) throw EvalError("log of a non-positive value");
          return std::log(a);
        case Fn::sqrt:
          if (a < 0.0) throw EvalError("sqrt of a negative value");
          return std::sqrt(a);
      }
      throw EvalError("corrupt call node");
    }
  }
  throw EvalError("corrupt expression node");
}

}  // namespace

Expr Expr::parse(std::string_view text, int n, int m) {
  if (n < 0 || m < 0) throw DomainError("dimension counts must be nonnegative");
  Parser p(text, n, m);
  return Expr(p.run(), n, m);
}

double Expr::eval(std::span<const double> point) const {
  if (point.size() != static_cast<std::size_t>(n_ + m_))
    throw EvalError("point dimension does not match (n, m)");
  return eval_node(*root_, point);
}

namespace {

void render(const Expr::Node& n, int dim_x, std::string& out) {
  using Kind = Expr::Node::Kind;
  switch (n.kind) {
    case Kind::number: {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.17g", n.number);
      out += buf;
      return;
    }
    case Kind::variable: {
      if (n.var < dim_x)
        out += "x" + std::to_string(n.var + 1);
      else
        out += "y" + std::to_string(n.var - dim_x + 1);
      return;
    }
    case Kind::unary_minus:
      out += "(-";
      render(*n.a, dim_x, out);
      out += ")";
      return;
    case Kind::binary:
      out += "(";
      render(*n.a, dim_x, out);
      out += n.op;
      render(*n.b, dim_x, out);
      out += ")";
      return;
    case Kind::call:
      out += fn_name(n.fn);
      out += "(";
      render(*n.a, dim_x, out);
      out += ")";
      return;
  }
}

}  // namespace

std::string Expr::to_string() const {
  std::string out;
  render(*root_, n_, out);
  return out;
}

ScalarField eval_on_grid(const Expr& e, const Grid& g) {
  if (e.dim_x() != g.dim_x() || e.dim_y() != g.dim_y())
    throw DomainError("expression dimensions do not match the grid");
  ScalarField f(g.node_count());
  std::vector<double> point(static_cast<std::size_t>(g.dim()));
  for (std::size_t i = 0; i < g.node_count(); ++i) {
    g.node_point(i, point);
    try {
      f[i] = e.eval(point);
    } catch (const EvalError& err) {
      throw EvalError(std::string(err.what()) + " at node " + std::to_string(i));
    }
  }
  return f;
}

}  // namespace grushin
