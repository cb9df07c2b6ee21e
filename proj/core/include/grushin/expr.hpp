// Copyright (c) 2026 the grushin project authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>

namespace grushin {

/// Syntax error while parsing an expression; `offset` is the byte position
/// in the input where the problem was detected.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : std::runtime_error(what + " (at offset " + std::to_string(offset) + ")"), offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

/// Evaluation left the real domain (log of a non-positive value, sqrt of a
/// negative value, division by zero, or a non-integer power of a negative
/// base).
class EvalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Immutable arithmetic expression over variables x1..xn, y1..ym.
///
/// Grammar: + - * / ^ with standard precedence (^ binds tightest and is
/// right-associative), unary minus, parentheses, and the calls
/// sin, cos, exp, log, abs, sqrt. Numbers are decimal literals with an
/// optional exponent part. Evaluation is reentrant.
class Expr {
 public:
  /// Parse `text` against dimensions (n, m). Throws ParseError on bad
  /// syntax, unknown identifiers, or variable indices outside (n, m).
  static Expr parse(std::string_view text, int n, int m);

  /// Evaluate at a point given as the n x-coordinates followed by the m
  /// y-coordinates. Throws EvalError on domain violations.
  double eval(std::span<const double> point) const;

  /// Fully parenthesized rendering; parses back to an equivalent tree.
  std::string to_string() const;

  int dim_x() const { return n_; }
  int dim_y() const { return m_; }

  struct Node;

 private:
  Expr(std::shared_ptr<const Node> root, int n, int m) : root_(std::move(root)), n_(n), m_(m) {}

  std::shared_ptr<const Node> root_;
  int n_ = 0;
  int m_ = 0;
};

}  // namespace grushin
