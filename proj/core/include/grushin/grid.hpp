// Copyright (c) 2026 the grushin project authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace grushin {

class Expr;

/// A domain or hypothesis requirement was violated; the message names the
/// requirement that failed.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct AxisSpec {
  double lo = -1.0;
  double hi = 1.0;
  int count = 17;
};

/// Box domain in R^n x R^m. The first n axes are the x-coordinates (the
/// block carrying the degeneracy weight |x|^gamma acts on the remaining m).
struct DomainSpec {
  int n = 1;
  int m = 2;
  std::vector<AxisSpec> axes;  // size n + m

  int dim() const { return n + m; }

  /// Throws DomainError unless: n + m >= 3 (the band (2, N) for the
  /// exponent is non-empty), every axis has an odd node count >= 5 with
  /// lo < hi, and every x-axis interval contains 0 in its interior.
  void validate() const;
};

/// Tensor-product grid with trapezoid quadrature.
class Grid {
 public:
  static Grid build(const DomainSpec& spec);

  int dim() const { return spec_.dim(); }
  int dim_x() const { return spec_.n; }
  int dim_y() const { return spec_.m; }
  std::size_t node_count() const { return node_count_; }

  int axis_count(int axis) const { return spec_.axes[axis].count; }
  double spacing(int axis) const { return spacing_[axis]; }
  std::size_t stride(int axis) const { return stride_[axis]; }
  double volume() const { return volume_; }

  /// Coordinate of `node` along `axis` (row-major node order, last axis
  /// fastest; ascending flat index == lexicographic multi-index order).
  double coordinate(std::size_t node, int axis) const {
    return axis_coords_[axis][axis_index(node, axis)];
  }
  int axis_index(std::size_t node, int axis) const {
    return static_cast<int>((node / stride_[axis]) % static_cast<std::size_t>(spec_.axes[axis].count));
  }
  void node_point(std::size_t node, std::span<double> out) const;

  const std::vector<double>& quadrature_weights() const { return weights_; }
  const std::vector<std::uint8_t>& boundary_mask() const { return boundary_; }

  /// Euclidean norm of the x-block (resp. y-block) of each node's coordinates.
  const std::vector<double>& x_norms() const { return x_norm_; }
  const std::vector<double>& y_norms() const { return y_norm_; }

  const DomainSpec& spec() const { return spec_; }

 private:
  explicit Grid(DomainSpec spec);

  DomainSpec spec_;
  std::size_t node_count_ = 0;
  double volume_ = 0.0;
  std::vector<std::vector<double>> axis_coords_;
  std::vector<std::vector<double>> axis_weights_;
  std::vector<double> spacing_;
  std::vector<std::size_t> stride_;
  std::vector<double> weights_;
  std::vector<std::uint8_t> boundary_;
  std::vector<double> x_norm_;
  std::vector<double> y_norm_;
};

/// Nodal values of a scalar function on a Grid. `dirichlet` marks fields
/// that vanish on every boundary node.
struct ScalarField {
  ScalarField() = default;
  explicit ScalarField(std::size_t count, double value = 0.0, bool dirichlet_tag = false)
      : values(count, value), dirichlet(dirichlet_tag) {}
  ScalarField(std::vector<double> v, bool dirichlet_tag = false)
      : values(std::move(v)), dirichlet(dirichlet_tag) {}

  std::size_t size() const { return values.size(); }
  double operator[](std::size_t i) const { return values[i]; }
  double& operator[](std::size_t i) { return values[i]; }

  std::vector<double> values;
  bool dirichlet = false;
};

/// Per-node gradient split into the x-block (n components) and y-block
/// (m components).
class SplitGradient {
 public:
  SplitGradient(std::size_t nodes, int n, int m)
      : n_(n), m_(m), x_(nodes * static_cast<std::size_t>(n)), y_(nodes * static_cast<std::size_t>(m)) {}

  int dim_x() const { return n_; }
  int dim_y() const { return m_; }
  std::size_t node_count() const { return n_ > 0 ? x_.size() / n_ : y_.size() / m_; }

  double x(std::size_t node, int i) const { return x_[node * n_ + i]; }
  double& x(std::size_t node, int i) { return x_[node * n_ + i]; }
  double y(std::size_t node, int j) const { return y_[node * m_ + j]; }
  double& y(std::size_t node, int j) { return y_[node * m_ + j]; }

  double x_norm(std::size_t node) const;
  double y_norm(std::size_t node) const;

 private:
  int n_, m_;
  std::vector<double> x_, y_;
};

/// Trapezoid-rule approximation of the integral of f over the box.
double integrate(const ScalarField& f, const Grid& g);

/// Second-order finite-difference derivative along one axis: central in the
/// interior, one-sided three-point at the two boundary layers.
std::vector<double> axis_derivative(std::span<const double> f, const Grid& g, int axis);

/// Adjoint (transpose) of axis_derivative as a linear map on nodal vectors.
std::vector<double> axis_derivative_adjoint(std::span<const double> f, const Grid& g, int axis);

/// All axis derivatives of u, split into x- and y-blocks.
SplitGradient grad_split(const ScalarField& u, const Grid& g);

/// Compactly supported C^1 bump: amplitude * prod_i cos^2(pi (z_i - c_i) / (2 r_i))
/// inside the support box, 0 outside. Rejects supports that touch the
/// domain boundary. The result is Dirichlet-tagged.
ScalarField make_bump(const Grid& g, std::span<const double> center, std::span<const double> radii,
                      double amplitude);

/// Evaluate a parsed expression at every grid node.
ScalarField eval_on_grid(const Expr& e, const Grid& g);

}  // namespace grushin
