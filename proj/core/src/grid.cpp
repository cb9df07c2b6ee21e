// Copyright (c) 2026 the grushin project authors
// SPDX-License-Identifier: Apache-2.0

#include "grushin/grid.hpp"

#include <cmath>
#include <numbers>

#include "grushin/rng.hpp"

namespace grushin {

void DomainSpec::validate() const {
  if (n < 0 || m < 0) throw DomainError("dimension counts must be nonnegative");
  if (dim() < 3)
    throw DomainError("N = n + m >= 3 required: the admissible exponent band (2, N) is empty for N = " +
                      std::to_string(dim()));
  if (axes.size() != static_cast<std::size_t>(dim()))
    throw DomainError("axis count must equal n + m");
  for (int a = 0; a < dim(); ++a) {
    const AxisSpec& ax = axes[static_cast<std::size_t>(a)];
    if (!(ax.lo < ax.hi)) throw DomainError("axis " + std::to_string(a + 1) + " needs lo < hi");
    if (ax.count < 5) throw DomainError("axis " + std::to_string(a + 1) + " needs >= 5 nodes");
    if (ax.count % 2 == 0)
      throw DomainError("axis " + std::to_string(a + 1) +
                        " needs an odd node count (a node layer must be able to sit on x = 0)");
  }
  for (int a = 0; a < n; ++a) {
    const AxisSpec& ax = axes[static_cast<std::size_t>(a)];
    if (!(ax.lo < 0.0 && 0.0 < ax.hi))
      throw DomainError("the domain must intersect the degeneracy set {x = 0}: x-axis " +
                        std::to_string(a + 1) + " interval (" + std::to_string(ax.lo) + ", " +
                        std::to_string(ax.hi) + ") does not contain 0 in its interior");
  }
}

Grid::Grid(DomainSpec spec) : spec_(std::move(spec)) {}

Grid Grid::build(const DomainSpec& spec) {
  spec.validate();
  Grid g(spec);
  const int dim = spec.dim();

  g.axis_coords_.resize(static_cast<std::size_t>(dim));
  g.axis_weights_.resize(static_cast<std::size_t>(dim));
  g.spacing_.resize(static_cast<std::size_t>(dim));
  g.stride_.assign(static_cast<std::size_t>(dim), 1);

  g.node_count_ = 1;
  g.volume_ = 1.0;
  for (int a = 0; a < dim; ++a) {
    const AxisSpec& ax = spec.axes[static_cast<std::size_t>(a)];
    const int k = ax.count;
    const double h = (ax.hi - ax.lo) / (k - 1);
    g.spacing_[a] = h;
    auto& coords = g.axis_coords_[a];
    auto& weights = g.axis_weights_[a];
    coords.resize(static_cast<std::size_t>(k));
    weights.assign(static_cast<std::size_t>(k), h);
    for (int i = 0; i < k; ++i) coords[static_cast<std::size_t>(i)] = ax.lo + i * h;
    coords.back() = ax.hi;  // avoid accumulated rounding on the last node
    // exact zero layer on symmetric axes (odd count puts a node at the midpoint)
    if (ax.lo == -ax.hi) coords[static_cast<std::size_t>(k / 2)] = 0.0;
    weights.front() = weights.back() = h / 2.0;
    g.node_count_ *= static_cast<std::size_t>(k);
    g.volume_ *= ax.hi - ax.lo;
  }
  for (int a = dim - 2; a >= 0; --a)
    g.stride_[a] = g.stride_[a + 1] * static_cast<std::size_t>(spec.axes[static_cast<std::size_t>(a + 1)].count);

  g.weights_.resize(g.node_count_);
  g.boundary_.assign(g.node_count_, 0);
  g.x_norm_.resize(g.node_count_);
  g.y_norm_.resize(g.node_count_);
  for (std::size_t i = 0; i < g.node_count_; ++i) {
    double w = 1.0;
    bool boundary = false;
    double sx = 0.0, sy = 0.0;
    for (int a = 0; a < dim; ++a) {
      const int idx = g.axis_index(i, a);
      w *= g.axis_weights_[a][static_cast<std::size_t>(idx)];
      if (idx == 0 || idx == spec.axes[static_cast<std::size_t>(a)].count - 1) boundary = true;
      const double c = g.axis_coords_[a][static_cast<std::size_t>(idx)];
      if (a < spec.n)
        sx += c * c;
      else
        sy += c * c;
    }
    g.weights_[i] = w;
    g.boundary_[i] = boundary ? 1 : 0;
    g.x_norm_[i] = std::sqrt(sx);
    g.y_norm_[i] = std::sqrt(sy);
  }
  return g;
}

void Grid::node_point(std::size_t node, std::span<double> out) const {
  for (int a = 0; a < dim(); ++a) out[static_cast<std::size_t>(a)] = coordinate(node, a);
}

double SplitGradient::x_norm(std::size_t node) const {
  double s = 0.0;
  for (int i = 0; i < n_; ++i) {
    const double v = x_[node * n_ + i];
    s += v * v;
  }
  return std::sqrt(s);
}

double SplitGradient::y_norm(std::size_t node) const {
  double s = 0.0;
  for (int j = 0; j < m_; ++j) {
    const double v = y_[node * m_ + j];
    s += v * v;
  }
  return std::sqrt(s);
}

double integrate(const ScalarField& f, const Grid& g) {
  if (f.size() != g.node_count()) throw DomainError("field size does not match grid");
  KahanSum sum;
  const auto& w = g.quadrature_weights();
  for (std::size_t i = 0; i < f.size(); ++i) sum.add(w[i] * f[i]);
  return sum.value();
}

namespace {

// Apply the 1-D stencil along `axis` for every grid line. `forward` applies
// D, otherwise its transpose (scatter of the same coefficients).
void apply_axis_stencil(std::span<const double> in, const Grid& g, int axis, bool forward,
                        std::vector<double>& out) {
  const std::size_t stride = g.stride(axis);
  const int k = g.axis_count(axis);
  const double inv2h = 1.0 / (2.0 * g.spacing(axis));
  const std::size_t block = stride * static_cast<std::size_t>(k);
  const std::size_t outer = g.node_count() / block;

  auto add = [&](std::size_t base, int row, int col, double coeff) {
    const std::size_t r = base + static_cast<std::size_t>(row) * stride;
    const std::size_t c = base + static_cast<std::size_t>(col) * stride;
    if (forward)
      out[r] += coeff * in[c];
    else
      out[c] += coeff * in[r];
  };

  for (std::size_t q = 0; q < outer; ++q) {
    for (std::size_t r = 0; r < stride; ++r) {
      const std::size_t base = q * block + r;
      // one-sided second-order rows at the two ends
      add(base, 0, 0, -3.0 * inv2h);
      add(base, 0, 1, 4.0 * inv2h);
      add(base, 0, 2, -1.0 * inv2h);
      for (int i = 1; i + 1 < k; ++i) {
        add(base, i, i - 1, -inv2h);
        add(base, i, i + 1, inv2h);
      }
      add(base, k - 1, k - 1, 3.0 * inv2h);
      add(base, k - 1, k - 2, -4.0 * inv2h);
      add(base, k - 1, k - 3, 1.0 * inv2h);
    }
  }
}

}  // namespace

std::vector<double> axis_derivative(std::span<const double> f, const Grid& g, int axis) {
  if (f.size() != g.node_count()) throw DomainError("field size does not match grid");
  std::vector<double> out(g.node_count(), 0.0);
  apply_axis_stencil(f, g, axis, /*forward=*/true, out);
  return out;
}

std::vector<double> axis_derivative_adjoint(std::span<const double> f, const Grid& g, int axis) {
  if (f.size() != g.node_count()) throw DomainError("field size does not match grid");
  std::vector<double> out(g.node_count(), 0.0);
  apply_axis_stencil(f, g, axis, /*forward=*/false, out);
  return out;
}

SplitGradient grad_split(const ScalarField& u, const Grid& g) {
  if (u.size() != g.node_count()) throw DomainError("field size does not match grid");
  SplitGradient grad(g.node_count(), g.dim_x(), g.dim_y());
  for (int a = 0; a < g.dim(); ++a) {
    const std::vector<double> d = axis_derivative(u.values, g, a);
    if (a < g.dim_x()) {
      for (std::size_t i = 0; i < g.node_count(); ++i) grad.x(i, a) = d[i];
    } else {
      const int j = a - g.dim_x();
      for (std::size_t i = 0; i < g.node_count(); ++i) grad.y(i, j) = d[i];
    }
  }
  return grad;
}

ScalarField make_bump(const Grid& g, std::span<const double> center, std::span<const double> radii,
                      double amplitude) {
  const int dim = g.dim();
  if (center.size() != static_cast<std::size_t>(dim) || radii.size() != static_cast<std::size_t>(dim))
    throw DomainError("bump center/radii must have one entry per axis");
  for (int a = 0; a < dim; ++a) {
    const AxisSpec& ax = g.spec().axes[static_cast<std::size_t>(a)];
    if (!(radii[a] > 0.0)) throw DomainError("bump radii must be positive");
    if (!(ax.lo < center[a] - radii[a] && center[a] + radii[a] < ax.hi))
      throw DomainError("bump support must lie strictly inside the domain (axis " +
                        std::to_string(a + 1) + ")");
  }

  ScalarField u(g.node_count(), 0.0, /*dirichlet_tag=*/true);
  constexpr double half_pi = std::numbers::pi / 2.0;
  for (std::size_t i = 0; i < g.node_count(); ++i) {
    double v = amplitude;
    for (int a = 0; a < dim; ++a) {
      const double t = (g.coordinate(i, a) - center[a]) / radii[a];
      if (std::fabs(t) >= 1.0) {
        v = 0.0;
        break;
      }
      const double c = std::cos(half_pi * t);
      v *= c * c;
    }
    u[i] = v;
  }
  return u;
}

}  // namespace grushin
