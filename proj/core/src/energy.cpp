// Copyright (c) 2026 the grushin project authors
// SPDX-License-Identifier: Apache-2.0

#include "grushin/energy.hpp"

#include <cmath>

#include "grushin/rng.hpp"

namespace grushin {

namespace {

void require_dirichlet(const ScalarField& u, const Grid& g, const char* who) {
  if (u.size() != g.node_count()) throw DomainError(std::string(who) + ": field size does not match grid");
  if (!u.dirichlet) throw DomainError(std::string(who) + ": field must be Dirichlet-tagged");
}

// sign(u) * (|u|^{G} + |u|^{G-2}); continuous at 0 because G > 2.
inline double a_term_derivative(double u, double G) {
  if (u == 0.0) return 0.0;
  const double a = std::fabs(u);
  const double v = std::pow(a, G) + std::pow(a, G - 2.0);
  return u > 0.0 ? v : -v;
}

// sign(u) * |u|^{s-1}; continuous at 0 because s > 1.
inline double reaction_derivative(double u, double s) {
  if (u == 0.0) return 0.0;
  const double v = std::pow(std::fabs(u), s - 1.0);
  return u > 0.0 ? v : -v;
}

}  // namespace

WeightField weight_A(const ExponentField& G, double gamma, const Grid& g) {
  if (!(gamma > 0.0)) throw DomainError("gamma > 0 required");
  std::vector<double> a(g.node_count());
  const auto& xn = g.x_norms();
  const auto& gx = G.grad_x_norms();
  const auto& gy = G.grad_y_norms();
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = gx[i] + std::pow(xn[i], gamma) * gy[i];
  return WeightField(std::move(a));
}

EnergyModel::EnergyModel(const Grid& g, const ExponentField& G, ProblemParams prm)
    : grid_(&g), G_(&G), prm_(prm), A_(weight_A(G, prm.gamma, g)), xgamma_(g.node_count()) {
  const auto& xn = g.x_norms();
  for (std::size_t i = 0; i < xgamma_.size(); ++i) xgamma_[i] = std::pow(xn[i], prm_.gamma);
}

EnergyBreakdown EnergyModel::energy(const ScalarField& u) const {
  require_dirichlet(u, *grid_, "energy");
  const SplitGradient du = grad_split(u, *grid_);
  const auto& qw = grid_->quadrature_weights();
  const auto& Gv = G_->values();

  KahanSum grad_term, a_plus, a_minus, reaction;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double G = Gv[i];
    const double gx = du.x_norm(i);
    const double gy = du.y_norm(i);
    double t = 0.0;
    if (gx > 0.0) t += std::pow(gx, G);
    if (gy > 0.0) t += xgamma_[i] * std::pow(gy, G);
    grad_term.add(qw[i] * t / G);

    const double a = std::fabs(u[i]);
    if (a > 0.0 && A_[i] > 0.0) {
      a_plus.add(qw[i] * A_[i] * std::pow(a, G + 1.0) / (G + 1.0));
      a_minus.add(qw[i] * A_[i] * std::pow(a, G - 1.0) / (G - 1.0));
    }
    if (a > 0.0 && prm_.lambda != 0.0) reaction.add(qw[i] * std::pow(a, prm_.s));
  }

  EnergyBreakdown out;
  out.gradient_term = grad_term.value();
  out.a_plus_term = a_plus.value();
  out.a_minus_term = a_minus.value();
  out.reaction_term = prm_.lambda / prm_.s * reaction.value();
  out.total = out.gradient_term + out.a_plus_term + out.a_minus_term - out.reaction_term;
  return out;
}

ScalarField EnergyModel::gradient(const ScalarField& u) const {
  require_dirichlet(u, *grid_, "energy_gradient");
  const Grid& g = *grid_;
  const SplitGradient du = grad_split(u, g);
  const auto& qw = g.quadrature_weights();
  const auto& Gv = G_->values();
  const std::size_t nodes = g.node_count();

  // Exact derivative of the discrete energy ("discretize then differentiate"):
  // local terms plus the adjoint of each axis-difference operator applied to
  // the per-node flux coefficients.
  std::vector<double> partial(nodes, 0.0);
  for (std::size_t i = 0; i < nodes; ++i) {
    double local = A_[i] != 0.0 ? A_[i] * a_term_derivative(u[i], Gv[i]) : 0.0;
    if (prm_.lambda != 0.0) local -= prm_.lambda * reaction_derivative(u[i], prm_.s);
    partial[i] = qw[i] * local;
  }

  std::vector<double> flux(nodes);
  for (int axis = 0; axis < g.dim(); ++axis) {
    const bool is_x = axis < g.dim_x();
    for (std::size_t i = 0; i < nodes; ++i) {
      const double block = is_x ? du.x_norm(i) : du.y_norm(i);
      const double comp = is_x ? du.x(i, axis) : du.y(i, axis - g.dim_x());
      double c = 0.0;
      if (block > 0.0) {
        c = qw[i] * std::pow(block, Gv[i] - 2.0) * comp;
        if (!is_x) c *= xgamma_[i];
      }
      flux[i] = c;
    }
    const std::vector<double> scattered = axis_derivative_adjoint(flux, g, axis);
    for (std::size_t i = 0; i < nodes; ++i) partial[i] += scattered[i];
  }

  ScalarField out(nodes, 0.0, /*dirichlet_tag=*/true);
  const auto& boundary = g.boundary_mask();
  for (std::size_t i = 0; i < nodes; ++i) out[i] = boundary[i] ? 0.0 : partial[i] / qw[i];
  return out;
}

double EnergyModel::weak_pairing(const ScalarField& u, const ScalarField& v) const {
  require_dirichlet(u, *grid_, "weak_pairing");
  require_dirichlet(v, *grid_, "weak_pairing");
  const Grid& g = *grid_;
  const SplitGradient du = grad_split(u, g);
  const SplitGradient dv = grad_split(v, g);
  const auto& qw = g.quadrature_weights();
  const auto& Gv = G_->values();

  KahanSum sum;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double G = Gv[i];
    double t = 0.0;

    const double gx = du.x_norm(i);
    if (gx > 0.0) {
      double dot = 0.0;
      for (int a = 0; a < g.dim_x(); ++a) dot += du.x(i, a) * dv.x(i, a);
      t += std::pow(gx, G - 2.0) * dot;
    }
    const double gy = du.y_norm(i);
    if (gy > 0.0) {
      double dot = 0.0;
      for (int b = 0; b < g.dim_y(); ++b) dot += du.y(i, b) * dv.y(i, b);
      t += xgamma_[i] * std::pow(gy, G - 2.0) * dot;
    }
    if (A_[i] != 0.0) t += A_[i] * a_term_derivative(u[i], G) * v[i];
    if (prm_.lambda != 0.0) t -= prm_.lambda * reaction_derivative(u[i], prm_.s) * v[i];
    sum.add(qw[i] * t);
  }
  return sum.value();
}

WNormBreakdown EnergyModel::w_norm(const ScalarField& u) const {
  require_dirichlet(u, *grid_, "w_norm");
  const Grid& g = *grid_;
  const SplitGradient du = grad_split(u, g);
  const std::size_t nodes = g.node_count();
  const auto& Gv = G_->values();
  const WeightField ones = WeightField::ones(nodes);

  std::vector<double> f(nodes);
  WNormBreakdown out;

  for (std::size_t i = 0; i < nodes; ++i) f[i] = du.x_norm(i);
  out.grad_x = luxemburg_norm(f, Gv, ones, g);

  const auto& xn = g.x_norms();
  for (std::size_t i = 0; i < nodes; ++i)
    f[i] = std::pow(xn[i], prm_.gamma / Gv[i]) * du.y_norm(i);
  out.grad_y = luxemburg_norm(f, Gv, ones, g);

  const std::vector<double> p_plus = G_->shifted(1.0);
  for (std::size_t i = 0; i < nodes; ++i)
    f[i] = u[i] * std::pow(A_[i], 1.0 / p_plus[i]);
  out.u_a_plus = luxemburg_norm(f, p_plus, ones, g);

  const std::vector<double> p_minus = G_->shifted(-1.0);
  for (std::size_t i = 0; i < nodes; ++i)
    f[i] = u[i] * std::pow(A_[i], 1.0 / p_minus[i]);
  out.u_a_minus = luxemburg_norm(f, p_minus, ones, g);

  out.sum = out.grad_x + out.grad_y + out.u_a_plus + out.u_a_minus;
  return out;
}

double EnergyModel::s_value(const ScalarField& u) const {
  const EnergyBreakdown e = energy(u);
  return e.gradient_term + e.a_plus_term + e.a_minus_term;
}

double EnergyModel::t_value(const ScalarField& u) const {
  require_dirichlet(u, *grid_, "t_value");
  KahanSum sum;
  const auto& qw = grid_->quadrature_weights();
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double a = std::fabs(u[i]);
    if (a > 0.0) sum.add(qw[i] * std::pow(a, prm_.s));
  }
  return sum.value() / prm_.s;
}

double EnergyModel::residual_norm(const ScalarField& gradient_field) const {
  KahanSum sum;
  const auto& qw = grid_->quadrature_weights();
  for (std::size_t i = 0; i < gradient_field.size(); ++i)
    sum.add(qw[i] * gradient_field[i] * gradient_field[i]);
  return std::sqrt(sum.value());
}

EnergyBreakdown energy(const ScalarField& u, const ProblemParams& prm, const ExponentField& G,
                       const Grid& g) {
  return EnergyModel(g, G, prm).energy(u);
}

ScalarField energy_gradient(const ScalarField& u, const ProblemParams& prm, const ExponentField& G,
                            const Grid& g) {
  return EnergyModel(g, G, prm).gradient(u);
}

double weak_pairing(const ScalarField& u, const ScalarField& v, const ProblemParams& prm,
                    const ExponentField& G, const Grid& g) {
  return EnergyModel(g, G, prm).weak_pairing(u, v);
}

WNormBreakdown w_norm(const ScalarField& u, const ExponentField& G, double gamma, const Grid& g) {
  ProblemParams prm;
  prm.gamma = gamma;
  prm.lambda = 0.0;
  return EnergyModel(g, G, prm).w_norm(u);
}

double S_value(const ScalarField& u, const ProblemParams& prm, const ExponentField& G,
               const Grid& g) {
  return EnergyModel(g, G, prm).s_value(u);
}

double T_value(const ScalarField& u, const ProblemParams& prm, const ExponentField& G,
               const Grid& g) {
  return EnergyModel(g, G, prm).t_value(u);
}

}  // namespace grushin
