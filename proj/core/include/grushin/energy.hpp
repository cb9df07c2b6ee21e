// Copyright (c) 2026 the grushin project authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "grushin/varexp.hpp"

namespace grushin {

struct ProblemParams {
  double gamma = 0.5;   // degeneracy exponent, > 0
  double s = 1.2;       // reaction exponent
  double lambda = 1.0;  // eigenvalue parameter
};

/// The three positive summands of the energy and the reaction term;
/// total = gradient_term + a_plus_term + a_minus_term - reaction_term.
struct EnergyBreakdown {
  double gradient_term = 0.0;  // int (1/G) (|grad_x u|^G + |x|^gamma |grad_y u|^G)
  double a_plus_term = 0.0;    // int A |u|^{G+1} / (G+1)
  double a_minus_term = 0.0;   // int A |u|^{G-1} / (G-1)
  double reaction_term = 0.0;  // (lambda/s) int |u|^s
  double total = 0.0;
};

/// The four Luxemburg components of the space norm and their sum.
struct WNormBreakdown {
  double grad_x = 0.0;     // | |grad_x u| |_G
  double grad_y = 0.0;     // | |x|^{gamma/G} |grad_y u| |_G
  double u_a_plus = 0.0;   // | u A^{1/(G+1)} |_{G+1}
  double u_a_minus = 0.0;  // | u A^{1/(G-1)} |_{G-1}
  double sum = 0.0;
};

/// Degeneracy-aware coefficient A = |grad_x G| + |x|^gamma |grad_y G|.
WeightField weight_A(const ExponentField& G, double gamma, const Grid& g);

/// Caches the weights shared by every functional evaluation for one
/// (grid, exponent, params) triple. Holds references; keep grid and G alive.
class EnergyModel {
 public:
  EnergyModel(const Grid& g, const ExponentField& G, ProblemParams prm);

  const Grid& grid() const { return *grid_; }
  const ExponentField& exponent() const { return *G_; }
  const ProblemParams& params() const { return prm_; }
  const WeightField& weight_a() const { return A_; }

  EnergyBreakdown energy(const ScalarField& u) const;
  ScalarField gradient(const ScalarField& u) const;
  double weak_pairing(const ScalarField& u, const ScalarField& v) const;
  WNormBreakdown w_norm(const ScalarField& u) const;

  double s_value(const ScalarField& u) const;
  double t_value(const ScalarField& u) const;

  /// Quadrature-weighted discrete L2 dual proxy of a nodal gradient field:
  /// sqrt(sum_j qw_j g_j^2). Mesh-independent residual magnitude.
  double residual_norm(const ScalarField& gradient_field) const;

 private:
  const Grid* grid_;
  const ExponentField* G_;
  ProblemParams prm_;
  WeightField A_;
  std::vector<double> xgamma_;  // |x|^gamma per node
};

/// Free-function forms of the model operations.
EnergyBreakdown energy(const ScalarField& u, const ProblemParams& prm, const ExponentField& G,
                       const Grid& g);
ScalarField energy_gradient(const ScalarField& u, const ProblemParams& prm, const ExponentField& G,
                            const Grid& g);
double weak_pairing(const ScalarField& u, const ScalarField& v, const ProblemParams& prm,
                    const ExponentField& G, const Grid& g);
WNormBreakdown w_norm(const ScalarField& u, const ExponentField& G, double gamma, const Grid& g);
double S_value(const ScalarField& u, const ProblemParams& prm, const ExponentField& G, const Grid& g);
double T_value(const ScalarField& u, const ProblemParams& prm, const ExponentField& G, const Grid& g);

}  // namespace grushin
