// Copyright (c) 2026 the grushin project authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <optional>

#include "grushin/energy.hpp"
#include "grushin/rng.hpp"

namespace grushin {

/// Parameters of one compactly supported test bump, drawn in continuum
/// coordinates so the same bump can be realized on any resolution.
struct BumpSpec {
  std::vector<double> center;
  std::vector<double> radii;
  double amplitude = 1.0;
};

struct EnsembleSpec {
  int count = 500;
  std::uint64_t seed = 42;
  // of the axis half-width; the default floor keeps every bump resolvable
  // by the default 17-node axes (support >= 6 cells across)
  std::array<double, 2> radius_fraction{0.4, 0.8};
  std::array<double, 2> amplitude_range{0.25, 4.0};
};

BumpSpec sample_bump(const DomainSpec& domain, CounterRng& rng, const EnsembleSpec& ens);
ScalarField realize_bump(const BumpSpec& bump, const Grid& g);

/// The smallest constant mu with t^G |ln t| <= mu t^{G-1} (t^2 + 1) for all
/// t > 0, i.e. sup_{t>0} t |ln t| / (t^2 + 1); independent of G. Computed
/// once by golden-section maximization and cached.
double log_inequality_constant();

enum class EpsilonPolicy {
  half_bound,  // epsilon = 1 / (Gmax (||W1|| + ||W2||)), half the allowed supremum
  fixed,       // caller-supplied epsilon
  minimize,    // scan + golden-section minimization of beta over epsilon
};

/// Constants of the weighted-inequality proof and the resulting beta.
struct BetaConstants {
  double w1_sup = 0.0;   // sup over the closed box of |x|
  double w2_sup = 0.0;   // sup over the closed box of |y|
  double mu = 0.0;       // logarithmic-inequality constant
  double epsilon = 0.0;  // Young-inequality parameter, < 2/(Gmax (w1+w2))
  double beta = 0.0;     // (w1+w2) max(mu, Gmax/eps^{Gmin-1}) / (2 - eps Gmax (w1+w2))
};

BetaConstants beta_formula(const ExponentField& G, double gamma, const Grid& g,
                           EpsilonPolicy policy = EpsilonPolicy::half_bound, double fixed_epsilon = 0.0);

struct CknSides {
  double lhs = 0.0;   // int (1 + |x|^gamma) |u|^G
  double rhs1 = 0.0;  // int |grad_x u|^G + |x|^gamma |grad_y u|^G
  double rhs2 = 0.0;  // int |u|^{G-1} (1 + u^2) A
};

CknSides ckn_sides(const ScalarField& u, const ExponentField& G, double gamma, const Grid& g);

struct CknMember {
  CknSides sides;
  double ratio = 0.0;  // lhs / (rhs1 + rhs2), defined only when the denominator > 0
  bool ratio_defined = false;
  bool violation = false;
};

struct CknReport {
  BetaConstants constants;
  std::vector<CknMember> members;
  double beta_empirical = 0.0;  // max defined ratio
  int violations = 0;           // members with lhs > beta (rhs1+rhs2) (1+tolerance)
  double tolerance = 0.02;
};

/// Evaluate the weighted inequality on a seeded bump ensemble.
CknReport verify_ckn(const ExponentField& G, double gamma, const Grid& g, const EnsembleSpec& ens,
                     double tolerance = 0.02, EpsilonPolicy policy = EpsilonPolicy::half_bound);

/// Max interior residual of the two divergence identities, restricted to
/// nodes with |u| > threshold_fraction * max|u| (the log term is singular
/// where u vanishes).
struct DivergenceResidual {
  double res1 = 0.0;  // identity for the field x |u|^G
  double res2 = 0.0;  // identity for the field |x|^gamma |u|^G y
  double threshold_fraction = 0.01;
  std::vector<double> res1_field, res2_field;  // per-node |lhs - rhs| (0 where masked out)
  std::vector<std::uint8_t> mask;
};

DivergenceResidual divergence_identity_residual(const ScalarField& u, const ExponentField& G,
                                                double gamma, const Grid& g,
                                                double threshold_fraction = 0.01);

/// Quadrature of the discrete divergence of the two flux fields; both are
/// ~0 for compactly supported u. `scale` is the integral of the absolute
/// divergence, giving the violation a reference magnitude.
struct FluxDivergence {
  double integral1 = 0.0, scale1 = 0.0;
  double integral2 = 0.0, scale2 = 0.0;
};

FluxDivergence flux_divergence(const ScalarField& u, const ExponentField& G, double gamma,
                               const Grid& g);

/// |u|_{L^s} / ||u||_W for one test function; nan for u == 0.
double embedding_ratio(const ScalarField& u, double s, const ExponentField& G, double gamma,
                       const Grid& g);

struct EmbeddingReport {
  double sup_ratio = 0.0;
  double mean_ratio = 0.0;
  int count = 0;    // members with a defined ratio
  int skipped = 0;  // members with u == 0
  std::vector<double> ratios;
};

/// Empirical embedding-constant estimate over a seeded bump ensemble.
/// Requires admissibility in the embedding context.
EmbeddingReport estimate_embedding(const ExponentField& G, double s, double gamma, const Grid& g,
                                   const EnsembleSpec& ens);

}  // namespace grushin
