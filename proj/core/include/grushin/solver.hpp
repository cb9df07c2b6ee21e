// Copyright (c) 2026 the grushin project authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>

#include "grushin/analysis.hpp"

namespace grushin {

struct ArmijoParams {
  double c1 = 1e-4;         // sufficient-decrease constant, in (0,1)
  double backtrack = 0.5;   // step shrink factor, in (0,1)
  double initial_step = 1.0;
};

struct SolveConfig {
  double rho = 8.0;       // ball radius, > 1
  int max_iter = 5000;
  double tol_rel = 1e-4;  // residual target relative to the initial residual
  double tol_abs = 0.0;   // absolute residual floor (optional)
  ArmijoParams armijo;
  std::uint64_t seed = 42;
  double nontriviality_floor = 1e-3;  // ||u*|| below this counts as the trivial solution
  double certificate_factor = 1e-4;  // weak-residual tolerance relative to the initial residual
  int certificate_count = 50;
  bool auto_expand_rho = true;  // double rho when descent stalls on the ball boundary
  double rho_max = 64.0;

  void validate() const;  // throws DomainError on rho <= 1 or nonpositive tolerances
};

/// Energy landscape along the ray t -> E(t phi).
struct ValleyReport {
  std::vector<double> t;
  std::vector<double> energy;
  std::optional<double> first_negative_t;  // smallest grid t with E < 0
  std::optional<double> negative_prefix_end;  // largest t of the initial E < 0 run
  std::optional<double> small_t_slope;     // log-log slope of -E over the 3 smallest t
  std::optional<double> t_best;            // argmin of E among negative samples
  double phi_norm = 0.0;
};

ValleyReport probe_valley(const ScalarField& phi, const ProblemParams& prm, const ExponentField& G,
                          const Grid& g, std::span<const double> t_grid);

/// Sampled minimum of E over the sphere ||u|| = rho, per rho.
struct MountainRow {
  double rho = 0.0;
  double min_energy = 0.0;
  double max_norm_violation = 0.0;  // max |(||u|| - rho)| / rho over the verified subsample
  int samples = 0;
};

std::vector<MountainRow> probe_mountain(const ProblemParams& prm, const ExponentField& G,
                                        const Grid& g, std::span<const double> rho_list, int samples,
                                        std::uint64_t seed);

struct IterationRecord {
  double energy = 0.0;
  double residual = 0.0;
  double norm = 0.0;  // ||u_k||
  double step = 0.0;  // accepted step length (0 for the initial record)
};

struct SolveReport {
  std::vector<IterationRecord> history;  // energy is non-increasing
  ScalarField solution;
  double m_inf = 0.0;            // E(u*)
  double initial_residual = 0.0;
  double final_residual = 0.0;
  double final_norm = 0.0;
  double rho_used = 0.0;
  int iterations = 0;
  bool converged = false;
  std::string flag;  // empty on clean convergence; otherwise the reason
};

/// Monotone projected descent (Armijo backtracking, Barzilai-Borwein step
/// seed, radial projection onto {||u|| <= rho}).
SolveReport minimize_in_ball(const ScalarField& init, const ProblemParams& prm,
                             const ExponentField& G, const Grid& g, const SolveConfig& cfg);

struct CertificateReport {
  bool passed = false;
  double tolerance = 0.0;      // absolute bound on |pairing| / ||v||
  double worst_value = 0.0;    // max |pairing| / ||v|| over the ensemble
  int tested = 0;
  int worst_index = -1;
};

struct EigenResult {
  double lambda = 0.0;
  ValleyReport valley;
  SolveReport solve;
  CertificateReport certificate;
  bool nontrivial = false;
  bool certified = false;
};

/// End-to-end eigenpair computation: valley probe -> negative-energy init ->
/// ball descent -> weak-residual certificate over seeded test functions.
/// lambda == 0 is the control case and returns the zero solution.
EigenResult solve_eigen(double lambda, const ProblemParams& prm_rest, const ExponentField& G,
                        const Grid& g, const SolveConfig& cfg,
                        std::span<const double> t_grid = {});

struct SweepRow {
  double lambda = 0.0;
  double m_inf = 0.0;
  double norm = 0.0;
  double residual = 0.0;
  bool converged = false;
  bool nontrivial = false;
  bool certified = false;
  std::string flag;
};

/// One independent, seed-reproducible solve per lambda; a failing row is
/// flagged, never fatal.
std::vector<SweepRow> sweep_lambda(std::span<const double> lambdas, const ProblemParams& prm_rest,
                                   const ExponentField& G, const Grid& g, const SolveConfig& cfg);

}  // namespace grushin
