// Copyright (c) 2026 the grushin project authors
// SPDX-License-Identifier: Apache-2.0

#include "grushin/solver.hpp"

#include <algorithm>
#include <cmath>

namespace grushin {

namespace {

double weighted_dot(const std::vector<double>& a, const std::vector<double>& b, const Grid& g) {
  KahanSum sum;
  const auto& qw = g.quadrature_weights();
  for (std::size_t i = 0; i < a.size(); ++i) sum.add(qw[i] * a[i] * b[i]);
  return sum.value();
}

std::vector<double> default_t_grid(double t_min, double t_max, int count) {
  std::vector<double> t(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i)
    t[static_cast<std::size_t>(i)] =
        t_min * std::pow(t_max / t_min, static_cast<double>(i) / (count - 1));
  return t;
}

ScalarField scaled(const ScalarField& u, double factor) {
  ScalarField out = u;
  for (auto& v : out.values) v *= factor;
  return out;
}

}  // namespace

void SolveConfig::validate() const {
  if (!(rho > 1.0)) throw DomainError("solver ball radius rho must be > 1");
  if (!(tol_rel > 0.0)) throw DomainError("solver tol_rel must be > 0");
  if (tol_abs < 0.0) throw DomainError("solver tol_abs must be >= 0");
  if (max_iter < 0) throw DomainError("solver max_iter must be >= 0");
  if (!(armijo.c1 > 0.0 && armijo.c1 < 1.0)) throw DomainError("Armijo c1 must be in (0,1)");
  if (!(armijo.backtrack > 0.0 && armijo.backtrack < 1.0))
    throw DomainError("Armijo backtrack factor must be in (0,1)");
  if (!(armijo.initial_step > 0.0)) throw DomainError("Armijo initial step must be > 0");
  if (!(nontriviality_floor > 0.0)) throw DomainError("nontriviality floor must be > 0");
  if (!(certificate_factor > 0.0)) throw DomainError("certificate factor must be > 0");
  if (certificate_count < 1) throw DomainError("certificate count must be >= 1");
  if (auto_expand_rho && !(rho_max >= rho)) throw DomainError("rho_max must be >= rho");
}

ValleyReport probe_valley(const ScalarField& phi, const ProblemParams& prm, const ExponentField& G,
                          const Grid& g, std::span<const double> t_grid) {
  if (phi.size() != g.node_count()) throw DomainError("field size does not match grid");
  if (!phi.dirichlet) throw DomainError("probe_valley requires a Dirichlet-tagged phi");
  if (!(prm.lambda >= 0.0)) throw DomainError("lambda must be >= 0");
  if (!(1.0 < prm.s && prm.s < G.min() - 1.0))
    throw DomainError("valley probe requires 1 < s < Gmin - 1 (s = " + std::to_string(prm.s) +
                      ", Gmin - 1 = " + std::to_string(G.min() - 1.0) + ")");

  bool any_positive = false;
  for (std::size_t i = 0; i < phi.size(); ++i) {
    if (phi[i] < 0.0) throw DomainError("valley probe requires phi >= 0");
    if (phi[i] > 0.0) any_positive = true;
  }
  if (!any_positive) throw DomainError("valley probe requires phi != 0");

  const EnergyModel model(g, G, prm);
  ValleyReport report;
  report.phi_norm = model.w_norm(phi).sum;
  if (!(report.phi_norm < 1.0))
    throw DomainError("valley probe requires ||phi|| < 1 (got " + std::to_string(report.phi_norm) + ")");

  report.t.assign(t_grid.begin(), t_grid.end());
  std::sort(report.t.begin(), report.t.end());
  report.energy.resize(report.t.size());

  double best_energy = 0.0;
  bool prefix_alive = true;
  for (std::size_t k = 0; k < report.t.size(); ++k) {
    const double t = report.t[k];
    if (!(t > 0.0)) throw DomainError("valley t-grid must be positive");
    const double e = model.energy(scaled(phi, t)).total;
    report.energy[k] = e;
    if (e < 0.0) {
      if (!report.first_negative_t) report.first_negative_t = t;
      if (prefix_alive && (k == 0 || report.negative_prefix_end))
        report.negative_prefix_end = t;
      if (e < best_energy) {
        best_energy = e;
        report.t_best = t;
      }
    }
    if (k == 0 && e >= 0.0) prefix_alive = false;
    if (e >= 0.0) prefix_alive = false;
  }

  // log-log slope of -E over the three smallest grid points
  if (report.t.size() >= 3 && report.energy[0] < 0.0 && report.energy[1] < 0.0 &&
      report.energy[2] < 0.0) {
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (int k = 0; k < 3; ++k) {
      const double lx = std::log(report.t[static_cast<std::size_t>(k)]);
      const double ly = std::log(-report.energy[static_cast<std::size_t>(k)]);
      sx += lx;
      sy += ly;
      sxx += lx * lx;
      sxy += lx * ly;
    }
    report.small_t_slope = (3.0 * sxy - sx * sy) / (3.0 * sxx - sx * sx);
  }
  return report;
}

std::vector<MountainRow> probe_mountain(const ProblemParams& prm, const ExponentField& G,
                                        const Grid& g, std::span<const double> rho_list, int samples,
                                        std::uint64_t seed) {
  if (samples < 1) throw DomainError("mountain probe needs at least one sample");
  for (double rho : rho_list)
    if (!(rho > 1.0)) throw DomainError("mountain probe requires each rho > 1");

  const EnergyModel model(g, G, prm);
  EnsembleSpec ens;
  ens.seed = seed;

  std::vector<MountainRow> rows;
  rows.reserve(rho_list.size());
  for (std::size_t r = 0; r < rho_list.size(); ++r) {
    const double rho = rho_list[r];
    CounterRng rng(seed, "mountain[" + std::to_string(r) + "]");
    MountainRow row;
    row.rho = rho;
    row.samples = samples;
    bool first = true;
    for (int k = 0; k < samples; ++k) {
      const BumpSpec bump = sample_bump(g.spec(), rng, ens);
      ScalarField u = realize_bump(bump, g);
      const double norm = model.w_norm(u).sum;
      if (norm == 0.0) continue;
      u = scaled(u, rho / norm);
      // homogeneity makes the rescale exact; verify on a subsample
      if (k < 8) {
        const double achieved = model.w_norm(u).sum;
        row.max_norm_violation = std::max(row.max_norm_violation, std::fabs(achieved - rho) / rho);
      }
      const double e = model.energy(u).total;
      if (first || e < row.min_energy) {
        row.min_energy = e;
        first = false;
      }
    }
    rows.push_back(row);
  }
  return rows;
}

SolveReport minimize_in_ball(const ScalarField& init, const ProblemParams& prm,
                             const ExponentField& G, const Grid& g, const SolveConfig& cfg) {
  cfg.validate();
  if (!init.dirichlet) throw DomainError("minimize_in_ball requires a Dirichlet-tagged init");
  const EnergyModel model(g, G, prm);

  SolveReport report;
  report.rho_used = cfg.rho;

  ScalarField u = init;
  double norm_u = model.w_norm(u).sum;
  if (norm_u > cfg.rho * (1.0 + 1e-12))
    throw DomainError("minimize_in_ball requires ||init|| <= rho");

  double e_u = model.energy(u).total;
  ScalarField grad = model.gradient(u);
  double res = model.residual_norm(grad);
  report.initial_residual = res;
  report.history.push_back(IterationRecord{e_u, res, norm_u, 0.0});

  const double tol = std::max(cfg.tol_rel * res, cfg.tol_abs);
  constexpr double step_floor = 1e-18;

  ScalarField u_prev = u;
  ScalarField grad_prev = grad;
  double alpha_prev = cfg.armijo.initial_step;
  bool have_prev = false;

  int k = 0;
  for (; k < cfg.max_iter; ++k) {
    if (res <= tol) {
      report.converged = true;
      break;
    }

    // Barzilai-Borwein step seed (weighted inner products), Armijo safeguard.
    double alpha = cfg.armijo.initial_step;
    if (have_prev) {
      std::vector<double> sdiff(u.size()), ydiff(u.size());
      for (std::size_t i = 0; i < u.size(); ++i) {
        sdiff[i] = u[i] - u_prev[i];
        ydiff[i] = grad[i] - grad_prev[i];
      }
      const double ss = weighted_dot(sdiff, sdiff, g);
      const double sy = weighted_dot(sdiff, ydiff, g);
      if (sy > 0.0 && std::isfinite(ss / sy))
        alpha = std::clamp(ss / sy, 1e-10, 1e10);
      else
        alpha = alpha_prev / cfg.armijo.backtrack;
    }

    const double decrease_scale = cfg.armijo.c1 * res * res;
    bool accepted = false;
    ScalarField candidate;
    double e_c = 0.0, norm_c = 0.0;
    while (alpha >= step_floor) {
      candidate = u;
      for (std::size_t i = 0; i < u.size(); ++i) candidate[i] = u[i] - alpha * grad[i];
      e_c = model.energy(candidate).total;
      if (e_c <= e_u - decrease_scale * alpha) {
        norm_c = model.w_norm(candidate).sum;
        if (norm_c > cfg.rho) {
          // radial projection back onto the ball; re-check the decrease
          candidate = scaled(candidate, cfg.rho / norm_c);
          e_c = model.energy(candidate).total;
          if (!(e_c <= e_u - decrease_scale * alpha)) {
            alpha *= cfg.armijo.backtrack;
            continue;
          }
          norm_c = model.w_norm(candidate).sum;
        }
        accepted = true;
        break;
      }
      alpha *= cfg.armijo.backtrack;
    }

    if (!accepted) {
      report.flag = e_u >= 0.0 ? "trivial basin (line search stalled with E >= 0)"
                               : "line search underflow";
      break;
    }

    u_prev = std::move(u);
    grad_prev = grad;
    u = std::move(candidate);
    e_u = e_c;
    norm_u = norm_c;
    grad = model.gradient(u);
    res = model.residual_norm(grad);
    alpha_prev = alpha;
    have_prev = true;
    report.history.push_back(IterationRecord{e_u, res, norm_u, alpha});
  }

  if (!report.converged && res <= tol) report.converged = true;
  if (!report.converged && report.flag.empty()) report.flag = "max_iter reached without convergence";

  report.iterations = static_cast<int>(report.history.size()) - 1;
  report.solution = std::move(u);
  report.m_inf = e_u;
  report.final_residual = res;
  report.final_norm = norm_u;
  return report;
}

namespace {

CertificateReport run_certificate(const ScalarField& solution, const EnergyModel& model,
                                  const SolveConfig& cfg, double initial_residual) {
  CertificateReport cert;
  cert.tolerance = cfg.certificate_factor * initial_residual;
  cert.tested = cfg.certificate_count;

  EnsembleSpec ens;
  ens.seed = cfg.seed;
  CounterRng rng(cfg.seed, "certificate");
  const Grid& g = model.grid();

  cert.passed = true;
  for (int k = 0; k < cfg.certificate_count; ++k) {
    const BumpSpec bump = sample_bump(g.spec(), rng, ens);
    const ScalarField v = realize_bump(bump, g);
    const double vnorm = model.w_norm(v).sum;
    if (vnorm == 0.0) continue;
    const double value = std::fabs(model.weak_pairing(solution, v)) / vnorm;
    if (value > cert.worst_value) {
      cert.worst_value = value;
      cert.worst_index = k;
    }
    if (value > cert.tolerance) cert.passed = false;
  }
  return cert;
}

}  // namespace

EigenResult solve_eigen(double lambda, const ProblemParams& prm_rest, const ExponentField& G,
                        const Grid& g, const SolveConfig& cfg, std::span<const double> t_grid) {
  cfg.validate();
  if (!(lambda >= 0.0)) throw DomainError("lambda must be >= 0 (lambda = 0 is the trivial control)");

  ProblemParams prm = prm_rest;
  prm.lambda = lambda;
  const AdmissibilityReport adm =
      validate_admissibility(G, prm.s, prm.gamma, g.dim(), AdmissibilityContext::eigen);
  if (!adm.pass)
    throw AdmissibilityError("eigen solve requires admissible hypotheses: " + adm.first_violation(),
                             adm);

  EigenResult result;
  result.lambda = lambda;

  // Seed direction: centered bump with half-width support, rescaled to
  // ||phi|| = 0.9 < 1 by norm homogeneity.
  const DomainSpec& spec = g.spec();
  std::vector<double> center(static_cast<std::size_t>(spec.dim()));
  std::vector<double> radii(static_cast<std::size_t>(spec.dim()));
  for (int a = 0; a < spec.dim(); ++a) {
    const AxisSpec& ax = spec.axes[static_cast<std::size_t>(a)];
    center[static_cast<std::size_t>(a)] = 0.5 * (ax.lo + ax.hi);
    radii[static_cast<std::size_t>(a)] = 0.25 * (ax.hi - ax.lo);
  }
  ScalarField phi = make_bump(g, center, radii, 1.0);
  {
    const double norm = w_norm(phi, G, prm.gamma, g).sum;
    phi = scaled(phi, 0.9 / norm);
    phi.dirichlet = true;
  }

  std::vector<double> grid_storage;
  if (t_grid.empty()) {
    grid_storage = default_t_grid(1e-4, 1.0, 41);
    t_grid = grid_storage;
  }
  result.valley = probe_valley(phi, prm, G, g, t_grid);

  ScalarField init;
  if (result.valley.t_best) {
    init = scaled(phi, *result.valley.t_best);
  } else {
    init = ScalarField(g.node_count(), 0.0, /*dirichlet_tag=*/true);
  }

  SolveConfig local = cfg;
  for (;;) {
    result.solve = minimize_in_ball(init, prm, G, g, local);
    const bool boundary_stuck = !result.solve.converged &&
                                result.solve.final_norm >= 0.999 * local.rho;
    if (boundary_stuck && local.auto_expand_rho && local.rho * 2.0 <= local.rho_max) {
      local.rho *= 2.0;  // the sphere estimate guarantees a big enough radius exists
      continue;
    }
    break;
  }

  const EnergyModel model(g, G, prm);
  result.certificate = run_certificate(result.solve.solution, model, local,
                                       result.solve.initial_residual);
  result.nontrivial = result.solve.final_norm >= cfg.nontriviality_floor;
  result.certified = result.solve.converged && result.certificate.passed;
  return result;
}

std::vector<SweepRow> sweep_lambda(std::span<const double> lambdas, const ProblemParams& prm_rest,
                                   const ExponentField& G, const Grid& g, const SolveConfig& cfg) {
  std::vector<SweepRow> rows;
  rows.reserve(lambdas.size());
  for (double lambda : lambdas) {
    SweepRow row;
    row.lambda = lambda;
    try {
      const EigenResult r = solve_eigen(lambda, prm_rest, G, g, cfg);
      row.m_inf = r.solve.m_inf;
      row.norm = r.solve.final_norm;
      row.residual = r.solve.final_residual;
      row.converged = r.solve.converged;
      row.nontrivial = r.nontrivial;
      row.certified = r.certified;
      row.flag = r.solve.flag;
    } catch (const std::exception& e) {
      row.flag = std::string("error: ") + e.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace grushin
