// Copyright (c) 2026 the grushin project authors
// SPDX-License-Identifier: Apache-2.0

#include <chrono>
#include <cstdio>
#include <iostream>
#include <optional>

#include <CLI11.hpp>
#include <json.hpp>

#include "grushin/artifacts.hpp"
#include "grushin/expr.hpp"
#include "grushin/version.hpp"

namespace {

using nlohmann::json;
using namespace grushin;

struct CliOptions {
  std::string config_path;
  std::optional<std::string> out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<int> resolution;
};

struct Workspace {
  RunConfig cfg;
  Grid grid;
  std::optional<ExponentField> exponent;  // not needed by grid-info

  const ExponentField& G() const { return *exponent; }
};

RunConfig load_config(const CliOptions& opt) {
  RunConfig cfg = RunConfig::from_file(opt.config_path);
  if (opt.out_dir) cfg.output_directory = *opt.out_dir;
  if (opt.seed) {
    cfg.solver.seed = *opt.seed;
    cfg.ensemble.seed = *opt.seed;
  }
  if (opt.resolution) {
    for (auto& ax : cfg.domain.axes) ax.count = *opt.resolution;
  }
  return cfg;
}

Workspace make_workspace(RunConfig cfg, bool need_exponent) {
  Grid grid = Grid::build(cfg.domain);
  std::optional<ExponentField> exponent;
  if (need_exponent) {
    const Expr expr = Expr::parse(cfg.exponent_expression, cfg.domain.n, cfg.domain.m);
    exponent.emplace(eval_on_grid(expr, grid), grid);
  }
  return Workspace{std::move(cfg), std::move(grid), std::move(exponent)};
}

json valley_to_json(const ValleyReport& v) {
  json j;
  j["phi_norm"] = v.phi_norm;
  if (v.first_negative_t) j["first_negative_t"] = *v.first_negative_t;
  if (v.negative_prefix_end) j["negative_prefix_end"] = *v.negative_prefix_end;
  if (v.small_t_slope) j["small_t_slope"] = *v.small_t_slope;
  if (v.t_best) j["t_best"] = *v.t_best;
  return j;
}

json certificate_to_json(const CertificateReport& c) {
  return json{{"passed", c.passed},
              {"tolerance", c.tolerance},
              {"worst_value", c.worst_value},
              {"worst_index", c.worst_index},
              {"tested", c.tested}};
}

json solve_to_json(const EigenResult& r) {
  json j;
  j["lambda"] = r.lambda;
  j["m_inf"] = r.solve.m_inf;
  j["initial_residual"] = r.solve.initial_residual;
  j["final_residual"] = r.solve.final_residual;
  j["final_norm"] = r.solve.final_norm;
  j["rho_used"] = r.solve.rho_used;
  j["iterations"] = r.solve.iterations;
  j["converged"] = r.solve.converged;
  j["nontrivial"] = r.nontrivial;
  j["certified"] = r.certified;
  j["flag"] = r.solve.flag;
  j["certificate"] = certificate_to_json(r.certificate);
  j["valley"] = valley_to_json(r.valley);
  return j;
}

int run_grid_info(const Workspace& ws, ArtifactWriter& writer) {
  const Grid& g = ws.grid;
  double weight_sum = 0.0;
  for (double w : g.quadrature_weights()) weight_sum += w;
  std::size_t boundary = 0;
  for (auto b : g.boundary_mask()) boundary += b;
  json j;
  j["n"] = g.dim_x();
  j["m"] = g.dim_y();
  j["node_count"] = g.node_count();
  j["volume"] = g.volume();
  j["quadrature_weight_sum"] = weight_sum;
  j["boundary_node_count"] = boundary;
  std::vector<double> spacings;
  for (int a = 0; a < g.dim(); ++a) spacings.push_back(g.spacing(a));
  j["spacings"] = spacings;
  writer.write_json("grid.json", j.dump(2));
  std::cout << j.dump(2) << "\n";
  return 0;
}

int run_verify_ckn(const Workspace& ws, ArtifactWriter& writer) {
  const CknReport report = verify_ckn(ws.G(), ws.cfg.gamma, ws.grid, ws.cfg.ensemble);

  json j;
  j["beta"] = {{"w1_sup", report.constants.w1_sup},
               {"w2_sup", report.constants.w2_sup},
               {"mu", report.constants.mu},
               {"epsilon", report.constants.epsilon},
               {"beta", report.constants.beta}};
  j["beta_empirical"] = report.beta_empirical;
  j["violations"] = report.violations;
  j["tolerance"] = report.tolerance;
  j["count"] = report.members.size();

  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < report.members.size(); ++i) {
    const CknMember& m = report.members[i];
    rows.push_back({static_cast<double>(i), m.sides.lhs, m.sides.rhs1, m.sides.rhs2,
                    m.ratio_defined ? m.ratio : 0.0, m.violation ? 1.0 : 0.0});
  }
  if (ws.cfg.output_format == "csv") {
    writer.write_table_csv("ckn_members.csv", {"index", "lhs", "rhs1", "rhs2", "ratio", "violation"},
                           rows);
  } else {
    j["members"] = rows;
  }
  writer.write_json("ckn.json", j.dump(2));
  std::cout << "verify-ckn: " << report.violations << " violations over " << report.members.size()
            << " bumps; beta_formula = " << report.constants.beta
            << ", beta_empirical = " << report.beta_empirical << "\n";
  return 0;
}

int run_embed(const Workspace& ws, ArtifactWriter& writer) {
  const double s = *ws.cfg.s;
  const EmbeddingReport base =
      estimate_embedding(ws.G(), s, ws.cfg.gamma, ws.grid, ws.cfg.ensemble);

  json j;
  j["s"] = s;
  j["gamma"] = ws.cfg.gamma;
  j["sup_ratio"] = base.sup_ratio;
  j["mean_ratio"] = base.mean_ratio;
  j["count"] = base.count;
  j["skipped"] = base.skipped;

  if (ws.cfg.embed_refine) {
    DomainSpec refined = ws.cfg.domain;
    for (auto& ax : refined.axes) ax.count = 2 * ax.count - 1;  // halved mesh, shared nodes
    const Grid fine = Grid::build(refined);
    const Expr expr = Expr::parse(ws.cfg.exponent_expression, refined.n, refined.m);
    const ExponentField exponent_fine(eval_on_grid(expr, fine), fine);
    const EmbeddingReport ref =
        estimate_embedding(exponent_fine, s, ws.cfg.gamma, fine, ws.cfg.ensemble);
    const double drift = std::fabs(ref.sup_ratio - base.sup_ratio) /
                         std::max(base.sup_ratio, ref.sup_ratio);
    j["refined"] = {{"resolution", refined.axes.front().count},
                    {"sup_ratio", ref.sup_ratio},
                    {"mean_ratio", ref.mean_ratio},
                    {"drift", drift}};
  }

  if (ws.cfg.output_format == "csv") {
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < base.ratios.size(); ++i)
      rows.push_back({static_cast<double>(i), base.ratios[i]});
    writer.write_table_csv("embedding_members.csv", {"index", "ratio"}, rows);
  } else {
    j["ratios"] = base.ratios;
  }
  writer.write_json("embedding.json", j.dump(2));
  std::cout << "embed: sup ratio " << base.sup_ratio << " over " << base.count << " bumps\n";
  return 0;
}

std::vector<double> t_grid_from(const RunConfig& cfg) {
  std::vector<double> t(static_cast<std::size_t>(cfg.t_count));
  for (int i = 0; i < cfg.t_count; ++i)
    t[static_cast<std::size_t>(i)] =
        cfg.t_min * std::pow(cfg.t_max / cfg.t_min, static_cast<double>(i) / (cfg.t_count - 1));
  return t;
}

int run_probe(const Workspace& ws, ArtifactWriter& writer) {
  ProblemParams prm{ws.cfg.gamma, *ws.cfg.s, *ws.cfg.lambda};

  // same seed direction the solver uses
  const DomainSpec& spec = ws.grid.spec();
  std::vector<double> center, radii;
  for (const auto& ax : spec.axes) {
    center.push_back(0.5 * (ax.lo + ax.hi));
    radii.push_back(0.25 * (ax.hi - ax.lo));
  }
  ScalarField phi = make_bump(ws.grid, center, radii, 1.0);
  const double norm = w_norm(phi, ws.G(), prm.gamma, ws.grid).sum;
  for (auto& v : phi.values) v *= 0.9 / norm;

  const std::vector<double> t_grid = t_grid_from(ws.cfg);
  const ValleyReport valley = probe_valley(phi, prm, ws.G(), ws.grid, t_grid);
  const std::vector<MountainRow> mountain =
      probe_mountain(prm, ws.G(), ws.grid, ws.cfg.rho_list, ws.cfg.mountain_samples,
                     ws.cfg.solver.seed);

  json j;
  j["valley"] = valley_to_json(valley);
  json mrows = json::array();
  for (const auto& row : mountain)
    mrows.push_back({{"rho", row.rho},
                     {"min_energy", row.min_energy},
                     {"samples", row.samples},
                     {"max_norm_violation", row.max_norm_violation}});
  j["mountain"] = mrows;

  if (ws.cfg.output_format == "csv") {
    std::vector<std::vector<double>> vrows;
    for (std::size_t i = 0; i < valley.t.size(); ++i) vrows.push_back({valley.t[i], valley.energy[i]});
    writer.write_table_csv("valley.csv", {"t", "energy"}, vrows);
    std::vector<std::vector<double>> rows;
    for (const auto& row : mountain)
      rows.push_back({row.rho, row.min_energy, static_cast<double>(row.samples),
                      row.max_norm_violation});
    writer.write_table_csv("mountain.csv", {"rho", "min_energy", "samples", "max_norm_violation"},
                           rows);
  } else {
    j["valley"]["t"] = valley.t;
    j["valley"]["energy"] = valley.energy;
  }
  writer.write_json("probe.json", j.dump(2));
  std::cout << "probe: valley "
            << (valley.first_negative_t ? "found (first negative t = " +
                                              format_g17(*valley.first_negative_t) + ")"
                                        : "absent")
            << "\n";
  return 0;
}

int run_solve(const Workspace& ws, ArtifactWriter& writer) {
  ProblemParams prm{ws.cfg.gamma, *ws.cfg.s, *ws.cfg.lambda};

  const std::vector<double> t_grid = t_grid_from(ws.cfg);
  const EigenResult result =
      solve_eigen(*ws.cfg.lambda, prm, ws.G(), ws.grid, ws.cfg.solver, t_grid);

  json j = solve_to_json(result);
  if (ws.cfg.output_format == "csv") {
    std::vector<std::vector<double>> rows;
    for (std::size_t k = 0; k < result.solve.history.size(); ++k) {
      const IterationRecord& it = result.solve.history[k];
      rows.push_back({static_cast<double>(k), it.energy, it.residual, it.norm, it.step});
    }
    writer.write_table_csv("history.csv", {"iteration", "energy", "residual", "norm", "step"}, rows);
    writer.write_field_csv("solution.csv", result.solve.solution, ws.grid);
  } else {
    json hist = json::array();
    for (const auto& it : result.solve.history)
      hist.push_back({{"energy", it.energy},
                      {"residual", it.residual},
                      {"norm", it.norm},
                      {"step", it.step}});
    j["history"] = hist;
    j["solution"] = result.solve.solution.values;
  }
  writer.write_json("solve.json", j.dump(2));

  std::cout << "solve: lambda = " << result.lambda << ", m_inf = " << result.solve.m_inf
            << ", ||u*|| = " << result.solve.final_norm
            << (result.certified ? ", certified" : ", NOT certified");
  if (!result.solve.flag.empty()) std::cout << " [" << result.solve.flag << "]";
  std::cout << "\n";
  if (!result.solve.converged &&
      result.solve.flag.find("trivial basin") != std::string::npos)
    std::cout << "hint: increase lambda or the valley scan range (probe.t_max)\n";
  return 0;
}

int run_sweep(const Workspace& ws, ArtifactWriter& writer) {
  std::vector<double> lambdas = ws.cfg.lambda_list;
  if (lambdas.empty() && ws.cfg.lambda) lambdas.push_back(*ws.cfg.lambda);
  if (lambdas.empty()) throw ConfigError("sweep requires lambda_list (or lambda)");
  ProblemParams prm{ws.cfg.gamma, *ws.cfg.s, 0.0};

  const std::vector<SweepRow> rows =
      sweep_lambda(lambdas, prm, ws.G(), ws.grid, ws.cfg.solver);

  json jrows = json::array();
  std::vector<std::vector<double>> csv;
  for (const auto& row : rows) {
    jrows.push_back({{"lambda", row.lambda},
                     {"m_inf", row.m_inf},
                     {"norm", row.norm},
                     {"residual", row.residual},
                     {"converged", row.converged},
                     {"nontrivial", row.nontrivial},
                     {"certified", row.certified},
                     {"flag", row.flag}});
    csv.push_back({row.lambda, row.m_inf, row.norm, row.residual, row.converged ? 1.0 : 0.0,
                   row.nontrivial ? 1.0 : 0.0, row.certified ? 1.0 : 0.0});
  }
  json j;
  j["rows"] = jrows;
  writer.write_json("sweep.json", j.dump(2));
  if (ws.cfg.output_format == "csv")
    writer.write_table_csv(
        "sweep.csv", {"lambda", "m_inf", "norm", "residual", "converged", "nontrivial", "certified"},
        csv);
  std::cout << "sweep: " << rows.size() << " rows\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Double-phase degenerate operator toolkit: weighted-inequality checks, "
               "embedding estimates, and nonlinear eigenpair solves on tensor grids"};
  app.fallthrough();
  app.set_version_flag("--version", std::string(version_string));

  CliOptions opt;
  app.add_option("--config", opt.config_path, "JSON run configuration")->required();
  app.add_option("--out", opt.out_dir, "override output.directory");
  app.add_option("--seed", opt.seed, "override every configured seed");
  app.add_option("--resolution", opt.resolution, "override nodes per axis");

  std::string subcommand;
  for (const char* name : {"grid-info", "verify-ckn", "embed", "probe", "solve", "sweep"})
    app.add_subcommand(name)->callback([&subcommand, name] { subcommand = name; });
  app.require_subcommand(1);

  CLI11_PARSE(app, argc, argv);

  const auto t0 = std::chrono::steady_clock::now();

  // Phase 1: configuration and hypothesis validation -> exit 1 on failure.
  std::optional<Workspace> ws;
  std::optional<ArtifactWriter> writer;
  try {
    RunConfig cfg = load_config(opt);
    ws.emplace(make_workspace(std::move(cfg), subcommand != "grid-info"));

    // subcommand-specific hypothesis validation happens before any
    // computation, so an inadmissible config never starts a run
    if (subcommand == "verify-ckn") ws->cfg.require_admissible(ws->G(), AdmissibilityContext::ckn);
    if (subcommand == "embed") ws->cfg.require_admissible(ws->G(), AdmissibilityContext::embedding);
    if (subcommand == "probe" || subcommand == "solve" || subcommand == "sweep")
      ws->cfg.require_admissible(ws->G(), AdmissibilityContext::eigen);
    if (subcommand == "probe" || subcommand == "solve") {
      if (!ws->cfg.lambda) throw ConfigError(subcommand + " requires lambda");
      if (!(*ws->cfg.lambda >= 0.0)) throw ConfigError("lambda must be >= 0");
    }
    if (subcommand == "sweep" && ws->cfg.lambda_list.empty() && !ws->cfg.lambda)
      throw ConfigError("sweep requires lambda_list (or lambda)");

    writer.emplace(ws->cfg.output_directory, subcommand, ws->cfg);
  } catch (const std::exception& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 1;
  }

  // Phase 2: computation -> exit 2 on runtime failure.
  try {
    int rc = 0;
    if (subcommand == "grid-info") rc = run_grid_info(*ws, *writer);
    else if (subcommand == "verify-ckn") rc = run_verify_ckn(*ws, *writer);
    else if (subcommand == "embed") rc = run_embed(*ws, *writer);
    else if (subcommand == "probe") rc = run_probe(*ws, *writer);
    else if (subcommand == "solve") rc = run_solve(*ws, *writer);
    else if (subcommand == "sweep") rc = run_sweep(*ws, *writer);

    const auto t1 = std::chrono::steady_clock::now();
    writer->finalize(ws->cfg.solver.seed,
                     std::chrono::duration<double>(t1 - t0).count());
    return rc;
  } catch (const std::exception& e) {
    std::cerr << "runtime error: " << e.what() << "\n";
    return 2;
  }
}
