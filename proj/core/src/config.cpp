// Copyright (c) 2026 the grushin project authors
// SPDX-License-Identifier: Apache-2.0

#include "grushin/config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace grushin {

namespace {

using nlohmann::json;

template <class T>
void read_if(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

DomainSpec domain_from_json(const json& j) {
  DomainSpec d;
  read_if(j, "n", d.n);
  read_if(j, "m", d.m);
  int resolution = 17;
  read_if(j, "resolution", resolution);

  std::vector<std::array<double, 2>> bounds;
  if (j.contains("bounds")) bounds = j.at("bounds").get<std::vector<std::array<double, 2>>>();

  const int dim = d.n + d.m;
  d.axes.resize(static_cast<std::size_t>(std::max(dim, 0)));
  for (int a = 0; a < dim; ++a) {
    AxisSpec ax;
    if (!bounds.empty()) {
      if (bounds.size() != static_cast<std::size_t>(dim))
        throw ConfigError("domain.bounds must list one [lo, hi] pair per axis");
      ax.lo = bounds[static_cast<std::size_t>(a)][0];
      ax.hi = bounds[static_cast<std::size_t>(a)][1];
    }
    ax.count = resolution;
    d.axes[static_cast<std::size_t>(a)] = ax;
  }
  return d;
}

json domain_to_json(const DomainSpec& d) {
  json j;
  j["n"] = d.n;
  j["m"] = d.m;
  std::vector<std::array<double, 2>> bounds;
  for (const auto& ax : d.axes) bounds.push_back({ax.lo, ax.hi});
  j["bounds"] = bounds;
  j["resolution"] = d.axes.empty() ? 0 : d.axes.front().count;
  return j;
}

void solver_from_json(const json& j, SolveConfig& s) {
  read_if(j, "rho", s.rho);
  read_if(j, "max_iter", s.max_iter);
  read_if(j, "tol_rel", s.tol_rel);
  read_if(j, "tol_abs", s.tol_abs);
  read_if(j, "seed", s.seed);
  read_if(j, "nontriviality_floor", s.nontriviality_floor);
  read_if(j, "certificate_factor", s.certificate_factor);
  read_if(j, "certificate_count", s.certificate_count);
  read_if(j, "auto_expand_rho", s.auto_expand_rho);
  read_if(j, "rho_max", s.rho_max);
  if (j.contains("armijo")) {
    const json& a = j.at("armijo");
    read_if(a, "c1", s.armijo.c1);
    read_if(a, "backtrack", s.armijo.backtrack);
    read_if(a, "initial_step", s.armijo.initial_step);
  }
}

json solver_to_json(const SolveConfig& s) {
  json j;
  j["rho"] = s.rho;
  j["max_iter"] = s.max_iter;
  j["tol_rel"] = s.tol_rel;
  j["tol_abs"] = s.tol_abs;
  j["seed"] = s.seed;
  j["nontriviality_floor"] = s.nontriviality_floor;
  j["certificate_factor"] = s.certificate_factor;
  j["certificate_count"] = s.certificate_count;
  j["auto_expand_rho"] = s.auto_expand_rho;
  j["rho_max"] = s.rho_max;
  j["armijo"] = {{"c1", s.armijo.c1},
                 {"backtrack", s.armijo.backtrack},
                 {"initial_step", s.armijo.initial_step}};
  return j;
}

void ensemble_from_json(const json& j, EnsembleSpec& e) {
  read_if(j, "count", e.count);
  read_if(j, "seed", e.seed);
  if (j.contains("radius_range")) {
    auto r = j.at("radius_range").get<std::array<double, 2>>();
    e.radius_fraction = r;
  }
  if (j.contains("amplitude_range")) {
    auto r = j.at("amplitude_range").get<std::array<double, 2>>();
    e.amplitude_range = r;
  }
}

json ensemble_to_json(const EnsembleSpec& e) {
  json j;
  j["count"] = e.count;
  j["seed"] = e.seed;
  j["radius_range"] = e.radius_fraction;
  j["amplitude_range"] = e.amplitude_range;
  return j;
}

}  // namespace

RunConfig RunConfig::from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }

  RunConfig cfg;
  try {
    if (j.contains("domain")) cfg.domain = domain_from_json(j.at("domain"));
    else cfg.domain = domain_from_json(json::object());
    if (j.contains("exponent")) {
      const json& e = j.at("exponent");
      read_if(e, "expression", cfg.exponent_expression);
    }
    read_if(j, "gamma", cfg.gamma);
    if (j.contains("s")) cfg.s = j.at("s").get<double>();
    if (j.contains("lambda")) cfg.lambda = j.at("lambda").get<double>();
    if (j.contains("lambda_list")) cfg.lambda_list = j.at("lambda_list").get<std::vector<double>>();
    if (j.contains("solver")) solver_from_json(j.at("solver"), cfg.solver);
    if (j.contains("ensemble")) ensemble_from_json(j.at("ensemble"), cfg.ensemble);
    if (j.contains("probe")) {
      const json& p = j.at("probe");
      read_if(p, "t_min", cfg.t_min);
      read_if(p, "t_max", cfg.t_max);
      read_if(p, "t_count", cfg.t_count);
      if (p.contains("rho_list")) cfg.rho_list = p.at("rho_list").get<std::vector<double>>();
      read_if(p, "samples", cfg.mountain_samples);
    }
    if (j.contains("embed")) {
      const json& e = j.at("embed");
      read_if(e, "refine", cfg.embed_refine);
    }
    if (j.contains("output")) {
      const json& o = j.at("output");
      read_if(o, "directory", cfg.output_directory);
      read_if(o, "format", cfg.output_format);
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config field has the wrong type: ") + e.what());
  }

  if (cfg.output_format != "csv" && cfg.output_format != "json")
    throw ConfigError("output.format must be \"csv\" or \"json\"");
  if (cfg.t_count < 3) throw ConfigError("probe.t_count must be >= 3");
  if (!(cfg.t_min > 0.0 && cfg.t_min < cfg.t_max)) throw ConfigError("probe needs 0 < t_min < t_max");
  return cfg;
}

RunConfig RunConfig::from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return from_json_text(ss.str());
}

std::string RunConfig::to_json_text() const {
  json j;
  j["domain"] = domain_to_json(domain);
  j["exponent"] = {{"expression", exponent_expression}};
  j["gamma"] = gamma;
  if (s) j["s"] = *s;
  if (lambda) j["lambda"] = *lambda;
  if (!lambda_list.empty()) j["lambda_list"] = lambda_list;
  j["solver"] = solver_to_json(solver);
  j["ensemble"] = ensemble_to_json(ensemble);
  j["probe"] = {{"t_min", t_min},
                {"t_max", t_max},
                {"t_count", t_count},
                {"rho_list", rho_list},
                {"samples", mountain_samples}};
  j["embed"] = {{"refine", embed_refine}};
  j["output"] = {{"directory", output_directory}, {"format", output_format}};
  return j.dump(2);
}

void RunConfig::require_admissible(const ExponentField& G, AdmissibilityContext context) const {
  const AdmissibilityReport report =
      validate_admissibility(G, s, gamma, domain.dim(), context);
  if (!report.pass)
    throw AdmissibilityError("config violates the " + to_string(context) +
                                 " hypotheses: " + report.first_violation(),
                             report);
}

}  // namespace grushin
