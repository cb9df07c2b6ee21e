// Copyright (c) 2026 the grushin project authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "grushin/solver.hpp"

namespace grushin {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One JSON document holding every run parameter.
struct RunConfig {
  DomainSpec domain;
  std::string exponent_expression = "2.5+0.2*sin(3*x1)*cos(2*y1)";
  double gamma = 0.5;
  std::optional<double> s;      // optional: not every subcommand needs it
  std::optional<double> lambda;
  std::vector<double> lambda_list;
  SolveConfig solver;
  EnsembleSpec ensemble;

  // valley/mountain probe controls
  double t_min = 1e-4;
  double t_max = 1.0;
  int t_count = 41;
  std::vector<double> rho_list{1, 2, 4, 8, 16, 32, 64};
  int mountain_samples = 200;
  bool embed_refine = true;  // `embed` repeats the ensemble on the halved mesh

  std::string output_directory = "out";
  std::string output_format = "csv";  // csv | json

  static RunConfig from_file(const std::filesystem::path& path);
  static RunConfig from_json_text(const std::string& text);
  std::string to_json_text() const;  // round-trips into the manifest

  /// Admissibility context needed by a subcommand; throws ConfigError with
  /// the violated hypothesis named when the config cannot serve it.
  void require_admissible(const ExponentField& G, AdmissibilityContext context) const;
};

}  // namespace grushin
