// Copyright (c) 2026 the grushin project authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "grushin/config.hpp"

namespace grushin {

/// Collects result files for one run and writes the manifest next to them.
/// CSV layout: header row, columns x1..xn,y1..ym,value for fields, LF line
/// endings, 17 significant digits. JSON artifacts use 2-space indentation.
class ArtifactWriter {
 public:
  ArtifactWriter(std::filesystem::path directory, std::string subcommand, const RunConfig& config);

  const std::filesystem::path& directory() const { return dir_; }

  void write_text(const std::string& filename, const std::string& text);
  void write_json(const std::string& filename, const std::string& json_text);

  /// Nodal field dump in lexicographic node order.
  void write_field_csv(const std::string& filename, const ScalarField& f, const Grid& g);

  /// Generic table: one row per record, 17-significant-digit numbers.
  void write_table_csv(const std::string& filename, const std::vector<std::string>& header,
                       const std::vector<std::vector<double>>& rows);

  /// Writes manifest.json (config echo, version, seed, wall time, file list).
  void finalize(std::uint64_t seed, double wall_time_seconds);

 private:
  std::filesystem::path dir_;
  std::string subcommand_;
  std::string config_echo_;
  std::vector<std::string> files_;
};

/// Format a double with 17 significant digits (shortest lossless form not
/// required; fixed %.17g keeps artifacts byte-stable).
std::string format_g17(double v);

}  // namespace grushin
