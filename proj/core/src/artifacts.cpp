// Copyright (c) 2026 the grushin project authors
// SPDX-License-Identifier: Apache-2.0

#include "grushin/artifacts.hpp"

#include <cstdio>
#include <fstream>

#include <json.hpp>

#include "grushin/version.hpp"

namespace grushin {

std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

ArtifactWriter::ArtifactWriter(std::filesystem::path directory, std::string subcommand,
                               const RunConfig& config)
    : dir_(std::move(directory)), subcommand_(std::move(subcommand)),
      config_echo_(config.to_json_text()) {
  std::filesystem::create_directories(dir_);
}

void ArtifactWriter::write_text(const std::string& filename, const std::string& text) {
  std::ofstream out(dir_ / filename, std::ios::binary);  // binary: LF endings everywhere
  if (!out) throw std::runtime_error("cannot write artifact: " + (dir_ / filename).string());
  out << text;
  files_.push_back(filename);
}

void ArtifactWriter::write_json(const std::string& filename, const std::string& json_text) {
  write_text(filename, json_text + "\n");
}

void ArtifactWriter::write_field_csv(const std::string& filename, const ScalarField& f,
                                     const Grid& g) {
  std::string text;
  for (int a = 0; a < g.dim_x(); ++a) text += "x" + std::to_string(a + 1) + ",";
  for (int b = 0; b < g.dim_y(); ++b) text += "y" + std::to_string(b + 1) + ",";
  text += "value\n";
  for (std::size_t i = 0; i < g.node_count(); ++i) {
    for (int a = 0; a < g.dim(); ++a) {
      text += format_g17(g.coordinate(i, a));
      text += ",";
    }
    text += format_g17(f[i]);
    text += "\n";
  }
  write_text(filename, text);
}

void ArtifactWriter::write_table_csv(const std::string& filename,
                                     const std::vector<std::string>& header,
                                     const std::vector<std::vector<double>>& rows) {
  std::string text;
  for (std::size_t c = 0; c < header.size(); ++c) {
    text += header[c];
    text += (c + 1 < header.size()) ? "," : "";
  }
  text += "\n";
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      text += format_g17(row[c]);
      text += (c + 1 < row.size()) ? "," : "";
    }
    text += "\n";
  }
  write_text(filename, text);
}

void ArtifactWriter::finalize(std::uint64_t seed, double wall_time_seconds) {
  nlohmann::json manifest;
  manifest["subcommand"] = subcommand_;
  manifest["version"] = version_string;
  manifest["seed"] = seed;
  manifest["wall_time_seconds"] = wall_time_seconds;
  manifest["config"] = nlohmann::json::parse(config_echo_);
  manifest["files"] = files_;
  std::ofstream out(dir_ / "manifest.json", std::ios::binary);
  if (!out) throw std::runtime_error("cannot write manifest in " + dir_.string());
  out << manifest.dump(2) << "\n";
}

}  // namespace grushin
