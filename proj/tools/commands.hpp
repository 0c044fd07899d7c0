#pragma once

#include <string>
#include <vector>

#include "config.hpp"

namespace tasep::cli {

struct Record {
  std::string label;
  double value = 0.0;
  double imag_residue = 0.0;
  double error = 0.0;
  std::string provenance;
  std::vector<std::string> warnings;
  double runtime_ms = 0.0;
  nlohmann::ordered_json detail = nlohmann::ordered_json::object();
  // verify rows only
  bool has_threshold = false;
  double threshold = 0.0;
};

struct RunOutput {
  std::vector<Record> records;
  bool quality_ok = true;
};

RunOutput run_command(const RunConfig& cfg);

std::string render_json(const RunConfig& cfg, const RunOutput& out);
std::string render_csv(const RunConfig& cfg, const RunOutput& out);

}  // namespace tasep::cli
