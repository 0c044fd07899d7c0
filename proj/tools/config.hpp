#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "tasep/limits.hpp"
#include "tasep/multipoint.hpp"

namespace tasep::cli {

struct ContourOverrides {
  int nodes = 64;
  int z_nodes = 32;
  double z_radius = 0.5;
  double z_outer_radius = 2.0;
  double lo = 0.08;
  double hi = 0.42;
};

struct RunConfig {
  std::string command;
  std::string initial = "step";
  ParticleConfig y;
  ObservationSet obs;
  LimitObservation limit_obs;
  LimitKind kind = LimitKind::step;
  std::vector<int> outside;
  std::optional<long long> period;
  std::string oracle = "ctmc";
  std::vector<double> ladder{8.0, 16.0, 32.0};
  ContourOverrides contour;
  double tol = 1e-8;
  std::uint64_t seed = 1;
  std::uint64_t samples = 100000;
  nlohmann::ordered_json canonical;

  ContourPlan plan() const;
};

struct CliOverrides {
  std::optional<double> tol;
  std::optional<int> nodes;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> samples;
};

RunConfig parse_config(const std::string& command, const nlohmann::json& doc, const CliOverrides& ov);

std::string config_hash(const nlohmann::ordered_json& canonical);

}  // namespace tasep::cli
