#include "config.hpp"

#include <cstdio>
#include <set>

#include "tasep/errors.hpp"

namespace tasep::cli {

namespace {

const std::set<std::string> kKeys{"command", "initial",  "observations", "limit_observations", "kind",
                                  "outside", "period",   "oracle",       "ladder",             "contour",
                                  "tol",     "seed",     "samples"};

template <class T>
T get_or(const nlohmann::json& j, const char* key, T fallback) {
  return j.contains(key) ? j.at(key).get<T>() : fallback;
}

ParticleConfig parse_initial(const nlohmann::json& doc, std::string& kind) {
  if (!doc.contains("initial")) throw Invalid("config needs an initial condition");
  const auto& ic = doc.at("initial");
  kind = ic.at("type").get<std::string>();
  if (kind == "step") return ParticleConfig::step(ic.at("n").get<int>());
  if (kind == "flat") return ParticleConfig::flat(ic.at("n").get<int>());
  if (kind == "explicit") {
    ParticleConfig y{ic.at("y").get<std::vector<long long>>()};
    y.validate();
    return y;
  }
  throw Invalid("initial.type must be step, flat or explicit");
}

ObservationSet parse_obs(const nlohmann::json& arr) {
  ObservationSet obs;
  for (const auto& o : arr) {
    const double t = o.at("t").get<double>();
    if (o.contains("height")) {
      const auto pc = height_to_particle(o.at("site").get<long long>(), o.at("height").get<long long>());
      obs.points.push_back({pc.k, pc.threshold, t});
    } else {
      obs.points.push_back({o.at("k").get<int>(), o.at("a").get<long long>(), t});
    }
  }
  obs.validate();
  return obs;
}

}  // namespace

ContourPlan RunConfig::plan() const {
  ContourPlan p;
  p.circles = NestedCircleSystem::standard(obs.m(), contour.lo, contour.hi);
  p.nodes = contour.nodes;
  p.z_nodes = contour.z_nodes;
  p.z_radius = contour.z_radius;
  p.z_outer_radius = contour.z_outer_radius;
  p.validate(obs.m());
  return p;
}

RunConfig parse_config(const std::string& command, const nlohmann::json& doc, const CliOverrides& ov) {
  if (!doc.is_object()) throw Invalid("config must be a JSON object");
  for (const auto& [key, value] : doc.items())
    if (!kKeys.contains(key)) throw Invalid("unknown config key: " + key);
  RunConfig c;
  c.command = command;
  const bool needs_y = command == "prob" || command == "signed" || command == "periodic" || command == "mc" ||
                       command == "oracle";
  const bool needs_limit = command == "limit" || command == "converge";
  if (needs_y) {
    c.y = parse_initial(doc, c.initial);
    if (!doc.contains("observations")) throw Invalid("config needs observations");
    c.obs = parse_obs(doc.at("observations"));
    c.obs.validate_for(c.y);
  }
  if (needs_limit) {
    if (!doc.contains("limit_observations")) throw Invalid("config needs limit_observations");
    for (const auto& o : doc.at("limit_observations"))
      c.limit_obs.points.push_back({o.at("x").get<double>(), o.at("tau").get<double>(), o.at("h").get<double>()});
    c.limit_obs.validate();
    const auto kind = get_or<std::string>(doc, "kind", "step");
    if (kind != "step" && kind != "flat") throw Invalid("kind must be step or flat");
    c.kind = kind == "step" ? LimitKind::step : LimitKind::flat;
  }
  c.outside = get_or<std::vector<int>>(doc, "outside", {});
  if (doc.contains("period")) c.period = doc.at("period").get<long long>();
  if (command == "periodic" && !c.period) throw Invalid("periodic command needs period");
  c.oracle = get_or<std::string>(doc, "oracle", "ctmc");
  if (c.oracle != "ctmc" && c.oracle != "poisson") throw Invalid("oracle must be ctmc or poisson");
  c.ladder = get_or<std::vector<double>>(doc, "ladder", c.ladder);
  if (doc.contains("contour")) {
    const auto& k = doc.at("contour");
    for (const auto& [key, value] : k.items())
      if (key != "nodes" && key != "z_nodes" && key != "z_radius" && key != "z_outer_radius" && key != "lo" &&
          key != "hi")
        throw Invalid("unknown contour key: " + key);
    c.contour.nodes = get_or<int>(k, "nodes", c.contour.nodes);
    c.contour.z_nodes = get_or<int>(k, "z_nodes", c.contour.z_nodes);
    c.contour.z_radius = get_or<double>(k, "z_radius", c.contour.z_radius);
    c.contour.z_outer_radius = get_or<double>(k, "z_outer_radius", c.contour.z_outer_radius);
    c.contour.lo = get_or<double>(k, "lo", c.contour.lo);
    c.contour.hi = get_or<double>(k, "hi", c.contour.hi);
  }
  c.tol = get_or<double>(doc, "tol", c.tol);
  c.seed = get_or<std::uint64_t>(doc, "seed", c.seed);
  c.samples = get_or<std::uint64_t>(doc, "samples", c.samples);
  if (ov.tol) c.tol = *ov.tol;
  if (ov.nodes) c.contour.nodes = *ov.nodes;
  if (ov.seed) c.seed = *ov.seed;
  if (ov.samples) c.samples = *ov.samples;
  if (!(c.tol > 0.0)) throw Invalid("tol must be positive");
  if (needs_y) (void)c.plan();

  nlohmann::ordered_json canon = nlohmann::ordered_json::parse(doc.dump());
  canon["command"] = command;
  canon["tol"] = c.tol;
  canon["seed"] = c.seed;
  canon["samples"] = c.samples;
  canon["contour"] = {{"nodes", c.contour.nodes},   {"z_nodes", c.contour.z_nodes},
                      {"z_radius", c.contour.z_radius}, {"z_outer_radius", c.contour.z_outer_radius},
                      {"lo", c.contour.lo},         {"hi", c.contour.hi}};
  c.canonical = std::move(canon);
  return c;
}

std::string config_hash(const nlohmann::ordered_json& canonical) {
  // FNV-1a over the canonical dump
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : canonical.dump()) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace tasep::cli
