#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "commands.hpp"
#include "tasep/errors.hpp"

namespace {

int emit_error(const std::string& kind, const std::string& message, int code) {
  nlohmann::ordered_json e;
  e["error"] = kind;
  e["message"] = message;
  e["exit_code"] = code;
  std::cerr << e.dump() << '\n';
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace tasep;
  CLI::App app{"Multi-point distributions of TASEP and periodic TASEP"};
  std::string command, config_path, out_path, format = "json";
  cli::CliOverrides ov;
  app.add_option("command", command, "prob | signed | periodic | limit | mc | oracle | verify | converge")
      ->required()
      ->check(CLI::IsMember({"prob", "signed", "periodic", "limit", "mc", "oracle", "verify", "converge"}));
  app.add_option("--config", config_path, "JSON run configuration");
  app.add_option("--out", out_path, "output file (default stdout)");
  app.add_option("--format", format, "json | csv")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--tol", ov.tol, "tolerance override");
  app.add_option("--nodes", ov.nodes, "nodes per circle override");
  app.add_option("--seed", ov.seed, "random seed override");
  app.add_option("--samples", ov.samples, "Monte Carlo sample count override");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    return emit_error("usage", e.what(), 2);
  }

  nlohmann::json doc = nlohmann::json::object();
  if (!config_path.empty()) {
    std::ifstream in(config_path);
    if (!in) return emit_error("config", "cannot open " + config_path, 2);
    try {
      doc = nlohmann::json::parse(in);
    } catch (const std::exception& e) {
      return emit_error("config", e.what(), 2);
    }
  } else if (command != "verify") {
    return emit_error("config", command + " needs --config", 2);
  }

  try {
    const auto cfg = cli::parse_config(command, doc, ov);
    const auto out = cli::run_command(cfg);
    const auto text = format == "json" ? cli::render_json(cfg, out) : cli::render_csv(cfg, out);
    if (out_path.empty()) {
      std::cout << text;
    } else {
      std::ofstream f(out_path);
      if (!f) return emit_error("io", "cannot write " + out_path, 2);
      f << text;
    }
    return out.quality_ok ? 0 : 3;
  } catch (const Invalid& e) {
    return emit_error("invalid", e.what(), 2);
  } catch (const nlohmann::json::exception& e) {
    return emit_error("config", e.what(), 2);
  } catch (const Unsupported& e) {
    return emit_error("unsupported", e.what(), 4);
  } catch (const Error& e) {
    return emit_error("numerical", e.what(), 3);
  }
}
