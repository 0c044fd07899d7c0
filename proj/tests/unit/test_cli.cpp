#include <cmath>

#include "commands.hpp"
#include "doctest.h"
#include "tasep/errors.hpp"

using namespace tasep;
using namespace tasep::cli;

namespace {
const auto n1 = nlohmann::json::parse(R"({"initial":{"type":"step","n":1},"observations":[{"k":1,"a":0,"t":1.0}]})");
}

TEST_SUITE("cli") {
  TEST_CASE("prob on the N = 1 fixture") {
    const auto cfg = parse_config("prob", n1, {});
    const auto out = run_command(cfg);
    REQUIRE(out.records.size() == 1);
    CHECK(std::abs(out.records[0].value - 0.6321206) < 1e-7);
    CHECK(out.quality_ok);
    const auto j = nlohmann::json::parse(render_json(cfg, out));
    CHECK(j["results"][0]["provenance"] == "fredholm");
    CHECK(j["results"][0].contains("error"));
    CHECK(j["results"][0]["detail"]["plan"]["nodes_per_circle"] == 64);
  }

  TEST_CASE("hash is stable and sensitive") {
    const auto a = parse_config("prob", n1, {});
    const auto b = parse_config("prob", n1, {});
    CHECK(config_hash(a.canonical) == config_hash(b.canonical));
    CHECK(config_hash(a.canonical).size() == 16);
    CliOverrides ov;
    ov.nodes = 32;
    CHECK(config_hash(parse_config("prob", n1, ov).canonical) != config_hash(a.canonical));
  }

  TEST_CASE("overrides apply") {
    CliOverrides ov;
    ov.nodes = 32;
    ov.seed = 9;
    const auto c = parse_config("prob", n1, ov);
    CHECK(c.plan().nodes == 32);
    CHECK(c.seed == 9);
  }

  TEST_CASE("csv columns") {
    const auto cfg = parse_config("prob", n1, {});
    const auto csv = render_csv(cfg, run_command(cfg));
    CHECK(csv.rfind("config-hash,command,value,imag-residue,error,runtime-ms\n", 0) == 0);
  }

  TEST_CASE("schema errors") {
    CHECK_THROWS_AS((parse_config("prob", nlohmann::json::parse(R"({"bogus":1})"), {})), Invalid);
    CHECK_THROWS_AS((parse_config("prob", nlohmann::json::parse(R"({"initial":{"type":"zigzag"}})"), {})), Invalid);
    CHECK_THROWS_AS((
        parse_config("prob",
                     nlohmann::json::parse(R"({"initial":{"type":"step","n":1},"observations":[{"site":0,"height":1,"t":1}]})"),
                     {})),
        Invalid);
  }

  TEST_CASE("height coordinates convert") {
    const auto c = parse_config(
        "prob",
        nlohmann::json::parse(R"({"initial":{"type":"step","n":2},"observations":[{"site":0,"height":2,"t":1}]})"), {});
    CHECK(c.obs.points[0].k == 1);
    CHECK(c.obs.points[0].a == 0);
  }

  TEST_CASE("oracle and mc commands") {
    const auto p = parse_config("oracle", nlohmann::json::parse(
        R"({"initial":{"type":"step","n":1},"observations":[{"k":1,"a":0,"t":1.0}],"oracle":"poisson"})"), {});
    CHECK(std::abs(run_command(p).records[0].value - (1.0 - std::exp(-1.0))) < 1e-14);
    CliOverrides ov;
    ov.samples = 20000;
    const auto m = parse_config("mc", n1, ov);
    const auto a = render_json(m, run_command(m)), b = render_json(m, run_command(m));
    CHECK(a == b);
  }
}
