#include <cmath>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "tasep/errors.hpp"
#include "tasep/simulate.hpp"

using namespace tasep;

namespace {
std::vector<Fixture> load_fixtures() {
  std::ifstream f(TASEP_FIXTURE_DIR "/oracle_fixtures.json");
  std::stringstream s;
  s << f.rdbuf();
  return fixtures_from_json(s.str());
}
}  // namespace

TEST_SUITE("simulate") {
  TEST_CASE("poisson_joint") {
    const std::vector<long long> b1{1};
    const std::vector<double> t1{1.0};
    CHECK(std::abs(poisson_joint(b1, t1) - (1.0 - std::exp(-1.0))) < 1e-15);
    const std::vector<long long> b2{1, 2};
    const std::vector<double> t2{1.0, 2.0};
    CHECK(std::abs(poisson_joint(b2, t2) - (1.0 - std::exp(-1.0) - std::exp(-2.0))) < 1e-14);
    const std::vector<long long> b3{0, -3};
    CHECK(poisson_joint(b3, t2) == doctest::Approx(1.0));
  }

  TEST_CASE("ctmc_exact") {
    const auto r = ctmc_exact(ParticleConfig::step(1), {{{1, 0, 1.0}}});
    CHECK(std::abs(r.value - (1.0 - std::exp(-1.0))) < r.certificate.total() + 1e-15);
    CHECK(r.certificate.total() < 1e-8);
    const auto m2 = ctmc_exact(ParticleConfig::step(1), {{{1, 0, 1.0}, {1, 1, 2.0}}});
    CHECK(std::abs(m2.value - (1.0 - std::exp(-1.0) - std::exp(-2.0))) < 1e-8);
    const ParticleConfig y{{-1, -2}};
    const ObservationSet o{{{2, -1, 1.0}}};
    const auto a = ctmc_exact(y, o);
    const auto b = ctmc_exact(y, o, 1e-8, 5);
    CHECK(std::abs(a.value - b.value) < a.certificate.total());
    CHECK(ctmc_exact(y, {{{1, -50, 1.0}, {2, -50, 2.0}}}).value == doctest::Approx(1.0).epsilon(1e-8));
    CHECK_THROWS_AS((ctmc_exact(ParticleConfig::step(5), o)), Unsupported);
    CHECK_THROWS_AS((ctmc_exact(y, {{{1, 0, 5.0}}})), Unsupported);
    CHECK_THROWS_AS((ctmc_exact(y, o, 1e-10)), Invalid);
  }

  TEST_CASE("frozen fixtures reproduce") {
    const auto fx = load_fixtures();
    REQUIRE(fx.size() == 11);
    for (const auto& f : fx) {
      if (f.oracle != "ctmc") continue;
      const auto r = ctmc_exact(ParticleConfig{f.y}, ObservationSet{f.obs});
      CHECK(std::abs(r.value - f.value) < 1e-12);
    }
    CHECK(fixtures_from_json(fixtures_to_json(fx)).size() == fx.size());
  }

  TEST_CASE("mc_joint") {
    const auto a = mc_joint(ParticleConfig::step(1), {{{1, 0, 1.0}}}, {11, 200000});
    CHECK(std::abs(a.estimate - (1.0 - std::exp(-1.0))) < 4.0 * a.stderr_);
    const auto b = mc_joint(ParticleConfig::step(1), {{{1, 0, 1.0}}}, {11, 200000});
    CHECK(a.hits == b.hits);
    const ParticleConfig y{{-1, -2}};
    const ObservationSet o{{{1, 0, 0.5}, {2, 0, 1.5}}};
    const auto mc = mc_joint(y, o, {5, 200000});
    CHECK(std::abs(mc.estimate - ctmc_exact(y, o).value) < 4.0 * mc.stderr_);
    const auto ring = mc_joint(ParticleConfig::step(1), {{{1, 0, 1.0}}}, {11, 200000}, 2);
    CHECK(std::abs(ring.estimate - (1.0 - std::exp(-1.0))) < 4.0 * ring.stderr_);
  }

  TEST_CASE("mc fixture reproduces bitwise") {
    for (const auto& f : load_fixtures()) {
      if (f.oracle != "mc") continue;
      const auto r = mc_joint(ParticleConfig{f.y}, ObservationSet{f.obs}, {f.seed, 1000000});
      CHECK(r.estimate == f.value);
    }
  }
}
