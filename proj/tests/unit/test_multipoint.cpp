#include <cmath>

#include "doctest.h"
#include "tasep/errors.hpp"
#include "tasep/multipoint.hpp"
#include "tasep/simulate.hpp"

using namespace tasep;

namespace {
const std::vector<cplx> no_z;
const double e1 = std::exp(-1.0), e2 = std::exp(-2.0);
}  // namespace

TEST_SUITE("multipoint") {
  TEST_CASE("f_level direct formula and telescoping") {
    const ObservationSet o{{{1, 0, 1.0}, {2, -1, 2.0}}};
    const cplx v(0.2, 0.15);
    CHECK(std::abs(f_level(1, v, Side::right, o) - std::pow(v, -1) * std::pow(v + 1.0, 1) * std::exp(-v)) < 1e-13);
    const cplx w(-0.8, 0.1);
    const cplx prod = f_level(1, w, Side::left, o) * f_level(2, w, Side::left, o);
    CHECK(std::abs(prod - std::pow(w, 2) * std::pow(w + 1.0, -1) * std::exp(2.0 * w)) < 1e-12);
  }

  TEST_CASE("m = 1 free particle") {
    const auto p = joint_probability(ParticleConfig::step(1), {{{1, 0, 1.0}}}, ContourPlan::standard(1));
    CHECK(std::abs(p.value - (1.0 - e1)) < 1e-12);
    CHECK(p.provenance == "fredholm");
    CHECK(p.imag_residue < 1e-12);
  }

  TEST_CASE("m = 2 free particle") {
    const auto p = joint_probability(ParticleConfig::step(1), {{{1, 0, 1.0}, {1, 1, 2.0}}}, ContourPlan::standard(2));
    CHECK(std::abs(p.value - (1.0 - e1 - e2)) < 1e-8);
    CHECK(std::abs(p.value - (1.0 - e1 - e2)) <= p.error);
    CHECK(p.error < 1e-4);
  }

  TEST_CASE("frozen CTMC reference N = 2 step") {
    const auto p = joint_probability(ParticleConfig::step(2), {{{2, -1, 1.0}}}, ContourPlan::standard(1));
    CHECK(std::abs(p.value - 0.26424111336695844) < 1e-6);
  }

  TEST_CASE("Fredholm and series routes") {
    auto plan = ContourPlan::standard(1, 32);
    plan.circles = NestedCircleSystem::standard(1, 0.05, 0.3);
    const ObservationSet o{{{1, 0, 1.0}}};
    CHECK(std::abs(dy_series(ParticleConfig::step(1), o, no_z, plan) - (1.0 - e1)) < 1e-8);
    CHECK(std::abs(dy_series(ParticleConfig::step(1), o, no_z, plan, 0) - 1.0) < 1e-15);
    auto plan2 = ContourPlan::standard(2, 32);
    plan2.circles = NestedCircleSystem::standard(2, 0.05, 0.3);
    const ObservationSet o2{{{1, 0, 1.0}, {1, 1, 2.0}}};
    const std::vector<cplx> z{0.5};
    CHECK(std::abs(dy_series(ParticleConfig::step(1), o2, z, plan2) - dy_fredholm(ParticleConfig::step(1), o2, z, plan2)) <
          1e-6);
  }

  TEST_CASE("series cost guard") {
    CHECK_THROWS_AS((dy_series(ParticleConfig::step(3), {{{1, 0, 1.0}, {1, 1, 2.0}}}, std::vector<cplx>{0.3},
                              ContourPlan::standard(2))),
                    Unsupported);
  }

  TEST_CASE("signed probabilities") {
    const auto plan = ContourPlan::standard(2);
    const auto y = ParticleConfig::step(1);
    const ObservationSet o{{{1, 0, 1.0}, {1, 1, 2.0}}};
    const double joint = joint_probability(y, o, plan).value;
    const double s0 = signed_probability(y, o, plan, {}).value;
    const double s1 = signed_probability(y, o, plan, {1}).value;
    CHECK(std::abs(s0 - joint) < 1e-12);
    // I = {1} flips the first event: P(x(t1) < a1, x(t2) >= a2)
    const double marginal2 = 1.0 - 3.0 * e2;
    CHECK(std::abs(s0 + s1 - marginal2) < 1e-6);
    const double p2 = joint_probability(y, {{{1, 1, 2.0}}}, ContourPlan::standard(1)).value;
    CHECK(std::abs(p2 - marginal2) < 1e-10);
    CHECK_THROWS_AS((signed_probability(y, o, plan, {2})), Invalid);
  }

  TEST_CASE("identity residuals") {
    const auto plan2 = ContourPlan::standard(2);
    CHECK(reduction_identity_residual(ParticleConfig::step(1), {{{1, 0, 1.0}, {1, 1, 2.0}}}, plan2, 1) < 1e-8);
    CHECK(reduction_identity_residual(ParticleConfig::step(2), {{{1, 0, 0.5}, {2, -1, 1.2}}}, plan2, 1) < 1e-8);
    CHECK(reduction_identity_residual(ParticleConfig::step(2), {{{2, -3, 0.6}, {1, 1, 1.4}}}, plan2, 1, true) < 1e-8);
    CHECK_THROWS_AS((
        reduction_identity_residual(ParticleConfig::step(2), {{{2, 3, 0.6}, {1, 1, 1.4}}}, plan2, 1, true)), Invalid);
    const auto r = invariance_suite(ParticleConfig::step(1), {{{1, 0, 1.0}, {1, 1, 2.0}}}, plan2);
    CHECK(r.reorder < 1e-8);
    CHECK(r.scaling < 1e-10);
    CHECK(r.shift < 1e-10);
    CHECK(r.null_kernel < 1e-8);
    const auto s = invariance_suite(ParticleConfig::step(2), {{{2, -1, 1.0}}}, ContourPlan::standard(1));
    CHECK(s.shift < 1e-10);
  }

  TEST_CASE("flat delta route") {
    const ObservationSet o{{{2, -3, 1.0}}};
    const auto plan = ContourPlan::standard(1);
    CHECK(std::abs(dy_flat_delta(o, no_z, plan) - dy_fredholm(ParticleConfig::flat(2), o, no_z, plan)) < 1e-8);
    const auto a = flat_probability({{{1, -2, 1.0}}}, plan);
    const auto b = flat_probability({{{1, -2, 1.0}}}, plan, FlatMode::infinite, 2);
    CHECK(std::abs(a.value - b.value) < 1e-10);
    CHECK(a.provenance == "fredholm-flat");
    const double ctmc = ctmc_exact(ParticleConfig::flat(3), {{{1, -2, 1.0}}}).value;
    CHECK(std::abs(a.value - ctmc) < 1e-5);
  }

  TEST_CASE("height coordinates") {
    const auto p = height_to_particle(0, 2);
    CHECK(p.k == 1);
    CHECK(p.threshold == 0);
    const auto q = height_to_particle(-2, 0);
    CHECK(q.k == 1);
    CHECK(q.threshold == -2);
    CHECK_THROWS_AS((height_to_particle(0, 1)), Invalid);
  }

  TEST_CASE("observation validation") {
    CHECK_THROWS_AS((ObservationSet{{{0, 0, 1.0}}}.validate()), Invalid);
    CHECK_THROWS_AS((ObservationSet{{{1, 0, -1.0}}}.validate()), Invalid);
    CHECK_THROWS_AS((ObservationSet{{{3, 0, 1.0}}}.validate_for(ParticleConfig::step(2))), Invalid);
    CHECK_THROWS_AS(ContourPlan::standard(2).validate(3), Invalid);
  }
}
