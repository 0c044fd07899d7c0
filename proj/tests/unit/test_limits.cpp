#include <cmath>

#include "doctest.h"
#include "tasep/errors.hpp"
#include "tasep/limits.hpp"

using namespace tasep;

TEST_SUITE("limits") {
  TEST_CASE("limit_f") {
    const LimitObservation o{{{0.3, 1.0, -0.5}, {0.1, 2.5, 0.4}}};
    const cplx z(0.2, 0.7);
    CHECK(std::abs(limit_f(1, z, o) - std::exp(z * z * z / 3.0 - 0.3 * z * z + 0.5 * z)) < 1e-13);
    const cplx f2 = limit_f(2, z, o);
    CHECK(std::abs(f2 - std::exp(1.5 * z * z * z / 3.0 - (0.1 - 0.3) * z * z - (0.4 + 0.5) * z)) < 1e-13);
  }

  TEST_CASE("ray plan decay") {
    const LimitObservation o{{{0.0, 1.0, 0.0}}};
    const auto plan = RayContourPlan::standard(o);
    for (const auto& c : plan.right) {
      const cplx end = cplx(c.offset) + std::polar(plan.s_max, plan.right_angle);
      CHECK(std::abs(limit_f(1, end, o)) < 1e-16);
    }
    CHECK_NOTHROW(plan.validate(o));
  }

  TEST_CASE("frozen one-point values") {
    auto f = [](LimitKind k, double h) { return f_limit(k, LimitObservation{{{0.0, 1.0, h}}}); };
    const auto s0 = f(LimitKind::step, 0.0);
    CHECK(std::abs(s0.value - 0.96937283) < 1e-7);
    CHECK(s0.imag_residue < 1e-8);
    CHECK(s0.provenance == "limit-step");
    CHECK(std::abs(f(LimitKind::step, -2.0).value - 0.41322414) < 1e-7);
    CHECK(std::abs(f(LimitKind::flat, 0.0).value - 0.83190807) < 1e-7);
    CHECK(std::abs(f(LimitKind::flat, -2.0).value - 0.05053555) < 1e-7);
    CHECK(std::abs(f(LimitKind::step, 8.0).value - 1.0) < 1e-4);
    CHECK(std::abs(f(LimitKind::flat, 8.0).value - 1.0) < 1e-4);
    CHECK(f(LimitKind::step, -6.0).value < 0.01);
  }

  TEST_CASE("monotone in h") {
    for (auto k : {LimitKind::step, LimitKind::flat}) {
      double prev = -1.0;
      for (double h : {-2.0, 0.0, 2.0}) {
        const double v = f_limit(k, LimitObservation{{{0.0, 1.0, h}}}).value;
        CHECK(v >= prev);
        prev = v;
      }
    }
  }

  TEST_CASE("flat equal times are unsupported") {
    const LimitObservation o{{{0.0, 1.0, 0.0}, {0.5, 1.0, 0.0}}};
    CHECK_THROWS_AS((f_limit(LimitKind::flat, o)), Unsupported);
  }

  TEST_CASE("flat reflection mismatch is rejected") {
    const LimitObservation o{{{0.0, 1.0, 0.0}}};
    auto plan = RayContourPlan::standard(o);
    plan.left[0].offset *= 1.2;
    const std::vector<cplx> none;
    CHECK_THROWS_AS((d_flat(none, o, plan)), Invalid);
  }

  TEST_CASE("scaling map") {
    const auto s = scaling_map(16.0, LimitObservation{{{0.0, 1.0, 0.0}}});
    REQUIRE(s.obs.m() == 1);
    CHECK(s.obs.points[0].a == 0);
    CHECK(s.obs.points[0].k == 8);
    CHECK(s.obs.points[0].t == doctest::Approx(32.0));
    CHECK_THROWS_AS((scaling_map(4.0, LimitObservation{{{0.0, 1.0, 8.0}}})), Unsupported);
    CHECK_THROWS_AS((scaling_map(200.0, LimitObservation{{{0.0, 1.0, 0.0}}})), Unsupported);
  }

  TEST_CASE("T ladder step") {
    const auto rows = t_ladder(LimitKind::step, LimitObservation{{{0.0, 1.0, 0.0}}}, {8.0, 16.0, 32.0});
    REQUIRE(rows.size() == 3);
    CHECK(rows[1].gap < rows[0].gap);
    CHECK(rows[2].gap < rows[1].gap);
    CHECK(rows[2].gap < 0.02);
  }
}
