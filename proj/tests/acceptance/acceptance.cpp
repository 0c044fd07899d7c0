#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include "tasep/cauchysum.hpp"
#include "tasep/limits.hpp"
#include "tasep/periodic.hpp"
#include "tasep/simulate.hpp"
#include "tasep/symfunc.hpp"

using namespace tasep;

namespace {

int failures = 0;

void report(int id, bool pass, const std::string& detail, double seconds, double budget) {
  const bool in_time = seconds < budget;
  if (!pass || !in_time) ++failures;
  std::printf("criterion %d: %s  %s  runtime=%.1fs (budget %.0fs)\n", id, pass && in_time ? "PASS" : "FAIL",
              detail.c_str(), seconds, budget);
  std::fflush(stdout);
}

void run(int id, double budget, const std::function<std::pair<bool, std::string>()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  std::pair<bool, std::string> r;
  try {
    r = body();
  } catch (const std::exception& e) {
    r = {false, std::string("exception: ") + e.what()};
  }
  report(id, r.first, r.second,
         std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(), budget);
}

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

const std::vector<cplx> no_z;

ContourPlan series_plan(int m) {
  auto p = ContourPlan::standard(m, 32);
  p.circles = NestedCircleSystem::standard(m, 0.05, 0.3);
  return p;
}

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

}  // namespace

int main(int argc, char** argv) {
  const std::string cli = argc > 1 ? argv[1] : "";
  const std::string scratch = argc > 2 ? argv[2] : ".";

  run(1, 10, [] {
    double worst = 0.0;
    for (double t : {0.5, 1.0, 2.0, 3.0})
      for (long long a = -1; a <= 4; ++a) {
        const long long b = a + 1;
        const double exact = poisson_joint(std::span<const long long>(&b, 1), std::span<const double>(&t, 1));
        const auto p = joint_probability(ParticleConfig::step(1), {{{1, a, t}}}, ContourPlan::standard(1));
        worst = std::max(worst, std::abs(p.value - exact));
      }
    return std::pair{worst < 1e-8, fmt("max|P-Poisson|=%.2e", worst)};
  });

  run(2, 120, [] {
    struct Cell {
      ParticleConfig y;
      Observation o;
    };
    const std::vector<Cell> cells{{ParticleConfig::step(2), {2, -1, 1.0}}, {ParticleConfig::step(2), {1, 1, 1.5}},
                                  {ParticleConfig::flat(2), {1, -1, 1.0}}, {ParticleConfig::step(3), {3, -2, 2.0}},
                                  {ParticleConfig::flat(3), {2, -3, 1.5}}, {ParticleConfig::flat(3), {3, -4, 2.5}}};
    double worst_excess = -1.0, worst = 0.0;
    for (const auto& c : cells) {
      const ObservationSet obs{{c.o}};
      const auto p = joint_probability(c.y, obs, ContourPlan::standard(1));
      const auto x = ctmc_exact(c.y, obs);
      const double diff = std::abs(p.value - x.value);
      worst = std::max(worst, diff);
      worst_excess = std::max(worst_excess, diff - (1e-6 + x.certificate.total()));
    }
    return std::pair{worst_excess < 0.0, fmt("max|P-CTMC|=%.2e over 6 cells", worst)};
  });

  run(3, 300, [] {
    double worst = 0.0;
    const std::vector<ObservationSet> poisson_cells{{{{1, 0, 1.0}, {1, 1, 2.0}}},
                                                   {{{1, 1, 0.5}, {1, 2, 2.5}}},
                                                   {{{1, 2, 1.5}, {1, 1, 3.0}}}};
    for (const auto& o : poisson_cells) {
      std::vector<long long> b;
      std::vector<double> t;
      for (const auto& p : o.points) {
        b.push_back(p.a + 1);
        t.push_back(p.t);
      }
      worst = std::max(worst, std::abs(joint_probability(ParticleConfig::step(1), o, ContourPlan::standard(2)).value -
                                       poisson_joint(b, t)));
    }
    double worst_z = 0.0;
    const std::vector<std::pair<ParticleConfig, ObservationSet>> mc_cells{
        {ParticleConfig{{-1, -2}}, {{{1, 0, 0.5}, {2, 0, 1.5}}}},
        {ParticleConfig{{-1, -3}}, {{{2, -2, 0.5}, {1, 1, 1.5}}}}};
    for (const auto& [y, o] : mc_cells) {
      const auto mc = mc_joint(y, o, {20240601, 1000000});
      const double p = joint_probability(y, o, ContourPlan::standard(2)).value;
      worst_z = std::max(worst_z, std::abs(p - mc.estimate) / mc.stderr_);
    }
    return std::pair{worst < 1e-6 && worst_z < 4.0,
                     fmt("N=1 max|P-Poisson|=%.2e", worst) + fmt(", N=2 max z-score=%.2f", worst_z)};
  });

  run(4, 180, [] {
    double worst = 0.0;
    auto check = [&](const ParticleConfig& y, const ObservationSet& o, std::vector<cplx> z) {
      const auto plan = series_plan(o.m());
      worst = std::max(worst, std::abs(dy_fredholm(y, o, z, plan) - dy_series(y, o, z, plan)));
    };
    check(ParticleConfig::step(1), {{{1, 0, 1.0}}}, {});
    check(ParticleConfig::step(1), {{{1, 0, 1.0}, {1, 1, 2.0}}}, sample_z(2));
    check(ParticleConfig::step(2), {{{2, -1, 1.0}}}, {});
    return std::pair{worst < 1e-6, fmt("max|D_fredholm-D_series|=%.2e", worst)};
  });

  run(5, 300, [] {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> n_dist(1, 4), gap(1, 3), top(-3, 4);
    std::uniform_real_distribution<double> rad(0.4, 0.9), ang(0.0, 2.0 * std::numbers::pi);
    double orth = 0.0;
    for (int c = 0; c < 10; ++c) {
      const int n = n_dist(rng);
      ParticleConfig y;
      long long x = top(rng);
      for (int i = 0; i < n; ++i) {
        y.y.push_back(x);
        x -= gap(rng);
      }
      cplx u;
      do u = std::polar(rad(rng), ang(rng));
      while (std::abs(u + 1.0) < 0.3);
      for (int i = 1; i <= n; ++i) orth = std::max(orth, orthogonality_residual(y, u, i));
    }
    const auto plan2 = ContourPlan::standard(2);
    const auto a = invariance_suite(ParticleConfig::step(1), {{{1, 0, 1.0}, {1, 1, 2.0}}}, plan2);
    const auto b = invariance_suite(ParticleConfig{{3, 0, -2}}, {{{2, 1, 0.7}, {3, 0, 1.5}}}, plan2);
    const double reorder = std::max(a.reorder, b.reorder);
    const double scale_shift = std::max({a.scaling, a.shift, b.scaling, b.shift});
    const double null_kernel = std::max(a.null_kernel, b.null_kernel);
    const double reduction = std::max(
        {reduction_identity_residual(ParticleConfig::step(1), {{{1, 0, 1.0}, {1, 1, 2.0}}}, plan2, 1),
         reduction_identity_residual(ParticleConfig::step(2), {{{1, 0, 0.5}, {2, -1, 1.2}}}, plan2, 1),
         reduction_identity_residual(ParticleConfig::step(2), {{{2, -3, 0.6}, {1, 1, 1.4}}}, plan2, 1, true)});
    const ObservationSet of{{{1, -3, 0.6}, {2, -4, 1.3}}};
    const auto z = sample_z(2);
    const double flat = std::abs(dy_flat_delta(of, z, plan2) - dy_fredholm(ParticleConfig::flat(3), of, z, plan2));
    const bool pass = orth < 1e-10 && reorder < 1e-8 && scale_shift < 1e-10 && null_kernel < 1e-8 &&
                      reduction < 1e-8 && flat < 1e-8;
    return std::pair{pass, fmt("orth=%.1e", orth) + fmt(" reorder=%.1e", reorder) +
                               fmt(" scale/shift=%.1e", scale_shift) + fmt(" null=%.1e", null_kernel) +
                               fmt(" reduction=%.1e", reduction) + fmt(" flat=%.1e", flat)};
  });

  run(6, 300, [] {
    double worst = 0.0;
    worst = std::max(worst, large_period_residual(ParticleConfig::step(1), {3, 1}, {{{1, 1, 1.0}}}));
    worst = std::max(worst, large_period_residual(ParticleConfig::step(1), {3, 1}, {{{1, 0, 1.0}, {1, 1, 2.0}}}));
    worst = std::max(worst, large_period_residual(ParticleConfig::step(2), {5, 2}, {{{2, -1, 1.0}}}));
    worst = std::max(worst, large_period_residual(ParticleConfig::step(2), {5, 2}, {{{2, -1, 0.5}, {1, 0, 1.0}}}));
    const ObservationSet o{{{2, -1, 1.0}}};
    const double l_indep = std::abs(periodic_probability(ParticleConfig::step(2), {5, 2}, o).value -
                                    periodic_probability(ParticleConfig::step(2), {6, 2}, o).value);
    return std::pair{worst < 1e-6 && l_indep < 1e-6,
                     fmt("max large-period residual=%.2e", worst) + fmt(", L-independence=%.2e", l_indep)};
  });

  run(7, 60, [] {
    const ChainSpec s2{{1, 1}, {{1}}, {{1}}};
    const ChainSpec s3{{1, 1, 1}, {{1}, {1}}, {{1}, {1}}};
    const ToyAmplitude a1 = [](const Levels& w, std::span<const cplx>) {
      return std::exp(w[0][0] + 2.0 * w[1][0]) / w[1][0];
    };
    const ToyAmplitude a2 = [](const Levels& w, std::span<const cplx>) { return std::exp(w[0][0]) / w[0][0]; };
    const ToyAmplitude a3 = [](const Levels& w, std::span<const cplx>) {
      return 1.0 / (w[1][0] * (1.0 - w[2][0]));
    };
    const std::vector<cplx> q1{0.0, 0.0, 1.0}, q2{0.0, 0.0, 1.0, 3.0, 3.0, 1.0};
    struct Case {
      ToyProblem p;
      std::vector<cplx> z;
    };
    const std::vector<Case> cases{{ToyProblem::make(q1, a1, {{0}, {1}}, s2), {cplx(0.3, 0.2)}},
                                  {ToyProblem::make(q1, a2, {{1}, {0}}, s2), {cplx(0.3, 0.2)}},
                                  {ToyProblem::make(q1, a3, {{0}, {1}, {0}}, s3), {cplx(0.3, 0.2), cplx(-0.2, 0.4)}}};
    double worst_gap = 0.0, worst_extrap = 0.0;
    bool decreasing = true;
    for (const auto& c : cases) {
      const cplx g0 = g_zero_contour(c.p, c.z);
      std::vector<cplx> gs;
      double prev = INFINITY;
      for (double z0 : {1e-1, 1e-2, 1e-3, 1e-4}) {
        std::vector<cplx> zz{z0};
        zz.insert(zz.end(), c.z.begin(), c.z.end());
        gs.push_back(g_sum(c.p, zz));
        const double gap = std::abs(gs.back() - g0);
        decreasing = decreasing && gap < prev;
        prev = gap;
      }
      worst_gap = std::max(worst_gap, prev);
      worst_extrap = std::max(worst_extrap, std::abs((10.0 * gs[3] - gs[2]) / 9.0 - g0));
    }
    auto limit = [&](const std::vector<cplx>& q) {
      const auto p = ToyProblem::make(q, a2, {{1}, {0}}, s2);
      const cplx g3 = g_sum(p, std::vector<cplx>{1e-3, cplx(0.3, 0.2)});
      const cplx g4 = g_sum(p, std::vector<cplx>{1e-4, cplx(0.3, 0.2)});
      return (10.0 * g4 - g3) / 9.0;
    };
    const double q_indep = std::abs(limit(q1) - limit(q2));
    return std::pair{worst_gap < 1e-6 && decreasing && q_indep < 1e-6,
                     fmt("max gap at z0=1e-4: %.2e", worst_gap) + (decreasing ? ", gaps decreasing" : ", gaps NOT decreasing") +
                         fmt(", extrapolated gap=%.2e", worst_extrap) + fmt(", q-independence=%.2e", q_indep)};
  });

  run(8, 1200, [] {
    bool pass = true;
    std::string detail;
    for (auto kind : {LimitKind::step, LimitKind::flat}) {
      const std::string name = kind == LimitKind::step ? "step" : "flat";
      auto f = [&](double h) { return f_limit(kind, LimitObservation{{{0.0, 1.0, h}}}).value; };
      const double fm = f(-2.0), f0 = f(0.0), fp = f(2.0), hi = f(8.0), lo = f(-6.0);
      const bool mono = fm <= f0 && f0 <= fp;
      const auto ladder = t_ladder(kind, LimitObservation{{{0.0, 1.0, 0.0}}}, {8.0, 16.0, 32.0});
      bool dec = true;
      for (std::size_t i = 1; i < ladder.size(); ++i) dec = dec && ladder[i].gap < ladder[i - 1].gap;
      const double final_gap = ladder.back().gap;
      const double bound = kind == LimitKind::step ? 0.02 : 0.03;
      pass = pass && mono && hi > 0.999 && lo < 0.01 && dec && final_gap < bound;
      detail += name + (mono ? " monotone" : " NOT monotone") + fmt(" F(8)=%.6f", hi) + fmt(" F(-6)=%.1e", lo) +
                fmt(" T-gap(32)=%.4f", final_gap) + (dec ? " decreasing; " : " NOT decreasing; ");
    }
    const LimitObservation o2{{{0.0, 1.0, 0.0}, {0.0, 2.0, 0.0}}};
    const double joint = f_limit(LimitKind::step, o2).value;
    const double f1 = f_limit(LimitKind::step, LimitObservation{{o2.points[0]}}).value;
    const double f2 = f_limit(LimitKind::step, LimitObservation{{o2.points[1]}}).value;
    const double lower = std::max(0.0, f1 + f2 - 1.0), upper = std::min(f1, f2);
    const bool frechet = joint >= lower && joint <= upper;
    pass = pass && frechet;
    detail += fmt("m=2 step %.6f", joint) + fmt(" in [%.6f,", lower) + fmt(" %.6f]", upper) + (frechet ? "" : " VIOLATED");
    return std::pair{pass, detail};
  });

  run(9, 120, [&] {
    if (cli.empty()) return std::pair{false, std::string("no CLI path given")};
    const std::string a = scratch + "/verify_run_a.json", b = scratch + "/verify_run_b.json";
    const int ra = std::system((cli + " verify --seed 1 --out " + a).c_str());
    const int rb = std::system((cli + " verify --seed 1 --out " + b).c_str());
    const auto ja = slurp(a), jb = slurp(b);
    const bool same = !ja.empty() && ja == jb;
    return std::pair{same && ra == 0 && rb == 0,
                     std::string(same ? "byte-identical" : "outputs differ") + ", exit codes " + std::to_string(ra) +
                         "/" + std::to_string(rb) + ", " + std::to_string(ja.size()) + " bytes"};
  });

  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
