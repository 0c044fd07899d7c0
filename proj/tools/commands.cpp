#include "commands.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>

#include "tasep/cauchysum.hpp"
#include "tasep/errors.hpp"
#include "tasep/periodic.hpp"
#include "tasep/simulate.hpp"

namespace tasep::cli {

namespace {

Record timed(const std::string& label, const std::function<Record()>& f) {
  const auto t0 = std::chrono::steady_clock::now();
  Record r = f();
  r.label = label;
  r.runtime_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

Record from_probability(const ProbabilityResult& p) {
  Record r;
  r.value = p.value;
  r.imag_residue = p.imag_residue;
  r.error = p.error;
  r.provenance = p.provenance;
  r.warnings = p.warnings;
  return r;
}

nlohmann::ordered_json plan_json(const ContourPlan& p) {
  nlohmann::ordered_json j;
  j["nodes_per_circle"] = p.nodes;
  j["z_nodes"] = p.z_nodes;
  j["z_radius"] = p.z_radius;
  j["z_outer_radius"] = p.z_outer_radius;
  auto radii = [](const std::vector<LevelCircle>& f) {
    std::vector<double> r;
    for (const auto& c : f) r.push_back(c.radius);
    return r;
  };
  j["left_radii"] = radii(p.circles.left);
  j["right_radii"] = radii(p.circles.right);
  return j;
}

Record residual_row(const std::string& label, double residual, double threshold, const std::string& provenance) {
  Record r;
  r.label = label;
  r.value = residual;
  r.error = 0.0;
  r.provenance = provenance;
  r.has_threshold = true;
  r.threshold = threshold;
  return r;
}

std::vector<Record> verify_suite(const RunConfig& cfg) {
  std::vector<Record> rows;
  auto add = [&](const std::string& label, double threshold, const std::string& prov, const std::function<double()>& f) {
    const auto t0 = std::chrono::steady_clock::now();
    Record r = residual_row(label, f(), threshold, prov);
    r.runtime_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    rows.push_back(r);
  };
  const auto plan1 = ContourPlan::standard(1);
  const auto plan2 = ContourPlan::standard(2);
  const std::vector<cplx> none;

  add("poisson-m1", 1e-8, "fredholm", [&] {
    double worst = 0.0;
    for (double t : {0.5, 1.0, 2.0, 3.0})
      for (long long a = -1; a <= 4; ++a) {
        const long long b = a + 1;
        const double exact = poisson_joint(std::span<const long long>(&b, 1), std::span<const double>(&t, 1));
        worst = std::max(worst, std::abs(dy_fredholm(ParticleConfig::step(1), {{{1, a, t}}}, none, plan1).real() - exact));
      }
    return worst;
  });

  add("orthogonality", 1e-10, "quadrature", [&] {
    std::mt19937_64 rng(cfg.seed);
    std::uniform_int_distribution<int> n_dist(1, 4), gap(1, 3), top(-3, 4);
    std::uniform_real_distribution<double> rad(0.4, 0.9), ang(0.0, 2.0 * std::numbers::pi);
    double worst = 0.0;
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
      for (int i = 1; i <= n; ++i) worst = std::max(worst, orthogonality_residual(y, u, i));
    }
    return worst;
  });

  const ObservationSet o12{{{1, 0, 1.0}, {1, 1, 2.0}}};
  const ParticleConfig y3{{3, 0, -2}};
  const ObservationSet o3{{{2, 1, 0.7}, {3, 0, 1.5}}};
  InvarianceReport inv_a, inv_b;
  add("reorder-N1", 1e-8, "fredholm", [&] {
    inv_a = invariance_suite(ParticleConfig::step(1), o12, plan2);
    return inv_a.reorder;
  });
  rows.push_back(residual_row("scaling-N1", inv_a.scaling, 1e-10, "fredholm"));
  rows.push_back(residual_row("shift-N1", inv_a.shift, 1e-10, "fredholm"));
  rows.push_back(residual_row("null-kernel-N1", inv_a.null_kernel, 1e-8, "fredholm"));
  add("reorder-N3", 1e-8, "fredholm", [&] {
    inv_b = invariance_suite(y3, o3, plan2);
    return inv_b.reorder;
  });
  rows.push_back(residual_row("scaling-N3", inv_b.scaling, 1e-10, "fredholm"));
  rows.push_back(residual_row("shift-N3", inv_b.shift, 1e-10, "fredholm"));
  rows.push_back(residual_row("null-kernel-N3", inv_b.null_kernel, 1e-8, "fredholm"));

  add("z-reduction-N1", 1e-8, "fredholm", [&] { return reduction_identity_residual(ParticleConfig::step(1), o12, plan2, 1); });
  add("z-reduction-N2", 1e-8, "fredholm", [&] {
    return reduction_identity_residual(ParticleConfig::step(2), {{{1, 0, 0.5}, {2, -1, 1.2}}}, plan2, 1);
  });
  add("z-reduction-inside", 1e-8, "fredholm", [&] {
    return reduction_identity_residual(ParticleConfig::step(2), {{{2, -3, 0.6}, {1, 1, 1.4}}}, plan2, 1, true);
  });

  add("flat-delta-m1", 1e-8, "fredholm-flat", [&] {
    const ObservationSet o{{{2, -3, 1.0}}};
    return std::abs(dy_flat_delta(o, none, plan1) - dy_fredholm(ParticleConfig::flat(3), o, none, plan1));
  });
  add("flat-delta-m2", 1e-8, "fredholm-flat", [&] {
    const ObservationSet o{{{1, -3, 0.6}, {2, -4, 1.3}}};
    const auto z = sample_z(2);
    return std::abs(dy_flat_delta(o, z, plan2) - dy_fredholm(ParticleConfig::flat(3), o, z, plan2));
  });

  auto series_plan = [](int m) {
    auto p = ContourPlan::standard(m, 32);
    p.circles = NestedCircleSystem::standard(m, 0.05, 0.3);
    return p;
  };
  add("series-N1-m1", 1e-6, "series", [&] {
    const ObservationSet o{{{1, 0, 1.0}}};
    return std::abs(dy_fredholm(ParticleConfig::step(1), o, none, plan1) -
                    dy_series(ParticleConfig::step(1), o, none, series_plan(1)));
  });
  add("series-N2-m1", 1e-6, "series", [&] {
    const ObservationSet o{{{2, -1, 1.0}}};
    return std::abs(dy_fredholm(ParticleConfig::flat(2), o, none, plan1) -
                    dy_series(ParticleConfig::flat(2), o, none, series_plan(1)));
  });

  add("periodic-N1-L3-m2", 1e-6, "periodic", [&] {
    return large_period_residual(ParticleConfig::step(1), {3, 1}, o12);
  });
  add("periodic-N2-L5-m1", 1e-6, "periodic", [&] {
    return large_period_residual(ParticleConfig::step(2), {5, 2}, {{{2, -1, 1.0}}});
  });

  add("periodic-L-independence", 1e-6, "periodic", [&] {
    const ObservationSet o{{{2, -1, 1.0}}};
    return std::abs(periodic_probability(ParticleConfig::step(2), {5, 2}, o).value -
                    periodic_probability(ParticleConfig::step(2), {6, 2}, o).value);
  });

  add("ctmc-truncation-stability", 1e-8, "ctmc", [&] {
    const ParticleConfig y{{-1, -2}};
    const ObservationSet o{{{2, -1, 1.0}}};
    return std::abs(ctmc_exact(y, o).value - ctmc_exact(y, o, 1e-8, 5).value);
  });

  add("cauchy-limit-q-independence", 1e-6, "cauchysum", [&] {
    const ChainSpec spec{{1, 1}, {{1}}, {{1}}};
    const ToyAmplitude a = [](const Levels& w, std::span<const cplx>) { return std::exp(w[0][0]) / w[0][0]; };
    const std::vector<cplx> z{cplx(0.3, 0.2)};
    auto limit = [&](const std::vector<cplx>& q) {
      const auto p = ToyProblem::make(q, a, {{1}, {0}}, spec);
      const cplx g3 = g_sum(p, std::vector<cplx>{1e-3, z[0]});
      const cplx g4 = g_sum(p, std::vector<cplx>{1e-4, z[0]});
      return (10.0 * g4 - g3) / 9.0;
    };
    return std::abs(limit({0.0, 0.0, 1.0}) - limit({0.0, 0.0, 1.0, 3.0, 3.0, 1.0}));
  });

  add("mc-vs-ctmc-zscore", 4.0, "mc", [&] {
    const ParticleConfig y{{-1, -2}};
    const ObservationSet o{{{1, 0, 0.5}, {2, 0, 1.5}}};
    const auto mc = mc_joint(y, o, {cfg.seed, cfg.samples});
    const double exact = ctmc_exact(y, o).value;
    return std::abs(mc.estimate - exact) / std::max(mc.stderr_, 1e-12);
  });
  return rows;
}

}  // namespace

RunOutput run_command(const RunConfig& cfg) {
  RunOutput out;
  const auto& c = cfg.command;
  if (c == "prob" || c == "signed") {
    out.records.push_back(timed(c, [&] {
      const auto plan = cfg.plan();
      Record r = from_probability(c == "prob" ? joint_probability(cfg.y, cfg.obs, plan)
                                              : signed_probability(cfg.y, cfg.obs, plan, cfg.outside));
      r.detail["plan"] = plan_json(plan);
      r.detail["matrix_dimension"] = static_cast<int>(cfg.obs.m()) * plan.nodes;
      return r;
    }));
  } else if (c == "periodic") {
    out.records.push_back(timed(c, [&] {
      const PeriodicParams p{static_cast<int>(*cfg.period), cfg.y.size()};
      PeriodicPlan plan;
      plan.nodes = cfg.contour.nodes;
      Record r = from_probability(periodic_probability(cfg.y, p, cfg.obs, plan));
      r.detail["zhat_radii"] = zhat_radii(cfg.y, p, cfg.obs.m(), plan);
      r.detail["zhat_nodes"] = plan.nodes;
      r.detail["r_c"] = p.r_c();
      return r;
    }));
  } else if (c == "limit") {
    out.records.push_back(timed(c, [&] {
      const auto plan = RayContourPlan::standard(cfg.limit_obs);
      Record r = from_probability(f_limit(cfg.kind, cfg.limit_obs, plan));
      r.detail["s_max"] = plan.s_max;
      r.detail["panels"] = plan.panels;
      r.detail["gauss_nodes_per_panel"] = 16;
      return r;
    }));
  } else if (c == "converge") {
    for (double t : cfg.ladder) {
      out.records.push_back(timed("T=" + nlohmann::json(t).dump(), [&] {
        const auto row = t_ladder(cfg.kind, cfg.limit_obs, {t}).front();
        Record r;
        r.value = row.finite;
        r.error = row.gap;
        r.provenance = "fredholm";
        r.detail["T"] = row.t_scale;
        r.detail["limit"] = row.limit;
        r.detail["gap"] = row.gap;
        return r;
      }));
    }
    for (std::size_t i = 1; i < out.records.size(); ++i)
      if (!(out.records[i].error < out.records[i - 1].error)) out.records[i].warnings.push_back("gap not decreasing");
  } else if (c == "mc") {
    out.records.push_back(timed(c, [&] {
      const auto m = mc_joint(cfg.y, cfg.obs, {cfg.seed, cfg.samples}, cfg.period);
      Record r;
      r.value = m.estimate;
      r.error = m.stderr_;
      r.provenance = "mc";
      r.detail["hits"] = m.hits;
      r.detail["samples"] = m.samples;
      r.detail["seed"] = cfg.seed;
      return r;
    }));
  } else if (c == "oracle") {
    out.records.push_back(timed(c, [&] {
      Record r;
      if (cfg.oracle == "poisson") {
        if (cfg.y.size() != 1) throw Invalid("poisson oracle needs N = 1");
        std::vector<long long> b;
        std::vector<double> t;
        for (const auto& o : cfg.obs.points) {
          b.push_back(o.a - cfg.y.y[0]);
          t.push_back(o.t);
        }
        r.value = poisson_joint(b, t);
        r.provenance = "poisson";
      } else {
        const auto res = ctmc_exact(cfg.y, cfg.obs, cfg.tol);
        r.value = res.value;
        r.error = res.certificate.total();
        r.provenance = "ctmc";
        r.detail["k_max"] = res.certificate.k_max;
        r.detail["tail_bound"] = res.certificate.tail_bound;
        r.detail["series_tail"] = res.certificate.series_tail;
        r.detail["steps"] = res.certificate.steps;
        r.detail["states"] = res.certificate.states;
      }
      return r;
    }));
  } else if (c == "verify") {
    out.records = verify_suite(cfg);
  } else {
    throw Invalid("unknown command " + c);
  }
  for (const auto& r : out.records) {
    if (!r.warnings.empty()) out.quality_ok = false;
    if (r.has_threshold && !(r.value < r.threshold)) out.quality_ok = false;
  }
  return out;
}

std::string render_json(const RunConfig& cfg, const RunOutput& out) {
  nlohmann::ordered_json j;
  j["command"] = cfg.command;
  j["config_hash"] = config_hash(cfg.canonical);
  j["config"] = cfg.canonical;
  auto rows = nlohmann::ordered_json::array();
  for (const auto& r : out.records) {
    nlohmann::ordered_json o;
    o["label"] = r.label;
    o["value"] = r.value;
    o["imag_residue"] = r.imag_residue;
    o["error"] = r.error;
    o["provenance"] = r.provenance;
    if (r.has_threshold) {
      o["threshold"] = r.threshold;
      o["pass"] = r.value < r.threshold;
    }
    o["warnings"] = r.warnings;
    if (!r.detail.empty()) o["detail"] = r.detail;
    rows.push_back(o);
  }
  j["results"] = rows;
  j["ok"] = out.quality_ok;
  return j.dump(2) + "\n";
}

std::string render_csv(const RunConfig& cfg, const RunOutput& out) {
  std::ostringstream s;
  s.precision(17);
  s << "config-hash,command,value,imag-residue,error,runtime-ms\n";
  const auto hash = config_hash(cfg.canonical);
  for (const auto& r : out.records) {
    const std::string cmd = r.label == cfg.command ? cfg.command : cfg.command + ":" + r.label;
    s << hash << ',' << cmd << ',' << r.value << ',' << r.imag_residue << ',' << r.error << ',' << r.runtime_ms << '\n';
  }
  return s.str();
}

}  // namespace tasep::cli
