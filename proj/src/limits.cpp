#include "tasep/limits.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "tasep/errors.hpp"
#include "tasep/linalg.hpp"

namespace tasep {

bool LimitObservation::has_equal_times() const {
  for (std::size_t i = 1; i < points.size(); ++i)
    if (points[i].tau == points[i - 1].tau) return true;
  return false;
}

void LimitObservation::validate() const {
  if (points.empty()) throw Invalid("limit observation set must be nonempty");
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& p = points[i];
    if (!(p.tau > 0.0) || !std::isfinite(p.tau) || !std::isfinite(p.x) || !std::isfinite(p.h))
      throw Invalid("limit parameters must be finite with tau > 0");
    if (i > 0) {
      const auto& q = points[i - 1];
      if (p.tau < q.tau) throw Invalid("limit times must be nondecreasing");
      if (p.tau == q.tau && !(q.x < p.x)) throw Invalid("equal times need strictly increasing x");
    }
  }
}

cplx limit_f(int level, cplx zeta, const LimitObservation& obs) {
  if (level < 1 || level > obs.m()) throw Invalid("level out of range");
  const auto& c = obs.points[static_cast<std::size_t>(level - 1)];
  double dtau = c.tau, dx = c.x, dh = c.h;
  if (level > 1) {
    const auto& p = obs.points[static_cast<std::size_t>(level - 2)];
    dtau -= p.tau;
    dx -= p.x;
    dh -= p.h;
  }
  const cplx e = -dtau / 3.0 * zeta * zeta * zeta + dx * zeta * zeta + dh * zeta;
  return std::exp(zeta.real() < 0.0 ? e : -e);
}

namespace {

std::vector<RayCircle> family(int m) {
  std::vector<RayCircle> f;
  for (int l = m; l >= 2; --l) f.push_back({l, Role::out, 0.0});
  f.push_back({1, Role::single, 0.0});
  for (int l = 2; l <= m; ++l) f.push_back({l, Role::in, 0.0});
  if (m == 1) {
    f[0].offset = 0.5;
  } else {
    for (std::size_t i = 0; i < f.size(); ++i) f[i].offset = 0.3 * static_cast<double>(i + 1);
  }
  return f;
}

RaySegmentContour ray_of(const RayCircle& c, Side side, const RayContourPlan& plan) {
  return side == Side::left ? RaySegmentContour{cplx(-c.offset, 0.0), plan.left_angle, plan.s_max, plan.panels}
                            : RaySegmentContour{cplx(c.offset, 0.0), plan.right_angle, plan.s_max, plan.panels};
}

}  // namespace

RayContourPlan RayContourPlan::standard(const LimitObservation& obs, double tol) {
  obs.validate();
  RayContourPlan p;
  p.m = obs.m();
  p.left = family(p.m);
  p.right = family(p.m);
  p.left_angle = 2.0 * std::numbers::pi / 3.0;
  p.right_angle = std::numbers::pi / (obs.has_equal_times() ? 5.0 : 3.0);
  auto majorant = [&](double s) {
    double worst = 0.0;
    for (Side side : {Side::left, Side::right})
      for (const auto& c : side == Side::left ? p.left : p.right) {
        const auto r = ray_of(c, side, p);
        for (int sgn : {-1, 1}) worst = std::max(worst, std::abs(limit_f(c.level, r.vertex + s * std::polar(1.0, sgn * r.angle), obs)));
      }
    return worst;
  };
  p.s_max = ray_cutoff(majorant, tol);
  p.panels = static_cast<int>(std::ceil(p.s_max));
  return p;
}

void RayContourPlan::validate(const LimitObservation& obs) const {
  obs.validate();
  if (m != obs.m()) throw Invalid("ray plan level count does not match observations");
  const auto n = static_cast<std::size_t>(2 * m - 1);
  if (left.size() != n || right.size() != n) throw Invalid("ray families need 2m-1 contours");
  for (const auto* fam : {&left, &right})
    for (std::size_t i = 0; i < n; ++i) {
      if (!((*fam)[i].offset > 0.0)) throw Invalid("ray vertices must be off the imaginary axis");
      if (i > 0 && !((*fam)[i].offset > (*fam)[i - 1].offset)) throw Invalid("ray vertices must be nested out to in");
    }
  if (obs.has_equal_times() && !(right_angle < std::numbers::pi / 4.0))
    throw Invalid("equal times need the narrower right-ray angle");
  if (s_max <= 0.0 || panels < 1) throw Invalid("ray truncation must be positive");
  if (!(z_radius > 0.0 && z_radius < 1.0) || z_nodes < 4) throw Invalid("z circle settings invalid");
}

RayContourPlan RayContourPlan::refined() const {
  RayContourPlan p = *this;
  p.panels *= 2;
  return p;
}

RayContourPlan RayContourPlan::extended() const {
  RayContourPlan p = *this;
  p.s_max *= 1.5;
  p.panels = static_cast<int>(std::ceil(1.5 * panels));
  return p;
}

namespace {

struct RNode {
  int level;
  cplx w;
  cplx weight;
};

bool in_s1(int level, Side side) { return (level % 2 == 1) == (side == Side::left); }

cplx q1(int j, int m, std::span<const cplx> z) {
  if (j % 2 == 1 && j < m) return 1.0 - z[static_cast<std::size_t>(j - 1)];
  if (j % 2 == 0) return 1.0 - 1.0 / z[static_cast<std::size_t>(j - 2)];
  return 1.0;
}

cplx q2(int j, int m, std::span<const cplx> z) {
  if (j % 2 == 0 && j < m) return 1.0 - z[static_cast<std::size_t>(j - 1)];
  if (j % 2 == 1 && j > 1) return 1.0 - 1.0 / z[static_cast<std::size_t>(j - 2)];
  return 1.0;
}

cplx mu(const RayCircle& c, std::span<const cplx> z) {
  if (c.role == Role::single) return 1.0;
  const cplx zz = z[static_cast<std::size_t>(c.level - 2)];
  return c.role == Role::out ? -zz / (1.0 - zz) : 1.0 / (1.0 - zz);
}

cplx limit_det(std::span<const cplx> z, const LimitObservation& obs, const RayContourPlan& plan, bool flat) {
  const int m = obs.m();
  plan.validate(obs);
  if (static_cast<int>(z.size()) != m - 1) throw Invalid("z vector must have m-1 entries");
  std::vector<RNode> s1, s2;
  std::vector<std::size_t> r1;
  for (Side side : {Side::left, Side::right}) {
    for (const auto& c : side == Side::left ? plan.left : plan.right) {
      if (flat && side == Side::left && c.level == 1) continue;
      for (const auto& n : ray_nodes(ray_of(c, side, plan), mu(c, z))) {
        auto& dst = in_s1(c.level, side) ? s1 : s2;
        if (flat && side == Side::right && c.level == 1) r1.push_back(dst.size());
        dst.push_back({c.level, n.point, n.weight});
      }
    }
  }
  std::vector<std::size_t> l1;
  if (flat) {
    if (obs.has_equal_times()) throw Unsupported("flat determinant route needs strictly increasing times");
    const auto& lc = *std::ranges::find_if(plan.left, [](const RayCircle& c) { return c.level == 1; });
    const auto& rc = *std::ranges::find_if(plan.right, [](const RayCircle& c) { return c.level == 1; });
    if (lc.offset != rc.offset || std::abs(plan.left_angle + plan.right_angle - std::numbers::pi) > 1e-15)
      throw Invalid("flat kernel needs level-1 contours symmetric about the imaginary axis");
    for (auto b : r1) {
      l1.push_back(s1.size());
      s1.push_back({1, -s2[b].w, s2[b].weight});
    }
  }
  const auto na = static_cast<Eigen::Index>(s1.size());
  const auto nb = static_cast<Eigen::Index>(s2.size());
  CVector wb(nb), fa(na), fb(nb);
  for (Eigen::Index a = 0; a < na; ++a) fa(a) = limit_f(s1[static_cast<std::size_t>(a)].level, s1[static_cast<std::size_t>(a)].w, obs);
  for (Eigen::Index b = 0; b < nb; ++b) {
    wb(b) = s2[static_cast<std::size_t>(b)].weight;
    fb(b) = limit_f(s2[static_cast<std::size_t>(b)].level, s2[static_cast<std::size_t>(b)].w, obs);
  }
  CMatrix k1 = CMatrix::Zero(na, nb), kyw = CMatrix::Zero(nb, na);
  for (Eigen::Index a = 0; a < na; ++a) {
    const auto& p = s1[static_cast<std::size_t>(a)];
    for (Eigen::Index b = 0; b < nb; ++b) {
      const auto& q = s2[static_cast<std::size_t>(b)];
      const int i = p.level, j = q.level;
      if (i == j || i == j + (i % 2 == 0 ? 1 : -1)) k1(a, b) = fa(a) / (p.w - q.w) * q1(j, m, z);
      if (flat && i == 1) continue;
      if (j == i || j == i - (j % 2 == 0 ? 1 : -1)) kyw(b, a) = fb(b) / (p.w - q.w) * q2(i, m, z) * p.weight;
    }
  }
  for (std::size_t i = 0; i < l1.size(); ++i)
    kyw(static_cast<Eigen::Index>(r1[i]), static_cast<Eigen::Index>(l1[i])) = -fb(static_cast<Eigen::Index>(r1[i]));
  const CMatrix mm = (k1 * wb.asDiagonal()) * kyw;
  return determinant(CMatrix::Identity(na, na) - mm);
}

}  // namespace

cplx d_step(std::span<const cplx> z, const LimitObservation& obs, const RayContourPlan& plan) {
  return limit_det(z, obs, plan, false);
}

cplx d_flat(std::span<const cplx> z, const LimitObservation& obs, const RayContourPlan& plan) {
  return limit_det(z, obs, plan, true);
}

ProbabilityResult f_limit(LimitKind kind, const LimitObservation& obs, const RayContourPlan& plan) {
  plan.validate(obs);
  const bool flat = kind == LimitKind::flat;
  const int m = obs.m();
  auto eval = [&](const RayContourPlan& p, int z_nodes) {
    std::vector<double> radii(static_cast<std::size_t>(m - 1), p.z_radius);
    return z_polydisc_integrate(
        [&](std::span<const cplx> z) {
          cplx v = limit_det(z, obs, p, flat);
          for (const auto& x : z) v /= 1.0 - x;
          return v;
        },
        radii, z_nodes);
  };
  ProbabilityResult r;
  r.raw = eval(plan, plan.z_nodes);
  r.error = std::abs(eval(plan.refined(), m > 1 ? plan.z_nodes / 2 : plan.z_nodes) - r.raw);
  r.imag_residue = std::abs(r.raw.imag());
  r.value = r.raw.real();
  r.provenance = flat ? "limit-flat" : "limit-step";
  if (r.imag_residue > 1e-6) r.warnings.push_back("imaginary residue above 1e-6");
  return r;
}

ProbabilityResult f_limit(LimitKind kind, const LimitObservation& obs) {
  return f_limit(kind, obs, RayContourPlan::standard(obs));
}

ScaledObservation scaling_map(double t_scale, const LimitObservation& obs) {
  obs.validate();
  if (!(t_scale >= 4.0)) throw Invalid("scaling map needs T >= 4");
  ScaledObservation s;
  s.n = 0;
  const double t23 = std::cbrt(t_scale * t_scale), t13 = std::cbrt(t_scale);
  for (const auto& p : obs.points) {
    const double a = 2.0 * p.x * t23;
    const double k = p.tau * t_scale / 2.0 - p.x * t23 - p.h * t13 / 2.0;
    s.unrounded_a.push_back(a);
    s.unrounded_k.push_back(k);
    const auto kr = static_cast<long long>(std::llround(k));
    if (kr < 1) throw Unsupported("scaled particle index below 1");
    if (kr > 40) throw Unsupported("scaled particle index above the cap of 40");
    s.obs.points.push_back({static_cast<int>(kr), std::llround(a), 2.0 * p.tau * t_scale});
    s.n = std::max(s.n, static_cast<int>(kr));
  }
  return s;
}

std::vector<LadderRow> t_ladder(LimitKind kind, const LimitObservation& obs, const std::vector<double>& ts, int nodes) {
  if (obs.m() != 1) throw Unsupported("T ladder probe supports m = 1");
  const double lim = f_limit(kind, obs).value;
  ContourPlan plan;
  plan.circles = NestedCircleSystem::make(1, NestingOrder::standard, std::vector<double>{0.45}, std::vector<double>{0.45});
  plan.nodes = nodes;
  std::vector<LadderRow> rows;
  for (double t : ts) {
    const auto s = scaling_map(t, obs);
    const double v = kind == LimitKind::step
                         ? dy_fredholm(ParticleConfig::step(s.n), s.obs, {}, plan).real()
                         : dy_flat_delta([&] {
                             ObservationSet o = s.obs;
                             const long long c = std::max(0LL, o.max_ak());
                             for (auto& p : o.points) {
                               p.a -= 2 * c;
                               p.k += static_cast<int>(c);
                             }
                             return o;
                           }(), {}, plan).real();
    rows.push_back({t, v, lim, std::abs(v - lim)});
  }
  return rows;
}

}  // namespace tasep
