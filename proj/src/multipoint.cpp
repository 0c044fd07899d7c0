#include "tasep/multipoint.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "tasep/errors.hpp"
#include "tasep/linalg.hpp"

namespace tasep {

namespace {

struct KNode {
  int level;
  Side side;
  cplx w;
  cplx weight;
};

bool in_s1(int level, Side side) { return (level % 2 == 1) == (side == Side::left); }

std::vector<KNode> family_nodes(const NestedCircleSystem& sys, Side side, std::span<const cplx> z, int nodes) {
  const auto& fam = side == Side::left ? sys.left : sys.right;
  const cplx center = side == Side::left ? cplx(-1.0, 0.0) : cplx(0.0, 0.0);
  std::vector<KNode> out;
  for (const auto& c : fam) {
    const cplx pre = dmu_prefactor(c, sys.order, z);
    for (const auto& n : circle_nodes({center, c.radius, nodes}, pre)) out.push_back({c.level, side, n.point, n.weight});
  }
  return out;
}

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

bool k1_coupled(int i, int j) { return i == j || i == j + (i % 2 == 0 ? 1 : -1); }
bool ky_coupled(int i, int j) { return j == i || j == i - (j % 2 == 0 ? 1 : -1); }

void check_z(std::span<const cplx> z, int m) {
  if (static_cast<int>(z.size()) != m - 1) throw Invalid("z vector must have m-1 entries");
  for (const auto& x : z)
    if (std::abs(x) == 0.0 || std::abs(x - 1.0) < 1e-14) throw Invalid("z entries must avoid 0 and 1");
}

struct Assembly {
  std::vector<KNode> s1, s2;
  CMatrix k1;
  CVector wa, wb, fa, fb;
};

Assembly assemble_k1(const ObservationSet& obs, std::span<const cplx> z, const ContourPlan& plan,
                     std::span<const cplx> f_scale) {
  const int m = obs.m();
  Assembly as;
  for (Side side : {Side::left, Side::right})
    for (const auto& n : family_nodes(plan.circles, side, z, plan.nodes))
      (in_s1(n.level, n.side) ? as.s1 : as.s2).push_back(n);
  const auto na = static_cast<Eigen::Index>(as.s1.size());
  const auto nb = static_cast<Eigen::Index>(as.s2.size());
  as.wa.resize(na);
  as.wb.resize(nb);
  as.fa.resize(na);
  as.fb.resize(nb);
  for (Eigen::Index a = 0; a < na; ++a) {
    const auto& n = as.s1[static_cast<std::size_t>(a)];
    as.wa(a) = n.weight;
    as.fa(a) = f_level(n.level, n.w, n.side, obs, f_scale);
  }
  for (Eigen::Index b = 0; b < nb; ++b) {
    const auto& n = as.s2[static_cast<std::size_t>(b)];
    as.wb(b) = n.weight;
    as.fb(b) = f_level(n.level, n.w, n.side, obs, f_scale);
  }
  as.k1 = CMatrix::Zero(na, nb);
  for (Eigen::Index a = 0; a < na; ++a) {
    const auto& p = as.s1[static_cast<std::size_t>(a)];
    for (Eigen::Index b = 0; b < nb; ++b) {
      const auto& q = as.s2[static_cast<std::size_t>(b)];
      if (k1_coupled(p.level, q.level)) as.k1(a, b) = as.fa(a) / (p.w - q.w) * q1(q.level, m, z);
    }
  }
  return as;
}

long long ak(const Observation& o) { return o.a + o.k; }

}  // namespace

void ObservationSet::validate() const {
  if (points.empty()) throw Invalid("observation set must be nonempty");
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& p = points[i];
    if (p.k < 1) throw Invalid("particle index must be >= 1");
    if (!(p.t >= 0.0) || !std::isfinite(p.t)) throw Invalid("times must be finite and nonnegative");
    if (i > 0 && p.t < points[i - 1].t) throw Invalid("observations must be sorted by time");
    for (std::size_t j = 0; j < i; ++j)
      if (points[j].k == p.k && points[j].t == p.t) throw Invalid("observation points (k,t) must be distinct");
  }
}

void ObservationSet::validate_for(const ParticleConfig& y) const {
  validate();
  y.validate();
  if (max_k() > y.size()) throw Invalid("particle index exceeds N");
}

int ObservationSet::max_k() const {
  int r = 0;
  for (const auto& p : points) r = std::max(r, p.k);
  return r;
}

long long ObservationSet::max_ak() const {
  long long r = ak(points.front());
  for (const auto& p : points) r = std::max(r, ak(p));
  return r;
}

long long ObservationSet::min_ak() const {
  long long r = ak(points.front());
  for (const auto& p : points) r = std::min(r, ak(p));
  return r;
}

ObservationSet ObservationSet::without(int s) const {
  if (s < 1 || s > m()) throw Invalid("observation index out of range");
  ObservationSet o;
  for (int i = 1; i <= m(); ++i)
    if (i != s) o.points.push_back(points[static_cast<std::size_t>(i - 1)]);
  return o;
}

ContourPlan ContourPlan::standard(int m, int nodes) {
  ContourPlan p;
  p.circles = NestedCircleSystem::standard(m);
  p.nodes = nodes;
  return p;
}

void ContourPlan::validate(int m) const {
  if (circles.m != m) throw Invalid("contour plan level count does not match observations");
  circles.validate();
  if (nodes < 8 || (nodes & (nodes - 1)) != 0) throw Invalid("node count must be a power of two >= 8");
  if (!(z_radius > 0.0 && z_radius < 1.0)) throw Invalid("inner z radius must lie in (0,1)");
  if (!(z_outer_radius > 1.0)) throw Invalid("outer z radius must exceed 1");
  if (z_nodes < 4) throw Invalid("z node count must be >= 4");
}

ContourPlan ContourPlan::coarse() const {
  ContourPlan p = *this;
  p.nodes = std::max(8, nodes / 2);
  p.z_nodes = std::max(4, z_nodes / 2);
  return p;
}

cplx f_level(int level, cplx w, Side side, const ObservationSet& obs, std::span<const cplx> f_scale) {
  if (level < 1 || level > obs.m()) throw Invalid("level out of range");
  const auto& cur = obs.points[static_cast<std::size_t>(level - 1)];
  long long dk = cur.k, dak = ak(cur);
  double dt = cur.t;
  if (level > 1) {
    const auto& prev = obs.points[static_cast<std::size_t>(level - 2)];
    dk -= prev.k;
    dak -= ak(prev);
    dt -= prev.t;
  }
  cplx c = 1.0;
  if (!f_scale.empty()) {
    c = f_scale[static_cast<std::size_t>(level - 1)];
    if (level > 1) c /= f_scale[static_cast<std::size_t>(level - 2)];
  }
  if (side == Side::left) {
    if (std::abs(w + 1.0) == 0.0) throw Degenerate("f_level evaluated at -1");
    return c * ipow(w, dk) * ipow(w + 1.0, -dak) * std::exp(dt * w);
  }
  if (std::abs(w) == 0.0) throw Degenerate("f_level evaluated at 0");
  return ipow(w, -dk) * ipow(w + 1.0, dak) * std::exp(-dt * w) / c;
}

cplx dy_fredholm(const ParticleConfig& y, const ObservationSet& obs, std::span<const cplx> z, const ContourPlan& plan,
                 const KernelOptions& opt) {
  obs.validate_for(y);
  const int m = obs.m();
  check_z(z, m);
  plan.validate(m);
  auto as = assemble_k1(obs, z, plan, opt.f_scale);
  const KessEvaluator kess_eval(y);
  const auto na = static_cast<Eigen::Index>(as.s1.size());
  const auto nb = static_cast<Eigen::Index>(as.s2.size());
  CMatrix ky = CMatrix::Zero(nb, na);
  for (Eigen::Index b = 0; b < nb; ++b) {
    const auto& q = as.s2[static_cast<std::size_t>(b)];
    for (Eigen::Index a = 0; a < na; ++a) {
      const auto& p = as.s1[static_cast<std::size_t>(a)];
      if (p.level >= 2) {
        if (ky_coupled(p.level, q.level)) ky(b, a) = as.fb(b) / (q.w - p.w) * q2(p.level, m, z);
      } else if (q.level == 1) {
        cplx k = kess_eval(q.w, p.w);
        if (opt.null_kernel) k += opt.null_kernel(q.w, p.w);
        ky(b, a) = as.fb(b) * k;
      }
    }
  }
  const CMatrix mm = (as.k1 * as.wb.asDiagonal()) * (ky * as.wa.asDiagonal());
  return determinant(CMatrix::Identity(na, na) - mm);
}

cplx dy_flat_delta(const ObservationSet& obs, std::span<const cplx> z, const ContourPlan& plan) {
  obs.validate();
  const int m = obs.m();
  check_z(z, m);
  plan.validate(m);
  if (plan.circles.order != NestingOrder::standard) throw Invalid("flat delta route needs the standard nesting order");
  if (obs.max_ak() > 0) throw Unsupported("flat delta route needs max(a+k) <= 0");
  auto as = assemble_k1(obs, z, plan, {});
  const auto na = static_cast<Eigen::Index>(as.s1.size());
  const auto nb = static_cast<Eigen::Index>(as.s2.size());
  std::vector<Eigen::Index> l1, r1;
  for (Eigen::Index a = 0; a < na; ++a)
    if (as.s1[static_cast<std::size_t>(a)].level == 1) l1.push_back(a);
  for (Eigen::Index b = 0; b < nb; ++b)
    if (as.s2[static_cast<std::size_t>(b)].level == 1) r1.push_back(b);
  if (l1.size() != r1.size()) throw Invalid("reflection node mismatch");
  // rebuild level-1 left nodes as exact reflections -1-v of the level-1 right nodes
  for (std::size_t i = 0; i < l1.size(); ++i) {
    auto& p = as.s1[static_cast<std::size_t>(l1[i])];
    const auto& q = as.s2[static_cast<std::size_t>(r1[i])];
    p.w = -1.0 - q.w;
    as.wa(l1[i]) = -q.weight;
    as.fa(l1[i]) = f_level(1, p.w, Side::left, obs);
    for (Eigen::Index b = 0; b < nb; ++b) {
      const auto& qq = as.s2[static_cast<std::size_t>(b)];
      if (k1_coupled(1, qq.level)) as.k1(l1[i], b) = as.fa(l1[i]) / (p.w - qq.w) * q1(qq.level, m, z);
    }
  }
  CMatrix kyw = CMatrix::Zero(nb, na);
  for (Eigen::Index b = 0; b < nb; ++b) {
    const auto& q = as.s2[static_cast<std::size_t>(b)];
    for (Eigen::Index a = 0; a < na; ++a) {
      const auto& p = as.s1[static_cast<std::size_t>(a)];
      if (p.level >= 2 && ky_coupled(p.level, q.level))
        kyw(b, a) = as.fb(b) / (q.w - p.w) * q2(p.level, m, z) * as.wa(a);
    }
  }
  for (std::size_t i = 0; i < l1.size(); ++i) kyw(r1[i], l1[i]) = as.fb(r1[i]);
  const CMatrix mm = (as.k1 * as.wb.asDiagonal()) * kyw;
  return determinant(CMatrix::Identity(na, na) - mm);
}

namespace {

using DyFn = std::function<cplx(std::span<const cplx>, const ContourPlan&)>;

ProbabilityResult integrate_dy(const DyFn& dy, int m, const ContourPlan& plan, const std::vector<int>& outside,
                               const std::string& provenance) {
  auto eval = [&](const ContourPlan& p) {
    std::vector<double> radii(static_cast<std::size_t>(m - 1), p.z_radius);
    for (int l : outside) radii[static_cast<std::size_t>(l - 1)] = p.z_outer_radius;
    return z_polydisc_integrate(
        [&](std::span<const cplx> z) {
          cplx v = dy(z, p);
          for (const auto& x : z) v /= 1.0 - x;
          return v;
        },
        radii, p.z_nodes);
  };
  const double sign = outside.size() % 2 == 0 ? 1.0 : -1.0;
  ProbabilityResult r;
  r.raw = sign * eval(plan);
  r.error = std::abs(sign * eval(plan.coarse()) - r.raw);
  r.imag_residue = std::abs(r.raw.imag());
  r.value = r.raw.real();
  r.provenance = provenance;
  if (r.imag_residue > 1e-6) r.warnings.push_back("imaginary residue above 1e-6");
  constexpr double eps = 1e-6;
  if (r.value < -eps || r.value > 1.0 + eps) {
    r.warnings.push_back("value outside the probability window");
    r.value = std::clamp(r.value, -eps, 1.0 + eps);
  }
  return r;
}

}  // namespace

ProbabilityResult joint_probability(const ParticleConfig& y, const ObservationSet& obs, const ContourPlan& plan) {
  obs.validate_for(y);
  plan.validate(obs.m());
  return integrate_dy([&](std::span<const cplx> z, const ContourPlan& p) { return dy_fredholm(y, obs, z, p); },
                      obs.m(), plan, {}, "fredholm");
}

ProbabilityResult signed_probability(const ParticleConfig& y, const ObservationSet& obs, const ContourPlan& plan,
                                     const std::vector<int>& outside) {
  obs.validate_for(y);
  plan.validate(obs.m());
  for (int l : outside)
    if (l < 1 || l > obs.m() - 1) throw Invalid("outside index must lie in 1..m-1");
  return integrate_dy([&](std::span<const cplx> z, const ContourPlan& p) { return dy_fredholm(y, obs, z, p); },
                      obs.m(), plan, outside, "fredholm-signed");
}

double reduction_identity_residual(const ParticleConfig& y, const ObservationSet& obs, const ContourPlan& plan, int s,
                                   bool inside_only) {
  const int m = obs.m();
  if (m < 2) throw Invalid("reduction identity needs m >= 2");
  if (s < 1 || s > (inside_only ? m : m - 1)) throw Invalid("reduction level out of range");
  if (inside_only) {
    const auto& p = obs.points[static_cast<std::size_t>(s - 1)];
    if (!(p.a + p.k == obs.min_ak() && p.a + p.k < y.edge()))
      throw Invalid("inside-only reduction needs a_s+k_s = min < y_N+N");
  }
  const int var = s == m ? m - 1 : s;
  const auto base = sample_z(m);
  auto circle = [&](double radius) {
    std::vector<double> r{radius};
    return z_polydisc_integrate(
        [&](std::span<const cplx> zs) {
          auto z = base;
          z[static_cast<std::size_t>(var - 1)] = zs[0];
          return dy_fredholm(y, obs, z, plan) / (1.0 - zs[0]);
        },
        r, plan.z_nodes);
  };
  cplx lhs = circle(plan.z_radius);
  if (!inside_only) lhs -= circle(plan.z_outer_radius);
  auto zr = base;
  zr.erase(zr.begin() + (var - 1));
  const auto reduced = obs.without(s);
  ContourPlan rp = plan;
  rp.circles = NestedCircleSystem::standard(m - 1);
  return std::abs(lhs - dy_fredholm(y, reduced, zr, rp));
}

InvarianceReport invariance_suite(const ParticleConfig& y, const ObservationSet& obs, const ContourPlan& plan) {
  const int m = obs.m();
  const auto z = sample_z(m);
  const cplx base = dy_fredholm(y, obs, z, plan);
  InvarianceReport r;

  std::vector<double> lr, rr;
  for (const auto& c : plan.circles.left) lr.push_back(c.radius);
  for (const auto& c : plan.circles.right) rr.push_back(c.radius);
  ContourPlan rev = plan;
  rev.circles = NestedCircleSystem::make(m, NestingOrder::reversed, lr, rr);
  r.reorder = std::abs(dy_fredholm(y, obs, z, rev) - base);

  KernelOptions scaled;
  for (int i = 1; i <= m; ++i) scaled.f_scale.push_back(std::polar(1.0 + 0.37 * i, 0.9 * i));
  r.scaling = std::abs(dy_fredholm(y, obs, z, plan, scaled) - base);

  constexpr long long c = 3;
  ParticleConfig ys = y;
  for (auto& v : ys.y) v += c;
  ObservationSet os = obs;
  for (auto& p : os.points) p.a += c;
  r.shift = std::abs(dy_fredholm(ys, os, z, plan) - base);

  KernelOptions nul;
  const int kmax = obs.max_k();
  nul.null_kernel = [kmax](cplx v, cplx u) { return ipow(v, kmax) * std::exp(u); };
  r.null_kernel = std::abs(dy_fredholm(y, obs, z, plan, nul) - base);
  return r;
}

ProbabilityResult flat_probability(const ObservationSet& obs, const ContourPlan& plan, FlatMode mode,
                                   long long translation) {
  obs.validate();
  plan.validate(obs.m());
  ObservationSet shifted = obs;
  if (mode == FlatMode::infinite) {
    const long long c = translation >= 0 ? translation : std::max(0LL, obs.max_ak());
    for (auto& p : shifted.points) {
      p.a -= 2 * c;
      p.k += static_cast<int>(c);
    }
  }
  if (shifted.max_ak() > 0) throw Unsupported("flat route needs max(a+k) <= 0 after translation");
  return integrate_dy([&](std::span<const cplx> z, const ContourPlan& p) { return dy_flat_delta(shifted, z, p); },
                      obs.m(), plan, {}, "fredholm-flat");
}

ParticleCoordinate height_to_particle(long long n, long long a) {
  if ((a - n) % 2 != 0) throw Invalid("height and site must have equal parity");
  return {static_cast<int>((a - n) / 2), n};
}

std::vector<cplx> sample_z(int m) {
  std::vector<cplx> z;
  for (int l = 1; l < m; ++l) z.push_back(std::polar(0.45, 0.4 + 0.9 * l));
  return z;
}

}  // namespace tasep
