#include "tasep/quadrature.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <numbers>

#include "tasep/errors.hpp"

#include "parallel.hpp"

namespace tasep {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

template <class T>
T pairwise_impl(std::span<const T> v) {
  if (v.size() <= 8) {
    T s{};
    for (const auto& x : v) s += x;
    return s;
  }
  const std::size_t h = v.size() / 2;
  return pairwise_impl(v.subspan(0, h)) + pairwise_impl(v.subspan(h));
}

}  // namespace

void CircleContour::validate() const {
  if (!(radius > 0.0) || !std::isfinite(radius)) throw Invalid("circle radius must be positive");
  if (nodes < 8 || !is_power_of_two(nodes)) throw Invalid("circle node count must be a power of two >= 8");
}

std::vector<MeasuredNode> circle_nodes(const CircleContour& c, cplx prefactor) {
  c.validate();
  std::vector<MeasuredNode> out(static_cast<std::size_t>(c.nodes));
  const double sign = c.counterclockwise ? 1.0 : -1.0;
  for (int j = 0; j < c.nodes; ++j) {
    const cplx e = std::polar(1.0, c.phase + kTwoPi * j / c.nodes);
    out[static_cast<std::size_t>(j)] = {c.center + c.radius * e, prefactor * sign * c.radius * e / double(c.nodes)};
  }
  return out;
}

cplx pairwise_sum(std::span<const cplx> values) { return pairwise_impl(values); }
double pairwise_sum(std::span<const double> values) { return pairwise_impl(values); }

cplx integrate_circle(const ComplexFn& f, const CircleContour& c) {
  const auto nodes = circle_nodes(c);
  std::vector<cplx> terms(nodes.size());
  for (std::size_t j = 0; j < nodes.size(); ++j) {
    const cplx v = f(nodes[j].point);
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw NumericalDomain("integrand is not finite on the contour");
    terms[j] = v * nodes[j].weight;
  }
  return pairwise_sum(std::span<const cplx>(terms));
}

AdaptiveResult adaptive_integrate(const ComplexFn& f, CircleContour c, double tol, int node_cap) {
  if (!(tol > 0.0)) throw Invalid("tolerance must be positive");
  cplx prev = integrate_circle(f, c);
  double diff = 0.0;
  while (c.nodes < node_cap) {
    c.nodes *= 2;
    const cplx cur = integrate_circle(f, c);
    diff = std::abs(cur - prev);
    prev = cur;
    if (diff < tol) return {cur, diff, c.nodes};
  }
  throw Convergence("adaptive circle quadrature reached the node cap", prev, diff);
}

cplx z_polydisc_integrate(const PolydiscFn& g, std::span<const double> radii, int nodes) {
  const std::size_t d = radii.size();
  if (d == 0) return g({});
  if (nodes < 1) throw Invalid("z grid needs at least one node");
  for (double r : radii)
    if (!(r > 0.0) || std::abs(r - 1.0) < 1e-12) throw Invalid("z radius must be positive and not 1");
  std::size_t total = 1;
  for (std::size_t i = 0; i < d; ++i) total *= static_cast<std::size_t>(nodes);
  std::vector<cplx> vals(total);
  detail::parallel_for(static_cast<std::ptrdiff_t>(total), [&](std::ptrdiff_t idx) {
    std::vector<cplx> z(d);
    std::size_t rest = static_cast<std::size_t>(idx);
    for (std::size_t i = 0; i < d; ++i) {
      const std::size_t j = rest % static_cast<std::size_t>(nodes);
      rest /= static_cast<std::size_t>(nodes);
      z[i] = std::polar(radii[i], kTwoPi * double(j) / nodes);
    }
    vals[static_cast<std::size_t>(idx)] = g(z);
  });
  for (const auto& v : vals)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) throw NumericalDomain("z integrand is not finite");
  return pairwise_sum(std::span<const cplx>(vals)) / double(total);
}

std::vector<double> geometric_radii(int count, double hi, double lo) {
  if (count == 1) return {0.5 * (hi + lo)};
  std::vector<double> r(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) r[static_cast<std::size_t>(i)] = hi * std::pow(lo / hi, double(i) / (count - 1));
  return r;
}

NestedCircleSystem NestedCircleSystem::make(int m, NestingOrder order, std::span<const double> left_radii,
                                            std::span<const double> right_radii) {
  if (m < 1) throw Invalid("level count must be positive");
  const auto n = static_cast<std::size_t>(2 * m - 1);
  if (left_radii.size() != n || right_radii.size() != n) throw Invalid("need 2m-1 radii per family");
  std::vector<std::pair<int, Role>> pattern;
  if (order == NestingOrder::standard) {
    for (int l = m; l >= 2; --l) pattern.emplace_back(l, Role::out);
    pattern.emplace_back(1, Role::single);
    for (int l = 2; l <= m; ++l) pattern.emplace_back(l, Role::in);
  } else {
    for (int l = 1; l <= m - 1; ++l) pattern.emplace_back(l, Role::out);
    pattern.emplace_back(m, Role::single);
    for (int l = m - 1; l >= 1; --l) pattern.emplace_back(l, Role::in);
  }
  NestedCircleSystem s;
  s.m = m;
  s.order = order;
  for (std::size_t i = 0; i < n; ++i) {
    s.left.push_back({pattern[i].first, pattern[i].second, left_radii[i]});
    s.right.push_back({pattern[i].first, pattern[i].second, right_radii[i]});
  }
  s.validate();
  return s;
}

NestedCircleSystem NestedCircleSystem::standard(int m, double lo, double hi) {
  const auto r = geometric_radii(2 * m - 1, hi, lo);
  return make(m, NestingOrder::standard, r, r);
}

NestedCircleSystem NestedCircleSystem::reversed(int m, double lo, double hi) {
  const auto r = geometric_radii(2 * m - 1, hi, lo);
  return make(m, NestingOrder::reversed, r, r);
}

void NestedCircleSystem::validate() const {
  const auto n = static_cast<std::size_t>(2 * m - 1);
  if (left.size() != n || right.size() != n) throw Invalid("family size must be 2m-1");
  double lmax = 0.0, rmax = 0.0;
  for (const auto* fam : {&left, &right}) {
    for (std::size_t i = 0; i < n; ++i) {
      const double r = (*fam)[i].radius;
      if (!(r > 0.0) || r >= 1.0) throw Invalid("family radii must lie in (0,1)");
      if (i > 0 && !((*fam)[i - 1].radius > r)) throw Invalid("radii must decrease strictly from out to in");
    }
  }
  lmax = left.front().radius;
  rmax = right.front().radius;
  if (!(lmax + rmax < 1.0)) throw Invalid("left and right families intersect");
}

cplx dmu_prefactor(const LevelCircle& c, NestingOrder order, std::span<const cplx> z) {
  if (c.role == Role::single) return 1.0;
  if (order == NestingOrder::standard) {
    const cplx zz = z[static_cast<std::size_t>(c.level - 2)];
    return c.role == Role::out ? -zz / (1.0 - zz) : 1.0 / (1.0 - zz);
  }
  const cplx zz = z[static_cast<std::size_t>(c.level - 1)];
  return c.role == Role::out ? 1.0 / (1.0 - zz) : -zz / (1.0 - zz);
}

void RaySegmentContour::validate() const {
  if (!(s_max > 0.0)) throw Invalid("ray cutoff must be positive");
  if (panels < 1) throw Invalid("ray needs at least one panel");
}

std::vector<MeasuredNode> ray_nodes(const RaySegmentContour& c, cplx prefactor) {
  c.validate();
  using GL = boost::math::quadrature::gauss<double, 16>;
  const auto& xa = GL::abscissa();
  const auto& wa = GL::weights();
  std::vector<double> x, w;
  for (std::size_t i = 0; i < xa.size(); ++i) {
    x.push_back(-xa[i]);
    w.push_back(wa[i]);
    x.push_back(xa[i]);
    w.push_back(wa[i]);
  }
  std::vector<MeasuredNode> out;
  const cplx to_2pii = 1.0 / cplx(0.0, kTwoPi);
  const double h = c.s_max / c.panels;
  for (int sgn : {-1, 1}) {
    const cplx dir = std::polar(1.0, sgn * c.angle);
    const cplx ds = (sgn > 0 ? dir : -dir) * to_2pii * prefactor;
    for (int p = 0; p < c.panels; ++p) {
      const double a = p * h, b = a + h;
      for (std::size_t i = 0; i < x.size(); ++i) {
        const double s = 0.5 * (b - a) * x[i] + 0.5 * (a + b);
        out.push_back({c.vertex + s * dir, ds * 0.5 * (b - a) * w[i]});
      }
    }
  }
  return out;
}

double ray_cutoff(const std::function<double(double)>& majorant, double tol, double s_cap) {
  double last_bad = 0.0;
  for (double s = 0.25; s <= s_cap; s += 0.25)
    if (!(majorant(s) < tol)) last_bad = s;
  if (last_bad >= s_cap) throw Unsupported("ray majorant does not decay below tolerance");
  return std::max(1.0, last_bad + 0.25);
}

}  // namespace tasep
