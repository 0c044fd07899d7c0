#include "tasep/cauchysum.hpp"

#include <algorithm>
#include <cmath>

#include "tasep/errors.hpp"
#include "tasep/linalg.hpp"

#include "parallel.hpp"

namespace tasep {

cplx cauchy_factor(std::span<const cplx> w, std::span<const cplx> wp) {
  return vandermonde(w) * vandermonde(wp) / cross_product(w, wp);
}

void ChainSpec::validate() const {
  const int mm = m();
  if (mm < 1) throw Invalid("chain spec needs m >= 1");
  for (int n : sizes)
    if (n < 0) throw Invalid("level sizes must be nonnegative");
  if (static_cast<int>(I.size()) != mm - 1 || static_cast<int>(J.size()) != mm - 1)
    throw Invalid("chain spec needs m-1 index sets I and J");
  for (int l = 0; l + 1 < mm; ++l) {
    for (int i : I[static_cast<std::size_t>(l)])
      if (i < 1 || i > sizes[static_cast<std::size_t>(l)]) throw Invalid("I index out of range");
    for (int j : J[static_cast<std::size_t>(l)])
      if (j < 1 || j > sizes[static_cast<std::size_t>(l + 1)]) throw Invalid("J index out of range");
  }
}

int max_chain_pole_order(const ChainSpec& spec, const std::vector<std::vector<int>>& pole_orders) {
  const int m = spec.m();
  if (static_cast<int>(pole_orders.size()) != m) throw Invalid("pole orders must cover every level");
  std::vector<std::vector<int>> best(static_cast<std::size_t>(m));
  int overall = 0;
  for (int l = 0; l < m; ++l) {
    const auto L = static_cast<std::size_t>(l);
    if (static_cast<int>(pole_orders[L].size()) != spec.sizes[L]) throw Invalid("pole orders must cover every variable");
    best[L].assign(static_cast<std::size_t>(spec.sizes[L]), 0);
    for (int i = 1; i <= spec.sizes[L]; ++i) {
      int incoming = 0;
      if (l > 0 && std::ranges::find(spec.J[L - 1], i) != spec.J[L - 1].end())
        for (int j : spec.I[L - 1]) incoming = std::max(incoming, best[L - 1][static_cast<std::size_t>(j - 1)]);
      const int v = pole_orders[L][static_cast<std::size_t>(i - 1)] + incoming;
      best[L][static_cast<std::size_t>(i - 1)] = v;
      overall = std::max(overall, v);
    }
  }
  return overall;
}

ToyProblem ToyProblem::make(std::vector<cplx> q, ToyAmplitude a, std::vector<std::vector<int>> pole_orders,
                            ChainSpec spec) {
  spec.validate();
  ToyProblem p;
  while (!q.empty() && q.back() == 0.0) q.pop_back();
  if (q.empty()) throw Invalid("q must be nonzero");
  int ord = 0;
  while (q[static_cast<std::size_t>(ord)] == 0.0) ++ord;
  if (ord == 0) throw Invalid("q must vanish at 0");
  p.q_order_ = ord;
  if (max_chain_pole_order(spec, pole_orders) > ord) throw Invalid("q does not dominate H at w = 0");
  for (std::size_t i = 1; i < q.size(); ++i) p.dq_.push_back(static_cast<double>(i) * q[i]);
  p.q_ = std::move(q);
  p.a_ = std::move(a);
  p.spec_ = std::move(spec);
  return p;
}

std::vector<cplx> ToyProblem::roots(cplx zhat) const {
  auto c = q_;
  c[0] -= zhat;
  auto r = polynomial_roots(c);
  std::ranges::sort(r, [](cplx a, cplx b) { return std::abs(a) < std::abs(b); });
  r.resize(static_cast<std::size_t>(q_order_));
  for (const auto& w : r)
    if (std::abs(polynomial_eval(q_, w) - zhat) > 1e-12 * std::max(1.0, std::abs(zhat)))
      throw Convergence("root residual too large", 0.0, std::abs(polynomial_eval(q_, w) - zhat));
  return r;
}

cplx ToyProblem::j(cplx w) const { return polynomial_eval(q_, w) / polynomial_eval(dq_, w); }

cplx cauchy_h(const ChainSpec& spec, const Levels& w) {
  cplx h = 1.0;
  for (int l = 0; l + 1 < spec.m(); ++l) {
    const auto L = static_cast<std::size_t>(l);
    std::vector<cplx> a, b;
    for (int i : spec.I[L]) a.push_back(w[L][static_cast<std::size_t>(i - 1)]);
    for (int j : spec.J[L]) b.push_back(w[L + 1][static_cast<std::size_t>(j - 1)]);
    h *= cauchy_factor(a, b);
  }
  return h;
}

namespace {

struct Var {
  int level;
  std::vector<MeasuredNode> nodes;
};

cplx tensor_sum(const std::vector<Var>& vars, const std::vector<int>& sizes,
                const std::function<cplx(const Levels&)>& f) {
  const std::size_t d = vars.size();
  if (d == 0) return f(Levels(sizes.size()));
  const std::size_t first = vars[0].nodes.size();
  std::size_t rest = 1;
  for (std::size_t i = 1; i < d; ++i) rest *= vars[i].nodes.size();
  std::vector<cplx> partial(first);
  detail::parallel_for(static_cast<std::ptrdiff_t>(first), [&](std::ptrdiff_t i) {
    const auto i0 = static_cast<std::size_t>(i);
    std::vector<cplx> acc;
    acc.reserve(rest);
    Levels w(sizes.size());
    for (std::size_t flat = 0; flat < rest; ++flat) {
      for (auto& x : w) x.clear();
      std::size_t idx = flat;
      cplx weight = 1.0;
      for (std::size_t k = 0; k < d; ++k) {
        std::size_t j = i0;
        if (k > 0) {
          j = idx % vars[k].nodes.size();
          idx /= vars[k].nodes.size();
        }
        weight *= vars[k].nodes[j].weight;
        w[static_cast<std::size_t>(vars[k].level - 1)].push_back(vars[k].nodes[j].point);
      }
      acc.push_back(weight * f(w));
    }
    partial[i0] = pairwise_sum(acc);
  });
  return pairwise_sum(partial);
}

}  // namespace

cplx g_sum(const ToyProblem& problem, std::span<const cplx> z) {
  const auto& spec = problem.spec();
  const int m = spec.m();
  if (static_cast<int>(z.size()) != m) throw Invalid("g_sum needs z_0..z_{m-1}");
  if (std::abs(z[0]) == 0.0) throw Invalid("g_sum needs z_0 != 0");
  for (std::size_t l = 1; l < z.size(); ++l)
    if (!(std::abs(z[l]) > 0.0 && std::abs(z[l]) < 1.0)) throw Invalid("g_sum needs 0 < |z_l| < 1");
  std::vector<Var> vars;
  cplx zhat = 1.0;
  for (int l = 1; l <= m; ++l) {
    zhat *= z[static_cast<std::size_t>(l - 1)];
    std::vector<MeasuredNode> nodes;
    for (const auto& w : problem.roots(zhat)) nodes.push_back({w, problem.j(w)});
    for (int i = 0; i < spec.sizes[static_cast<std::size_t>(l - 1)]; ++i) vars.push_back({l, nodes});
  }
  return tensor_sum(vars, spec.sizes, [&](const Levels& w) { return cauchy_h(spec, w) * problem.amplitude(w, z); });
}

cplx g_zero_contour(const ToyProblem& problem, std::span<const cplx> z, const ZeroContourPlan& plan) {
  const auto& spec = problem.spec();
  const int m = spec.m();
  if (static_cast<int>(z.size()) != m - 1) throw Invalid("g_zero_contour needs z_1..z_{m-1}");
  const auto radii = geometric_radii(2 * m - 1, plan.hi, plan.lo);
  // out m..2, then 1, then in 2..m
  std::vector<LevelCircle> circles;
  for (int l = m; l >= 2; --l) circles.push_back({l, Role::out, 0.0});
  circles.push_back({1, Role::single, 0.0});
  for (int l = 2; l <= m; ++l) circles.push_back({l, Role::in, 0.0});
  for (std::size_t i = 0; i < circles.size(); ++i) circles[i].radius = radii[i];
  std::vector<Var> vars;
  for (int l = 1; l <= m; ++l) {
    std::vector<MeasuredNode> nodes;
    for (const auto& c : circles) {
      if (c.level != l) continue;
      for (const auto& n : circle_nodes({0.0, c.radius, plan.nodes}, dmu_prefactor(c, NestingOrder::standard, z)))
        nodes.push_back(n);
    }
    for (int i = 0; i < spec.sizes[static_cast<std::size_t>(l - 1)]; ++i) vars.push_back({l, nodes});
  }
  std::vector<cplx> zz{0.0};
  zz.insert(zz.end(), z.begin(), z.end());
  return tensor_sum(vars, spec.sizes, [&](const Levels& w) { return cauchy_h(spec, w) * problem.amplitude(w, zz); });
}

}  // namespace tasep
