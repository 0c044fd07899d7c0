#include <algorithm>
#include <cmath>

#include "tasep/errors.hpp"
#include "tasep/linalg.hpp"
#include "tasep/multipoint.hpp"

#include "parallel.hpp"

namespace tasep {

namespace {

struct VarNodes {
  int level;
  Side side;
  std::vector<MeasuredNode> nodes;
};

std::vector<MeasuredNode> level_nodes(const ContourPlan& plan, Side side, int level, std::span<const cplx> z) {
  const auto& fam = side == Side::left ? plan.circles.left : plan.circles.right;
  const cplx center = side == Side::left ? cplx(-1.0, 0.0) : cplx(0.0, 0.0);
  std::vector<MeasuredNode> out;
  for (const auto& c : fam) {
    if (c.level != level) continue;
    for (const auto& n : circle_nodes({center, c.radius, plan.nodes}, dmu_prefactor(c, plan.circles.order, z)))
      out.push_back(n);
  }
  return out;
}

double factorial(int n) {
  double r = 1.0;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

cplx term_integrand(const ObservationSet& obs, std::span<const cplx> z,
                    const std::vector<int>& n, const std::vector<std::vector<cplx>>& u,
                    const std::vector<std::vector<cplx>>& v, const KessEvaluator& kess_eval) {
  const int m = obs.m();
  cplx r = 1.0;
  const int n1 = n[0];
  if (n1 > 0) {
    CMatrix k(n1, n1);
    for (int i = 0; i < n1; ++i)
      for (int j = 0; j < n1; ++j) k(i, j) = kess_eval(v[0][static_cast<std::size_t>(i)], u[0][static_cast<std::size_t>(j)]);
    const double sign = (n1 * (n1 + 1) / 2) % 2 == 0 ? 1.0 : -1.0;
    r *= sign * vandermonde(u[0]) * vandermonde(v[0]) / cross_product(u[0], v[0]) * determinant(k);
  }
  for (int l = 1; l < m; ++l) {
    const auto& ul = u[static_cast<std::size_t>(l)];
    const auto& vl = v[static_cast<std::size_t>(l)];
    if (ul.empty()) continue;
    const cplx q = vandermonde(ul) * vandermonde(vl) / cross_product(ul, vl);
    r *= q * q;
  }
  for (int l = 0; l < m; ++l) {
    for (const auto& w : u[static_cast<std::size_t>(l)]) r *= f_level(l + 1, w, Side::left, obs);
    for (const auto& w : v[static_cast<std::size_t>(l)]) r *= f_level(l + 1, w, Side::right, obs);
  }
  for (int l = 0; l + 1 < m; ++l) {
    const auto i = static_cast<std::size_t>(l);
    r *= cross_product(u[i], v[i + 1]) * cross_product(v[i], u[i + 1]) /
         (cross_product(u[i], u[i + 1]) * cross_product(v[i], v[i + 1]));
    r *= ipow(1.0 - z[i], n[i]) * ipow(1.0 - 1.0 / z[i], n[i + 1]);
  }
  return r;
}

cplx series_term(const ParticleConfig& y, const ObservationSet& obs, std::span<const cplx> z, const ContourPlan& plan,
                 const std::vector<int>& n) {
  const int m = obs.m();
  std::vector<VarNodes> vars;
  for (int l = 1; l <= m; ++l)
    for (Side side : {Side::left, Side::right})
      for (int i = 0; i < n[static_cast<std::size_t>(l - 1)]; ++i) vars.push_back({l, side, level_nodes(plan, side, l, z)});
  if (vars.empty()) return 1.0;
  const KessEvaluator kess_eval(y);
  const std::size_t d = vars.size();
  const std::size_t first = vars[0].nodes.size();
  std::size_t rest = 1;
  for (std::size_t i = 1; i < d; ++i) rest *= vars[i].nodes.size();
  std::vector<cplx> partial(first);
  detail::parallel_for(static_cast<std::ptrdiff_t>(first), [&](std::ptrdiff_t i) {
    const auto i0 = static_cast<std::size_t>(i);
    std::vector<cplx> acc;
    acc.reserve(rest);
    std::vector<std::vector<cplx>> u(static_cast<std::size_t>(m)), v(static_cast<std::size_t>(m));
    for (std::size_t flat = 0; flat < rest; ++flat) {
      for (auto& x : u) x.clear();
      for (auto& x : v) x.clear();
      std::size_t idx = flat;
      cplx weight = 1.0;
      for (std::size_t k = 0; k < d; ++k) {
        std::size_t j = i0;
        if (k > 0) {
          j = idx % vars[k].nodes.size();
          idx /= vars[k].nodes.size();
        }
        const auto& node = vars[k].nodes[j];
        weight *= node.weight;
        (vars[k].side == Side::left ? u : v)[static_cast<std::size_t>(vars[k].level - 1)].push_back(node.point);
      }
      acc.push_back(weight * term_integrand(obs, z, n, u, v, kess_eval));
    }
    partial[i0] = pairwise_sum(acc);
  });
  double nf = 1.0;
  for (int x : n) nf *= factorial(x);
  return pairwise_sum(partial) / (nf * nf);
}

}  // namespace

cplx dy_series(const ParticleConfig& y, const ObservationSet& obs, std::span<const cplx> z, const ContourPlan& plan,
               int n_cap) {
  obs.validate_for(y);
  const int m = obs.m();
  if (static_cast<int>(z.size()) != m - 1) throw Invalid("z vector must have m-1 entries");
  plan.validate(m);
  const int cap = n_cap < 0 ? y.size() : n_cap;
  if (2 * cap * m > 8) throw Unsupported("series cost guard: total quadrature dimension exceeds 8");
  std::vector<int> n(static_cast<std::size_t>(m), 0);
  std::vector<cplx> terms;
  while (true) {
    terms.push_back(series_term(y, obs, z, plan, n));
    std::size_t i = 0;
    while (i < n.size() && n[i] == cap) n[i++] = 0;
    if (i == n.size()) break;
    ++n[i];
  }
  return pairwise_sum(terms);
}

}  // namespace tasep
