#include "tasep/periodic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "tasep/errors.hpp"
#include "tasep/linalg.hpp"

namespace tasep {

void PeriodicParams::validate() const {
  if (n < 1 || period <= n) throw Invalid("periodic parameters need L > N >= 1");
}

double PeriodicParams::r_c() const {
  const double nn = n, ll = period, rest = period - n;
  return std::exp(nn * std::log(nn) + rest * std::log(rest) - ll * std::log(ll));
}

namespace {

cplx q_of(cplx w, const PeriodicParams& p) { return ipow(w, p.n) * ipow(w + 1.0, p.period - p.n); }

// J = q/q'
cplx j_of(cplx w, const PeriodicParams& p) {
  return w * (w + 1.0) / (static_cast<double>(p.period) * w + static_cast<double>(p.n));
}

}  // namespace

BetheRootSet bethe_roots(const PeriodicParams& p, cplx z) {
  p.validate();
  if (std::abs(z) == 0.0) throw Invalid("Bethe roots need z != 0");
  if (std::abs(z) >= p.r_c()) throw Unsupported("|z| >= r_c: root classification undefined");
  const int rest = p.period - p.n;
  // coefficients of w^N (w+1)^{L-N} - z, index = power
  std::vector<cplx> c(static_cast<std::size_t>(p.period + 1), 0.0);
  double binom = 1.0;
  for (int j = 0; j <= rest; ++j) {
    c[static_cast<std::size_t>(p.n + j)] = binom;
    binom = binom * (rest - j) / (j + 1);
  }
  c[0] -= z;
  BetheRootSet r{z, {}, {}, 0.0};
  for (const auto& w : polynomial_roots(c)) {
    r.max_residual = std::max(r.max_residual, std::abs(q_of(w, p) - z));
    (w.real() < p.w_c() ? r.left : r.right).push_back(w);
  }
  if (r.max_residual > 1e-11) throw Convergence("Bethe root residual above 1e-11", 0.0, r.max_residual);
  if (static_cast<int>(r.left.size()) != rest || static_cast<int>(r.right.size()) != p.n)
    throw Convergence("Bethe root classification produced wrong counts", 0.0, r.max_residual);
  auto key = [](cplx a, cplx b) { return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag(); };
  std::sort(r.left.begin(), r.left.end(), key);
  std::sort(r.right.begin(), r.right.end(), key);
  return r;
}

cplx frak_h(cplx w, Side side, const BetheRootSet& roots, const PeriodicParams& p) {
  if (side == Side::left) {
    if (std::abs(w) == 0.0) throw Degenerate("frak_h evaluated at 0");
    cplx v = 1.0;
    for (const auto& r : roots.right) v *= (w - r) / w;
    return v;
  }
  if (std::abs(w + 1.0) == 0.0) throw Degenerate("frak_h evaluated at -1");
  cplx v = 1.0;
  for (const auto& r : roots.left) v *= (w - r) / (w + 1.0);
  (void)p;
  return v;
}

cplx frak_h(cplx w, Side side, cplx z, const PeriodicParams& p) {
  if (std::abs(z) == 0.0) return 1.0;
  return frak_h(w, side, bethe_roots(p, z), p);
}

cplx energy(const ParticleConfig& y, const PeriodicParams& p, const BetheRootSet& roots) {
  (void)p;
  cplx v = g_lambda(Partition::of(y), roots.right);
  for (const auto& r : roots.right) v *= ipow(r + 1.0, y.edge());
  return v;
}

cplx energy(const ParticleConfig& y, const PeriodicParams& p, cplx z) {
  if (std::abs(z) == 0.0) return 1.0;
  return energy(y, p, bethe_roots(p, z));
}

double r_max_probe(const ParticleConfig& y, const PeriodicParams& p) {
  p.validate();
  y.validate();
  for (int i = 9; i >= 1; --i) {
    const double r = 0.1 * i * p.r_c();
    bool ok = true;
    for (int j = 0; j < 64 && ok; ++j) {
      const cplx z = std::polar(r, 2.0 * std::numbers::pi * j / 64.0);
      ok = std::abs(energy(y, p, z)) > 1e-8;
    }
    if (ok) return r;
  }
  throw Unsupported("energy vanishes on every probe circle");
}

cplx ch_y(const ParticleConfig& y, const BetheRootSet& roots, cplx v, cplx u) {
  const auto lambda = Partition::of(y);
  cplx r = ipow((u + 1.0) / (v + 1.0), y.edge());
  if (lambda.is_zero()) return r;
  std::vector<cplx> w;
  for (const auto& x : roots.right)
    if (std::abs(x - v) > 1e-12) w.push_back(x);
  w.push_back(u);
  return r * g_lambda(lambda, w) / g_lambda(lambda, roots.right);
}

namespace {

void check_zhat(std::span<const cplx> zhat, int m) {
  if (static_cast<int>(zhat.size()) != m) throw Invalid("zhat vector must have m entries");
}

std::vector<BetheRootSet> roots_for(const PeriodicParams& p, std::span<const cplx> zhat) {
  std::vector<BetheRootSet> rs;
  for (const auto& z : zhat) rs.push_back(bethe_roots(p, z));
  return rs;
}

struct Prev {
  long long k = 0, ak = 0;
  double t = 0.0;
};

Prev prev_of(const ObservationSet& obs, int l) {
  if (l == 0) return {};
  const auto& o = obs.points[static_cast<std::size_t>(l - 1)];
  return {o.k, o.a + o.k, o.t};
}

cplx script_c_roots(const ParticleConfig& y, const PeriodicParams& p, const ObservationSet& obs,
                    std::span<const cplx> zhat, const std::vector<BetheRootSet>& rs) {
  const int m = obs.m();
  const int rest = p.period - p.n;
  cplx val = energy(y, p, rs[0]);
  for (int l = 1; l < m; ++l) {
    const auto i = static_cast<std::size_t>(l);
    val *= zhat[i - 1] / (zhat[i - 1] - zhat[i]);
  }
  for (int l = 1; l <= m; ++l) {
    const auto& r = rs[static_cast<std::size_t>(l - 1)];
    const Prev pv = prev_of(obs, l - 1);
    const Prev cur = prev_of(obs, l);
    for (const auto& u : r.left) val *= ipow(-u, pv.k - cur.k + p.n);
    for (const auto& v : r.right)
      val *= ipow(v + 1.0, pv.ak - cur.ak + rest) * std::exp((cur.t - pv.t) * v);
    for (const auto& u : r.left)
      for (const auto& v : r.right) val /= v - u;
    if (l >= 2) {
      const auto& rp = rs[static_cast<std::size_t>(l - 2)];
      for (const auto& u : rp.left)
        for (const auto& v : r.right) val *= v - u;
      for (const auto& u : rp.left) val /= ipow(-u, p.n);
      for (const auto& v : r.right) val /= ipow(v + 1.0, rest);
    }
  }
  return val;
}

// ordered tuples of distinct indices drawn from 0..count-1
void distinct_tuples(int count, int len, std::vector<std::vector<int>>& out) {
  std::vector<int> cur;
  std::vector<bool> used(static_cast<std::size_t>(count), false);
  auto rec = [&](auto&& self) -> void {
    if (static_cast<int>(cur.size()) == len) {
      out.push_back(cur);
      return;
    }
    for (int i = 0; i < count; ++i) {
      if (used[static_cast<std::size_t>(i)]) continue;
      used[static_cast<std::size_t>(i)] = true;
      cur.push_back(i);
      self(self);
      cur.pop_back();
      used[static_cast<std::size_t>(i)] = false;
    }
  };
  rec(rec);
}

struct LevelData {
  std::vector<cplx> u, v;
  std::vector<cplx> fu, fv;          // f_l * h(.,zhat_l)^2 * J
  std::vector<cplx> hu_next, hv_next;  // h(., zhat_{l+1})
  std::vector<cplx> hu_prev, hv_prev;  // h(., zhat_{l-1})
};

cplx script_d_roots(const ParticleConfig& y, const PeriodicParams& p, const ObservationSet& obs,
                    std::span<const cplx> zhat, const std::vector<BetheRootSet>& rs) {
  const int m = obs.m();
  std::vector<LevelData> lv(static_cast<std::size_t>(m));
  for (int l = 0; l < m; ++l) {
    auto& d = lv[static_cast<std::size_t>(l)];
    const auto& r = rs[static_cast<std::size_t>(l)];
    d.u = r.left;
    d.v = r.right;
    for (const auto& u : d.u) {
      const cplx h = frak_h(u, Side::left, r, p);
      d.fu.push_back(f_level(l + 1, u, Side::left, obs) * h * h * j_of(u, p));
      if (l + 1 < m) d.hu_next.push_back(frak_h(u, Side::left, rs[static_cast<std::size_t>(l + 1)], p));
      if (l > 0) d.hu_prev.push_back(frak_h(u, Side::left, rs[static_cast<std::size_t>(l - 1)], p));
    }
    for (const auto& v : d.v) {
      const cplx h = frak_h(v, Side::right, r, p);
      d.fv.push_back(f_level(l + 1, v, Side::right, obs) * h * h * j_of(v, p));
      if (l + 1 < m) d.hv_next.push_back(frak_h(v, Side::right, rs[static_cast<std::size_t>(l + 1)], p));
      if (l > 0) d.hv_prev.push_back(frak_h(v, Side::right, rs[static_cast<std::size_t>(l - 1)], p));
    }
  }
  const int nmax = std::min(p.n, p.period - p.n);
  std::vector<int> n(static_cast<std::size_t>(m), 0);
  std::vector<cplx> totals;
  while (true) {
    // candidate tuples per level
    std::vector<std::vector<std::vector<int>>> tu(static_cast<std::size_t>(m)), tv(static_cast<std::size_t>(m));
    for (int l = 0; l < m; ++l) {
      distinct_tuples(static_cast<int>(lv[static_cast<std::size_t>(l)].u.size()), n[static_cast<std::size_t>(l)], tu[static_cast<std::size_t>(l)]);
      distinct_tuples(static_cast<int>(lv[static_cast<std::size_t>(l)].v.size()), n[static_cast<std::size_t>(l)], tv[static_cast<std::size_t>(l)]);
    }
    std::vector<std::size_t> radix;
    for (int l = 0; l < m; ++l) {
      radix.push_back(tu[static_cast<std::size_t>(l)].size());
      radix.push_back(tv[static_cast<std::size_t>(l)].size());
    }
    std::size_t total = 1;
    for (auto r : radix) total *= r;
    std::vector<cplx> terms;
    terms.reserve(total);
    std::vector<std::vector<cplx>> U(static_cast<std::size_t>(m)), V(static_cast<std::size_t>(m));
    std::vector<const std::vector<int>*> iu(static_cast<std::size_t>(m)), iv(static_cast<std::size_t>(m));
    for (std::size_t flat = 0; flat < total; ++flat) {
      std::size_t idx = flat;
      for (int l = 0; l < m; ++l) {
        const auto L = static_cast<std::size_t>(l);
        iu[L] = &tu[L][idx % radix[2 * L]];
        idx /= radix[2 * L];
        iv[L] = &tv[L][idx % radix[2 * L + 1]];
        idx /= radix[2 * L + 1];
        U[L].clear();
        V[L].clear();
        for (int a : *iu[L]) U[L].push_back(lv[L].u[static_cast<std::size_t>(a)]);
        for (int b : *iv[L]) V[L].push_back(lv[L].v[static_cast<std::size_t>(b)]);
      }
      cplx term = 1.0;
      const int n1 = n[0];
      if (n1 > 0) {
        CMatrix k(n1, n1);
        for (int i = 0; i < n1; ++i)
          for (int j = 0; j < n1; ++j) {
            const cplx vv = V[0][static_cast<std::size_t>(i)], uu = U[0][static_cast<std::size_t>(j)];
            k(i, j) = ch_y(y, rs[0], vv, uu) / (vv - uu);
          }
        const double sign = (n1 * (n1 + 1) / 2) % 2 == 0 ? 1.0 : -1.0;
        term *= sign * cross_product(U[0], V[0]) / (vandermonde(U[0]) * vandermonde(V[0])) * determinant(k);
      }
      for (int l = 0; l < m; ++l) {
        const auto L = static_cast<std::size_t>(l);
        if (U[L].empty()) continue;
        const cplx c = vandermonde(U[L]) * vandermonde(V[L]) / cross_product(U[L], V[L]);
        term *= c * c;
        for (int a : *iu[L]) term *= lv[L].fu[static_cast<std::size_t>(a)];
        for (int b : *iv[L]) term *= lv[L].fv[static_cast<std::size_t>(b)];
      }
      for (int l = 0; l + 1 < m; ++l) {
        const auto L = static_cast<std::size_t>(l);
        term *= cross_product(U[L], V[L + 1]) * cross_product(V[L], U[L + 1]) /
                (cross_product(U[L], U[L + 1]) * cross_product(V[L], V[L + 1]));
        term *= ipow(1.0 - zhat[L + 1] / zhat[L], n[L]) * ipow(1.0 - zhat[L] / zhat[L + 1], n[L + 1]);
        for (int a : *iu[L]) term /= lv[L].hu_next[static_cast<std::size_t>(a)];
        for (int b : *iv[L]) term /= lv[L].hv_next[static_cast<std::size_t>(b)];
        for (int a : *iu[L + 1]) term /= lv[L + 1].hu_prev[static_cast<std::size_t>(a)];
        for (int b : *iv[L + 1]) term /= lv[L + 1].hv_prev[static_cast<std::size_t>(b)];
      }
      terms.push_back(term);
    }
    double nf = 1.0;
    for (int x : n)
      for (int i = 2; i <= x; ++i) nf *= i;
    totals.push_back(pairwise_sum(terms) / (nf * nf));
    std::size_t i = 0;
    while (i < n.size() && n[i] == nmax) n[i++] = 0;
    if (i == n.size()) break;
    ++n[i];
  }
  return pairwise_sum(totals);
}

void check_inputs(const ParticleConfig& y, const PeriodicParams& p, const ObservationSet& obs) {
  p.validate();
  obs.validate_for(y);
  if (y.size() != p.n) throw Invalid("particle count must equal N");
  if (y.y.front() - y.y.back() >= p.period) throw Invalid("initial configuration does not fit the period");
}

}  // namespace

cplx script_c(const ParticleConfig& y, const PeriodicParams& p, const ObservationSet& obs, std::span<const cplx> zhat) {
  check_inputs(y, p, obs);
  check_zhat(zhat, obs.m());
  return script_c_roots(y, p, obs, zhat, roots_for(p, zhat));
}

cplx script_d(const ParticleConfig& y, const PeriodicParams& p, const ObservationSet& obs, std::span<const cplx> zhat) {
  check_inputs(y, p, obs);
  check_zhat(zhat, obs.m());
  return script_d_roots(y, p, obs, zhat, roots_for(p, zhat));
}

std::vector<double> zhat_radii(const ParticleConfig& y, const PeriodicParams& p, int m, const PeriodicPlan& plan) {
  const double r_sel = plan.fraction * r_max_probe(y, p);
  std::vector<double> r;
  for (int l = 0; l < m; ++l) r.push_back(r_sel * std::pow(plan.ratio, l));
  return r;
}

ProbabilityResult periodic_probability(const ParticleConfig& y, const PeriodicParams& p, const ObservationSet& obs,
                                       const PeriodicPlan& plan) {
  check_inputs(y, p, obs);
  if (plan.nodes < 4) throw Invalid("zhat node count must be >= 4");
  const auto radii = zhat_radii(y, p, obs.m(), plan);
  auto eval = [&](int nodes) {
    return z_polydisc_integrate(
        [&](std::span<const cplx> zhat) {
          const auto rs = roots_for(p, zhat);
          return script_c_roots(y, p, obs, zhat, rs) * script_d_roots(y, p, obs, zhat, rs);
        },
        radii, nodes);
  };
  ProbabilityResult r;
  r.raw = eval(plan.nodes);
  r.error = std::abs(eval(std::max(4, plan.nodes / 2)) - r.raw);
  r.imag_residue = std::abs(r.raw.imag());
  r.value = r.raw.real();
  r.provenance = "periodic";
  if (r.imag_residue > 1e-5) r.warnings.push_back("imaginary residue above 1e-5");
  return r;
}

double large_period_residual(const ParticleConfig& y, const PeriodicParams& p, const ObservationSet& obs,
                             const PeriodicPlan& plan, const ContourPlan* fredholm_plan) {
  check_inputs(y, p, obs);
  if (p.period < obs.max_ak() - y.y.back()) throw Invalid("period below max(a+k) - y_N");
  const ContourPlan fp = fredholm_plan ? *fredholm_plan : ContourPlan::standard(obs.m());
  return std::abs(periodic_probability(y, p, obs, plan).value - joint_probability(y, obs, fp).value);
}

}  // namespace tasep
