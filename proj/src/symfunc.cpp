#include "tasep/symfunc.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "tasep/errors.hpp"
#include "tasep/linalg.hpp"
#include "tasep/quadrature.hpp"

namespace tasep {

namespace {

constexpr double kCollision = 1e-12;

void check_distinct(std::span<const cplx> w) {
  for (std::size_t i = 0; i < w.size(); ++i)
    for (std::size_t j = i + 1; j < w.size(); ++j)
      if (std::abs(w[i] - w[j]) < kCollision) throw Degenerate("coinciding variables in g_lambda; perturb and retry");
}

void enumerate(int n, int maxpart, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (n == 0) {
    out.push_back(cur);
    return;
  }
  for (int p = std::min(n, maxpart); p >= 1; --p) {
    cur.push_back(p);
    enumerate(n - p, p, cur, out);
    cur.pop_back();
  }
}

cplx power_sum(const std::vector<int>& mu, std::span<const cplx> w) {
  cplx prod = 1.0;
  for (int k : mu) {
    cplx s = 0.0;
    for (const auto& x : w) s += ipow(x, k);
    prod *= s;
  }
  return prod;
}

}  // namespace

ParticleConfig ParticleConfig::step(int n) {
  ParticleConfig c;
  for (int i = 1; i <= n; ++i) c.y.push_back(-i);
  c.validate();
  return c;
}

ParticleConfig ParticleConfig::flat(int n) {
  ParticleConfig c;
  for (int i = 1; i <= n; ++i) c.y.push_back(-2LL * i);
  c.validate();
  return c;
}

void ParticleConfig::validate() const {
  if (y.empty()) throw Invalid("particle configuration must be nonempty");
  for (std::size_t i = 1; i < y.size(); ++i)
    if (!(y[i - 1] > y[i])) throw Invalid("particle positions must be strictly decreasing");
}

Partition Partition::of(const ParticleConfig& y) {
  y.validate();
  Partition p;
  const long long e = y.edge();
  for (std::size_t i = 0; i < y.y.size(); ++i)
    p.parts.push_back(static_cast<int>(y.y[i] + static_cast<long long>(i + 1) - e));
  return p;
}

int Partition::weight() const {
  int s = 0;
  for (int x : parts) s += x;
  return s;
}

std::vector<std::vector<int>> partitions_of(int n) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  enumerate(n, n, cur, out);
  return out;
}

cplx g_lambda(const Partition& lambda, std::span<const cplx> w) {
  const auto m = static_cast<Eigen::Index>(w.size());
  if (w.size() < lambda.parts.size()) throw Invalid("g_lambda needs at least N variables");
  check_distinct(w);
  if (lambda.is_zero()) return 1.0;
  CMatrix a(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const cplx x = w[static_cast<std::size_t>(i)];
    for (Eigen::Index j = 0; j < m; ++j) {
      const int lj = j < static_cast<Eigen::Index>(lambda.parts.size()) ? lambda.parts[static_cast<std::size_t>(j)] : 0;
      a(i, j) = ipow(x, m - 1 - j) * ipow(x + 1.0, lj);
    }
  }
  // det[w_i^{M-1-j}] = prod_{i<j} (w_i - w_j) = (-1)^{M(M-1)/2} vandermonde
  cplx vdm = vandermonde(w);
  if (((m * (m - 1)) / 2) % 2 == 1) vdm = -vdm;
  return determinant(std::move(a)) / vdm;
}

PowerSumExpansion power_sum_coeffs(const Partition& lambda) {
  const int n = lambda.weight();
  if (n > 8) throw Unsupported("power_sum_coeffs supports |lambda| <= 8");
  if (n == 0) return {};
  std::vector<std::vector<int>> basis;
  for (int k = 1; k <= n; ++k)
    for (auto& p : partitions_of(k)) basis.push_back(p);
  const int unknowns = static_cast<int>(basis.size());
  const int samples = 3 * unknowns + 10;
  const int vars = n + 1;
  std::mt19937_64 rng(0x5eedULL + static_cast<unsigned long long>(n));
  std::uniform_real_distribution<double> rad(0.3, 0.9), ang(0.0, 2.0 * std::numbers::pi);
  CMatrix a(samples, unknowns);
  CVector b(samples);
  for (int s = 0; s < samples; ++s) {
    std::vector<cplx> w(static_cast<std::size_t>(vars));
    for (auto& x : w) x = std::polar(rad(rng), ang(rng));
    b(s) = g_lambda(lambda, w) - 1.0;
    for (int k = 0; k < unknowns; ++k) a(s, k) = power_sum(basis[static_cast<std::size_t>(k)], w);
  }
  const CVector c = a.colPivHouseholderQr().solve(b);
  const double resid = (a * c - b).cwiseAbs().maxCoeff();
  if (!(resid < 1e-9)) throw Conditioning("power-sum fit residual too large");
  PowerSumExpansion out;
  for (int k = 0; k < unknowns; ++k) {
    const double re = c(k).real();
    if (std::abs(re) > 1e-10) out.push_back({basis[static_cast<std::size_t>(k)], re});
  }
  return out;
}

cplx eval_power_sum(const PowerSumExpansion& e, std::span<const cplx> w) {
  cplx s = 1.0;
  for (const auto& t : e) s += t.coeff * power_sum(t.mu, w);
  return s;
}

cplx chi_lambda(const Partition& lambda, cplx v, cplx u) {
  if (std::abs(v) == 0.0) throw Degenerate("chi_lambda needs v != 0");
  if (lambda.is_zero()) return 1.0;
  int m = lambda.weight() + 1;
  for (;;) {
    std::vector<cplx> w(static_cast<std::size_t>(m));
    w[0] = u;
    bool collide = false;
    for (int j = 1; j < m; ++j) {
      w[static_cast<std::size_t>(j)] = v * std::polar(1.0, 2.0 * std::numbers::pi * j / m);
      if (std::abs(w[static_cast<std::size_t>(j)] - u) < kCollision) collide = true;
    }
    if (!collide) return g_lambda(lambda, w);
    ++m;
  }
}

cplx chi_lambda_power_sum(const PowerSumExpansion& e, cplx v, cplx u) {
  cplx s = 1.0;
  for (const auto& t : e) {
    cplx p = 1.0;
    for (int k : t.mu) p *= ipow(u, k) - ipow(v, k);
    s += t.coeff * p;
  }
  return s;
}

KessEvaluator::KessEvaluator(const ParticleConfig& y) : lambda_(Partition::of(y)), edge_(y.edge()) {}

cplx KessEvaluator::operator()(cplx v, cplx u) const {
  if (std::abs(v - u) < kCollision) throw Degenerate("kess has a pole at v = u");
  return ipow((u + 1.0) / (v + 1.0), edge_) * chi_lambda(lambda_, v, u) / (v - u);
}

cplx kess(const ParticleConfig& y, cplx v, cplx u) { return KessEvaluator(y)(v, u); }

double orthogonality_residual(const ParticleConfig& y, cplx u, int i) {
  if (i < 1 || i > y.size()) throw Invalid("orthogonality index out of range");
  const KessEvaluator k(y);
  const long long p = y.y[static_cast<std::size_t>(i - 1)] + i;
  CircleContour c{0.0, 0.5 * std::min(std::abs(u), 1.0), 64};
  const auto r = adaptive_integrate([&](cplx v) { return ipow(v, -i) * ipow(v + 1.0, p) * k(v, u); }, c, 1e-13);
  return std::abs(r.value + ipow(u, -i) * ipow(u + 1.0, p));
}

cplx kess_flat_reduced(cplx v, cplx u) {
  const cplx d1 = v - u, d2 = u + v + 1.0;
  if (std::abs(d1) < kCollision || std::abs(d2) < kCollision) throw Degenerate("kess_flat_reduced at a pole");
  return (2.0 * v + 1.0) / (d1 * d2);
}

}  // namespace tasep
