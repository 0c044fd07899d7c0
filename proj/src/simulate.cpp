#include "tasep/simulate.hpp"

#include <algorithm>
#include <boost/math/distributions/poisson.hpp>
#include <cmath>
#include <map>
#include <random>

#include "json.hpp"
#include "tasep/errors.hpp"

namespace tasep {

SplitMix64::SplitMix64(std::uint64_t seed, std::uint64_t stream)
    : state_(seed ^ (stream * 0x9e3779b97f4a7c15ULL + 0x632be59bd9b4e019ULL)) {
  (*this)();
}

SplitMix64::result_type SplitMix64::operator()() {
  std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

namespace {

bool run_path(const ParticleConfig& y, const ObservationSet& obs, std::optional<long long> period, SplitMix64& rng) {
  std::vector<long long> x = y.y;
  const int n = y.size();
  std::exponential_distribution<double> clock(static_cast<double>(n));
  std::uniform_int_distribution<int> pick(0, n - 1);
  double t = 0.0;
  for (const auto& o : obs.points) {
    while (true) {
      const double dt = clock(rng);
      if (t + dt > o.t) {
        // memorylessness lets the clock restart at the observation time
        t = o.t;
        break;
      }
      t += dt;
      const int i = pick(rng);
      const long long target = x[static_cast<std::size_t>(i)] + 1;
      bool blocked = i > 0 && target == x[static_cast<std::size_t>(i - 1)];
      if (period && i == 0 && n > 1) blocked = target == x.back() + *period;
      if (period && n == 1) blocked = false;
      if (!blocked) x[static_cast<std::size_t>(i)] = target;
    }
    if (x[static_cast<std::size_t>(o.k - 1)] < o.a) return false;
  }
  return true;
}

}  // namespace

MCResult mc_joint(const ParticleConfig& y, const ObservationSet& obs, const MCConfig& cfg,
                  std::optional<long long> period) {
  obs.validate_for(y);
  if (cfg.samples == 0) throw Invalid("sample count must be positive");
  if (period && *period <= y.size()) throw Invalid("period must exceed N");
  if (period && y.y.front() - y.y.back() >= *period) throw Invalid("initial configuration does not fit the period");
  std::uint64_t hits = 0;
  const auto total = static_cast<long long>(cfg.samples);
#pragma omp parallel for reduction(+ : hits) schedule(static)
  for (long long s = 0; s < total; ++s) {
    SplitMix64 rng(cfg.seed, static_cast<std::uint64_t>(s));
    if (run_path(y, obs, period, rng)) ++hits;
  }
  const double p = static_cast<double>(hits) / static_cast<double>(cfg.samples);
  return {p, std::sqrt(p * (1.0 - p) / static_cast<double>(cfg.samples)), hits, cfg.samples};
}

namespace {

double poisson_upper_tail(double mean, long long k) {
  if (k <= 0) return 1.0;
  if (mean == 0.0) return 0.0;
  return boost::math::cdf(boost::math::complement(boost::math::poisson_distribution<double>(mean), static_cast<double>(k - 1)));
}

}  // namespace

CtmcResult ctmc_exact(const ParticleConfig& y, const ObservationSet& obs, double tol, long long extra_k) {
  obs.validate_for(y);
  const int n = y.size();
  if (n > 4) throw Unsupported("exact chain supports N <= 4");
  const double t_max = obs.points.back().t;
  if (t_max > 4.0) throw Unsupported("exact chain supports t_max <= 4");
  if (tol < 1e-8) throw Invalid("tolerance must be >= 1e-8");

  TruncationCertificate cert{};
  cert.rate = n;
  long long k = 0;
  while (poisson_upper_tail(t_max, k + 1) >= 0.5 * tol) ++k;
  k += extra_k;
  cert.k_max = k;
  cert.tail_bound = poisson_upper_tail(t_max, k + 1);

  std::vector<std::vector<long long>> states;
  std::map<std::vector<long long>, std::size_t> index;
  std::vector<long long> cur(static_cast<std::size_t>(n));
  auto rec = [&](auto&& self, int i) -> void {
    if (i == n) {
      index.emplace(cur, states.size());
      states.push_back(cur);
      if (states.size() > 5000000) throw Unsupported("state space exceeds 5e6");
      return;
    }
    const long long lo = y.y[static_cast<std::size_t>(i)];
    const long long hi = i == 0 ? y.y[0] + k : cur[static_cast<std::size_t>(i - 1)] - 1;
    for (long long x = lo; x <= hi; ++x) {
      cur[static_cast<std::size_t>(i)] = x;
      self(self, i + 1);
    }
  };
  rec(rec, 0);
  cert.states = states.size();

  // uniformized transitions: each particle fires at rate 1 out of total rate n
  std::vector<std::vector<std::size_t>> moves(states.size());
  std::vector<double> stay(states.size(), 0.0);
  for (std::size_t s = 0; s < states.size(); ++s) {
    for (int i = 0; i < n; ++i) {
      auto next = states[s];
      next[static_cast<std::size_t>(i)] += 1;
      if (i > 0 && next[static_cast<std::size_t>(i)] == states[s][static_cast<std::size_t>(i - 1)]) {
        stay[s] += 1.0 / n;
        continue;
      }
      auto it = index.find(next);
      if (it != index.end()) moves[s].push_back(it->second);
    }
  }

  std::vector<double> p(states.size(), 0.0);
  p[index.at(y.y)] = 1.0;
  double t_prev = 0.0;
  const double seg_tol = 0.5 * tol / static_cast<double>(obs.m());
  for (const auto& o : obs.points) {
    const double lt = n * (o.t - t_prev);
    t_prev = o.t;
    if (lt > 0.0) {
      std::vector<double> term = p, out(states.size(), 0.0), next(states.size());
      double w = std::exp(-lt), acc = w;
      long long j = 0;
      for (std::size_t s = 0; s < states.size(); ++s) out[s] = w * term[s];
      while (1.0 - acc >= seg_tol && j < 10000) {
        std::fill(next.begin(), next.end(), 0.0);
        for (std::size_t s = 0; s < states.size(); ++s) {
          if (term[s] == 0.0) continue;
          next[s] += stay[s] * term[s];
          for (auto d : moves[s]) next[d] += term[s] / n;
        }
        term.swap(next);
        ++j;
        w *= lt / static_cast<double>(j);
        acc += w;
        for (std::size_t s = 0; s < states.size(); ++s) out[s] += w * term[s];
      }
      cert.steps += j;
      cert.series_tail += std::max(0.0, 1.0 - acc);
      p.swap(out);
    }
    for (std::size_t s = 0; s < states.size(); ++s)
      if (states[s][static_cast<std::size_t>(o.k - 1)] < o.a) p[s] = 0.0;
  }
  double v = 0.0;
  for (double x : p) v += x;
  return {v, cert};
}

double poisson_joint(std::span<const long long> thresholds, std::span<const double> times) {
  if (thresholds.size() != times.size() || times.empty()) throw Invalid("thresholds and times must match");
  long long cap = 0;
  for (auto b : thresholds) cap = std::max(cap, b);
  // dist[j] = P(count = j), with count >= cap lumped into cap
  std::vector<double> dist(static_cast<std::size_t>(cap + 1), 0.0);
  dist[0] = 1.0;
  double t_prev = 0.0;
  for (std::size_t l = 0; l < times.size(); ++l) {
    const double dt = times[l] - t_prev;
    if (dt < 0.0) throw Invalid("times must be sorted");
    t_prev = times[l];
    if (dt > 0.0 && cap > 0) {
      std::vector<double> inc(static_cast<std::size_t>(cap + 1));
      boost::math::poisson_distribution<double> pd(dt);
      for (long long j = 0; j < cap; ++j) inc[static_cast<std::size_t>(j)] = boost::math::pdf(pd, static_cast<double>(j));
      inc[static_cast<std::size_t>(cap)] = poisson_upper_tail(dt, cap);
      std::vector<double> next(dist.size(), 0.0);
      for (long long i = 0; i <= cap; ++i)
        for (long long j = 0; j <= cap; ++j)
          next[static_cast<std::size_t>(std::min(cap, i + j))] +=
              dist[static_cast<std::size_t>(i)] * inc[static_cast<std::size_t>(j)];
      dist.swap(next);
    }
    for (long long i = 0; i < std::min(thresholds[l], cap + 1); ++i) dist[static_cast<std::size_t>(i)] = 0.0;
  }
  double v = 0.0;
  for (double x : dist) v += x;
  return v;
}

std::string fixtures_to_json(const std::vector<Fixture>& fs) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& f : fs) {
    nlohmann::ordered_json o;
    o["Y"] = f.y;
    auto obs = nlohmann::ordered_json::array();
    for (const auto& p : f.obs) obs.push_back({{"k", p.k}, {"a", p.a}, {"t", p.t}});
    o["obs"] = obs;
    o["value"] = f.value;
    o["certificate"] = f.certificate;
    o["oracle-id"] = f.oracle;
    o["seed"] = f.seed;
    arr.push_back(o);
  }
  return arr.dump(2);
}

std::vector<Fixture> fixtures_from_json(const std::string& text) {
  std::vector<Fixture> out;
  for (const auto& o : nlohmann::json::parse(text)) {
    Fixture f;
    f.y = o.at("Y").get<std::vector<long long>>();
    for (const auto& p : o.at("obs")) f.obs.push_back({p.at("k").get<int>(), p.at("a").get<long long>(), p.at("t").get<double>()});
    f.value = o.at("value").get<double>();
    f.certificate = o.at("certificate").get<double>();
    f.oracle = o.at("oracle-id").get<std::string>();
    f.seed = o.at("seed").get<std::uint64_t>();
    out.push_back(std::move(f));
  }
  return out;
}

}  // namespace tasep
