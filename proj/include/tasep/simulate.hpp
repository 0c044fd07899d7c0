#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tasep/multipoint.hpp"

namespace tasep {

struct MCConfig {
  std::uint64_t seed = 1;
  std::uint64_t samples = 1000000;
};

struct MCResult {
  double estimate;
  double stderr_;
  std::uint64_t hits;
  std::uint64_t samples;
};

// counter-based stream: one generator per (seed, sample index)
class SplitMix64 {
public:
  using result_type = std::uint64_t;
  SplitMix64(std::uint64_t seed, std::uint64_t stream);
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }
  result_type operator()();

private:
  std::uint64_t state_;
};

MCResult mc_joint(const ParticleConfig& y, const ObservationSet& obs, const MCConfig& cfg,
                  std::optional<long long> period = std::nullopt);

struct TruncationCertificate {
  long long k_max;
  double tail_bound;
  double rate;
  long long steps;
  double series_tail;
  std::size_t states;

  double total() const { return tail_bound + series_tail; }
};

struct CtmcResult {
  double value;
  TruncationCertificate certificate;
};

CtmcResult ctmc_exact(const ParticleConfig& y, const ObservationSet& obs, double tol = 1e-8, long long extra_k = 0);

double poisson_joint(std::span<const long long> thresholds, std::span<const double> times);

struct Fixture {
  std::vector<long long> y;
  std::vector<Observation> obs;
  double value;
  double certificate;
  std::string oracle;
  std::uint64_t seed;
};

std::string fixtures_to_json(const std::vector<Fixture>& f);
std::vector<Fixture> fixtures_from_json(const std::string& text);

}  // namespace tasep
