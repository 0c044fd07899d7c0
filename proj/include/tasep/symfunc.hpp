#pragma once

#include <complex>
#include <span>
#include <vector>

namespace tasep {

using cplx = std::complex<double>;

struct ParticleConfig {
  std::vector<long long> y;

  static ParticleConfig step(int n);
  static ParticleConfig flat(int n);
  void validate() const;
  int size() const { return static_cast<int>(y.size()); }
  // y_N + N
  long long edge() const { return y.back() + static_cast<long long>(y.size()); }
};

struct Partition {
  std::vector<int> parts;

  static Partition of(const ParticleConfig& y);
  int weight() const;
  bool is_zero() const { return weight() == 0; }
};

struct PowerSumTerm {
  std::vector<int> mu;
  double coeff;
};
using PowerSumExpansion = std::vector<PowerSumTerm>;

cplx g_lambda(const Partition& lambda, std::span<const cplx> w);

PowerSumExpansion power_sum_coeffs(const Partition& lambda);
cplx eval_power_sum(const PowerSumExpansion& e, std::span<const cplx> w);

cplx chi_lambda(const Partition& lambda, cplx v, cplx u);
cplx chi_lambda_power_sum(const PowerSumExpansion& e, cplx v, cplx u);

cplx kess(const ParticleConfig& y, cplx v, cplx u);

class KessEvaluator {
public:
  explicit KessEvaluator(const ParticleConfig& y);
  cplx operator()(cplx v, cplx u) const;

private:
  Partition lambda_;
  long long edge_;
};

double orthogonality_residual(const ParticleConfig& y, cplx u, int i);

cplx kess_flat_reduced(cplx v, cplx u);

// all partitions of n into positive parts, parts weakly decreasing
std::vector<std::vector<int>> partitions_of(int n);

}  // namespace tasep
