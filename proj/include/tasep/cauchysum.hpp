#pragma once

#include <functional>
#include <vector>

#include "tasep/quadrature.hpp"

namespace tasep {

cplx cauchy_factor(std::span<const cplx> w, std::span<const cplx> wp);

// I[l-1] is I^(l) and J[l-1] is J^(l+1) for l = 1..m-1, entries 1-based
struct ChainSpec {
  std::vector<int> sizes;
  std::vector<std::vector<int>> I;
  std::vector<std::vector<int>> J;

  int m() const { return static_cast<int>(sizes.size()); }
  void validate() const;
};

using Levels = std::vector<std::vector<cplx>>;
// A(W^(1),...,W^(m); z_0,...,z_{m-1})
using ToyAmplitude = std::function<cplx(const Levels&, std::span<const cplx>)>;

class ToyProblem {
public:
  // q as ascending polynomial coefficients; pole_orders[l][i] is the pole order of A at w_i^(l) = 0
  static ToyProblem make(std::vector<cplx> q, ToyAmplitude a, std::vector<std::vector<int>> pole_orders,
                         ChainSpec spec);

  const std::vector<cplx>& q() const { return q_; }
  int q_order() const { return q_order_; }
  const ChainSpec& spec() const { return spec_; }
  cplx amplitude(const Levels& w, std::span<const cplx> z) const { return a_(w, z); }
  // the q_order roots of q(w) = zhat nearest 0
  std::vector<cplx> roots(cplx zhat) const;
  cplx j(cplx w) const;

private:
  std::vector<cplx> q_;
  std::vector<cplx> dq_;
  int q_order_ = 0;
  ToyAmplitude a_;
  ChainSpec spec_;
};

// largest total pole order along a Cauchy chain
int max_chain_pole_order(const ChainSpec& spec, const std::vector<std::vector<int>>& pole_orders);

cplx cauchy_h(const ChainSpec& spec, const Levels& w);

// z = (z_0, ..., z_{m-1})
cplx g_sum(const ToyProblem& problem, std::span<const cplx> z);

struct ZeroContourPlan {
  double lo = 0.15;
  double hi = 0.6;
  int nodes = 128;
};

// z = (z_1, ..., z_{m-1})
cplx g_zero_contour(const ToyProblem& problem, std::span<const cplx> z, const ZeroContourPlan& plan = {});

}  // namespace tasep
