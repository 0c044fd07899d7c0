#pragma once

#include <vector>

#include "tasep/multipoint.hpp"

namespace tasep {

struct PeriodicParams {
  int period;
  int n;

  void validate() const;
  double r_c() const;
  double w_c() const { return -static_cast<double>(n) / period; }
};

struct BetheRootSet {
  cplx z;
  std::vector<cplx> left;
  std::vector<cplx> right;
  double max_residual;
};

BetheRootSet bethe_roots(const PeriodicParams& p, cplx z);

// w on the left side uses the right roots and vice versa; equals 1 at z = 0
cplx frak_h(cplx w, Side side, const BetheRootSet& roots, const PeriodicParams& p);
cplx frak_h(cplx w, Side side, cplx z, const PeriodicParams& p);

cplx energy(const ParticleConfig& y, const PeriodicParams& p, cplx z);
cplx energy(const ParticleConfig& y, const PeriodicParams& p, const BetheRootSet& roots);

double r_max_probe(const ParticleConfig& y, const PeriodicParams& p);

// (u+1)/(v+1) power times the ratio of G over the right roots with v replaced by u
cplx ch_y(const ParticleConfig& y, const BetheRootSet& roots, cplx v, cplx u);

cplx script_c(const ParticleConfig& y, const PeriodicParams& p, const ObservationSet& obs, std::span<const cplx> zhat);
cplx script_d(const ParticleConfig& y, const PeriodicParams& p, const ObservationSet& obs, std::span<const cplx> zhat);

struct PeriodicPlan {
  int nodes = 64;
  double ratio = 0.6;
  // fraction of the probed r_max used for the outermost circle
  double fraction = 0.5;
};

std::vector<double> zhat_radii(const ParticleConfig& y, const PeriodicParams& p, int m, const PeriodicPlan& plan);

ProbabilityResult periodic_probability(const ParticleConfig& y, const PeriodicParams& p, const ObservationSet& obs,
                                       const PeriodicPlan& plan = {});

double large_period_residual(const ParticleConfig& y, const PeriodicParams& p, const ObservationSet& obs,
                             const PeriodicPlan& plan = {}, const ContourPlan* fredholm_plan = nullptr);

}  // namespace tasep
