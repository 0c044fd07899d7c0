#pragma once

#include <complex>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "tasep/quadrature.hpp"
#include "tasep/symfunc.hpp"

namespace tasep {

struct Observation {
  int k;
  long long a;
  double t;
};

struct ObservationSet {
  std::vector<Observation> points;

  int m() const { return static_cast<int>(points.size()); }
  void validate() const;
  void validate_for(const ParticleConfig& y) const;
  int max_k() const;
  long long max_ak() const;
  long long min_ak() const;
  ObservationSet without(int s) const;
};

enum class Side { left, right };

struct ContourPlan {
  NestedCircleSystem circles = NestedCircleSystem::standard(1);
  int nodes = 64;
  double z_radius = 0.5;
  double z_outer_radius = 2.0;
  int z_nodes = 32;

  static ContourPlan standard(int m, int nodes = 64);
  void validate(int m) const;
  ContourPlan coarse() const;
};

struct KernelOptions {
  std::vector<cplx> f_scale;
  std::function<cplx(cplx, cplx)> null_kernel;
};

struct ProbabilityResult {
  double value = 0.0;
  cplx raw{0.0, 0.0};
  double imag_residue = 0.0;
  double error = 0.0;
  std::string provenance;
  std::vector<std::string> warnings;
};

cplx f_level(int level, cplx w, Side side, const ObservationSet& obs, std::span<const cplx> f_scale = {});

cplx dy_fredholm(const ParticleConfig& y, const ObservationSet& obs, std::span<const cplx> z, const ContourPlan& plan,
                 const KernelOptions& opt = {});

cplx dy_flat_delta(const ObservationSet& obs, std::span<const cplx> z, const ContourPlan& plan);

cplx dy_series(const ParticleConfig& y, const ObservationSet& obs, std::span<const cplx> z, const ContourPlan& plan,
               int n_cap = -1);

ProbabilityResult joint_probability(const ParticleConfig& y, const ObservationSet& obs, const ContourPlan& plan);

ProbabilityResult signed_probability(const ParticleConfig& y, const ObservationSet& obs, const ContourPlan& plan,
                                     const std::vector<int>& outside);

// |(inside - outside) z_s integral - D without point s|; inside_only drops the outside integral
double reduction_identity_residual(const ParticleConfig& y, const ObservationSet& obs, const ContourPlan& plan, int s,
                                   bool inside_only = false);

struct InvarianceReport {
  double reorder = 0.0;
  double scaling = 0.0;
  double shift = 0.0;
  double null_kernel = 0.0;
};

InvarianceReport invariance_suite(const ParticleConfig& y, const ObservationSet& obs, const ContourPlan& plan);

enum class FlatMode { finite, infinite };

ProbabilityResult flat_probability(const ObservationSet& obs, const ContourPlan& plan, FlatMode mode = FlatMode::infinite,
                                   long long translation = -1);

struct ParticleCoordinate {
  int k;
  long long threshold;
};

ParticleCoordinate height_to_particle(long long n, long long a);

// default sample point for identity checks: z_l = 0.45 e^{i(0.4 + 0.9 l)}
std::vector<cplx> sample_z(int m);

}  // namespace tasep
