#pragma once

#include <vector>

#include "tasep/multipoint.hpp"

namespace tasep {

struct LimitPoint {
  double x;
  double tau;
  double h;
};

struct LimitObservation {
  std::vector<LimitPoint> points;

  int m() const { return static_cast<int>(points.size()); }
  bool has_equal_times() const;
  void validate() const;
};

enum class LimitKind { step, flat };

struct RayCircle {
  int level;
  Role role;
  double offset;
};

// left family has vertices at -offset, right family at +offset, both ordered out to in
struct RayContourPlan {
  int m = 1;
  std::vector<RayCircle> left;
  std::vector<RayCircle> right;
  double left_angle = 0.0;
  double right_angle = 0.0;
  double s_max = 8.0;
  int panels = 8;
  double z_radius = 0.5;
  int z_nodes = 32;

  static RayContourPlan standard(const LimitObservation& obs, double tol = 1e-16);
  void validate(const LimitObservation& obs) const;
  RayContourPlan refined() const;
  RayContourPlan extended() const;
};

cplx limit_f(int level, cplx zeta, const LimitObservation& obs);

cplx d_step(std::span<const cplx> z, const LimitObservation& obs, const RayContourPlan& plan);
cplx d_flat(std::span<const cplx> z, const LimitObservation& obs, const RayContourPlan& plan);

ProbabilityResult f_limit(LimitKind kind, const LimitObservation& obs, const RayContourPlan& plan);
ProbabilityResult f_limit(LimitKind kind, const LimitObservation& obs);

struct ScaledObservation {
  ObservationSet obs;
  int n;
  std::vector<double> unrounded_a;
  std::vector<double> unrounded_k;
};

ScaledObservation scaling_map(double t_scale, const LimitObservation& obs);

struct LadderRow {
  double t_scale;
  double finite;
  double limit;
  double gap;
};

// finite-time values along the T ladder against the limit value (m = 1)
std::vector<LadderRow> t_ladder(LimitKind kind, const LimitObservation& obs, const std::vector<double>& ts,
                                int nodes = 256);

}  // namespace tasep
