#pragma once

#include <complex>
#include <functional>
#include <span>
#include <vector>

namespace tasep {

using cplx = std::complex<double>;

struct CircleContour {
  cplx center{0.0, 0.0};
  double radius = 1.0;
  int nodes = 64;
  bool counterclockwise = true;
  double phase = 0.0;

  void validate() const;
};

// point together with dw/(2 pi i) and any measure prefactor
struct MeasuredNode {
  cplx point;
  cplx weight;
};

std::vector<MeasuredNode> circle_nodes(const CircleContour& c, cplx prefactor = 1.0);

cplx pairwise_sum(std::span<const cplx> values);
double pairwise_sum(std::span<const double> values);

using ComplexFn = std::function<cplx(cplx)>;

cplx integrate_circle(const ComplexFn& f, const CircleContour& c);

struct AdaptiveResult {
  cplx value;
  double error;
  int nodes;
};

AdaptiveResult adaptive_integrate(const ComplexFn& f, CircleContour c, double tol, int node_cap = 1 << 14);

// mean of g over the tensor grid, i.e. the integral against prod dz/(2 pi i z)
using PolydiscFn = std::function<cplx(std::span<const cplx>)>;
cplx z_polydisc_integrate(const PolydiscFn& g, std::span<const double> radii, int nodes);

enum class Role { single, out, in };

struct LevelCircle {
  int level;
  Role role;
  double radius;
};

enum class NestingOrder { standard, reversed };

// out to in: standard is m..2 out, 1, 2..m in; reversed is 1..m-1 out, m, m-1..1 in
struct NestedCircleSystem {
  int m = 1;
  NestingOrder order = NestingOrder::standard;
  std::vector<LevelCircle> left;
  std::vector<LevelCircle> right;

  static NestedCircleSystem make(int m, NestingOrder order, std::span<const double> left_radii,
                                 std::span<const double> right_radii);
  static NestedCircleSystem standard(int m, double lo = 0.08, double hi = 0.42);
  static NestedCircleSystem reversed(int m, double lo = 0.08, double hi = 0.42);

  void validate() const;
};

std::vector<double> geometric_radii(int count, double hi, double lo);

// prefactor of d mu on one circle given z_1..z_{m-1}
cplx dmu_prefactor(const LevelCircle& c, NestingOrder order, std::span<const cplx> z);

struct RaySegmentContour {
  cplx vertex{0.0, 0.0};
  double angle = 0.0;
  double s_max = 10.0;
  int panels = 16;

  void validate() const;
};

// contour from inf e^{-i angle} through vertex to inf e^{i angle}
std::vector<MeasuredNode> ray_nodes(const RaySegmentContour& c, cplx prefactor = 1.0);

// smallest s on a 0.25 grid beyond which the majorant stays below tol, capped at s_cap
double ray_cutoff(const std::function<double(double)>& majorant, double tol, double s_cap = 60.0);

}  // namespace tasep
