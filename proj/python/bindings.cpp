#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "tasep/cauchysum.hpp"
#include "tasep/errors.hpp"
#include "tasep/limits.hpp"
#include "tasep/periodic.hpp"
#include "tasep/simulate.hpp"

namespace py = pybind11;
using namespace tasep;

namespace {

ObservationSet to_obs(const std::vector<std::tuple<int, long long, double>>& pts) {
  ObservationSet o;
  for (const auto& [k, a, t] : pts) o.points.push_back({k, a, t});
  return o;
}

LimitObservation to_limit(const std::vector<std::tuple<double, double, double>>& pts) {
  LimitObservation o;
  for (const auto& [x, tau, h] : pts) o.points.push_back({x, tau, h});
  return o;
}

LimitKind to_kind(const std::string& s) {
  if (s == "step") return LimitKind::step;
  if (s == "flat") return LimitKind::flat;
  throw Invalid("kind must be step or flat");
}

py::dict to_dict(const ProbabilityResult& r) {
  py::dict d;
  d["value"] = r.value;
  d["imag_residue"] = r.imag_residue;
  d["error"] = r.error;
  d["provenance"] = r.provenance;
  d["warnings"] = r.warnings;
  return d;
}

}  // namespace

PYBIND11_MODULE(_tasep, m) {
  m.doc() = "Multi-point distributions of TASEP and periodic TASEP";

  // translators run newest first, so the base class goes first
  py::register_exception<Error>(m, "NumericalError", PyExc_ArithmeticError);
  py::register_exception<Invalid>(m, "InvalidError", PyExc_ValueError);
  py::register_exception<Unsupported>(m, "UnsupportedError", PyExc_NotImplementedError);

  m.def("step", [](int n) { return ParticleConfig::step(n).y; }, py::arg("n"));
  m.def("flat", [](int n) { return ParticleConfig::flat(n).y; }, py::arg("n"));

  m.def(
      "joint_probability",
      [](const std::vector<long long>& y, const std::vector<std::tuple<int, long long, double>>& obs, int nodes) {
        const auto o = to_obs(obs);
        return to_dict(joint_probability(ParticleConfig{y}, o, ContourPlan::standard(o.m(), nodes)));
      },
      py::arg("y"), py::arg("obs"), py::arg("nodes") = 64);

  m.def(
      "signed_probability",
      [](const std::vector<long long>& y, const std::vector<std::tuple<int, long long, double>>& obs,
         const std::vector<int>& outside, int nodes) {
        const auto o = to_obs(obs);
        return to_dict(signed_probability(ParticleConfig{y}, o, ContourPlan::standard(o.m(), nodes), outside));
      },
      py::arg("y"), py::arg("obs"), py::arg("outside"), py::arg("nodes") = 64);

  m.def(
      "flat_probability",
      [](const std::vector<std::tuple<int, long long, double>>& obs, int nodes) {
        const auto o = to_obs(obs);
        return to_dict(flat_probability(o, ContourPlan::standard(o.m(), nodes)));
      },
      py::arg("obs"), py::arg("nodes") = 64);

  m.def(
      "periodic_probability",
      [](const std::vector<long long>& y, int period, const std::vector<std::tuple<int, long long, double>>& obs) {
        return to_dict(periodic_probability(ParticleConfig{y}, {period, static_cast<int>(y.size())}, to_obs(obs)));
      },
      py::arg("y"), py::arg("period"), py::arg("obs"));

  m.def(
      "bethe_roots",
      [](int period, int n, cplx z) {
        const auto r = bethe_roots({period, n}, z);
        return py::make_tuple(r.left, r.right);
      },
      py::arg("period"), py::arg("n"), py::arg("z"));

  m.def(
      "limit_probability",
      [](const std::string& kind, const std::vector<std::tuple<double, double, double>>& pts) {
        return to_dict(f_limit(to_kind(kind), to_limit(pts)));
      },
      py::arg("kind"), py::arg("points"));

  m.def(
      "t_ladder",
      [](const std::string& kind, const std::vector<std::tuple<double, double, double>>& pts,
         const std::vector<double>& ts) {
        py::list rows;
        for (const auto& r : t_ladder(to_kind(kind), to_limit(pts), ts)) {
          py::dict d;
          d["T"] = r.t_scale;
          d["finite"] = r.finite;
          d["limit"] = r.limit;
          d["gap"] = r.gap;
          rows.append(d);
        }
        return rows;
      },
      py::arg("kind"), py::arg("points"), py::arg("ts"));

  m.def(
      "ctmc_exact",
      [](const std::vector<long long>& y, const std::vector<std::tuple<int, long long, double>>& obs, double tol) {
        const auto r = ctmc_exact(ParticleConfig{y}, to_obs(obs), tol);
        return py::make_tuple(r.value, r.certificate.total());
      },
      py::arg("y"), py::arg("obs"), py::arg("tol") = 1e-8);

  m.def(
      "mc_joint",
      [](const std::vector<long long>& y, const std::vector<std::tuple<int, long long, double>>& obs,
         std::uint64_t seed, std::uint64_t samples, std::optional<long long> period) {
        const auto r = mc_joint(ParticleConfig{y}, to_obs(obs), {seed, samples}, period);
        return py::make_tuple(r.estimate, r.stderr_);
      },
      py::arg("y"), py::arg("obs"), py::arg("seed") = 1, py::arg("samples") = 100000, py::arg("period") = py::none());

  m.def(
      "poisson_joint",
      [](const std::vector<long long>& b, const std::vector<double>& t) { return poisson_joint(b, t); },
      py::arg("thresholds"), py::arg("times"));

  m.def("orthogonality_residual",
        [](const std::vector<long long>& y, cplx u, int i) { return orthogonality_residual(ParticleConfig{y}, u, i); },
        py::arg("y"), py::arg("u"), py::arg("i"));
}
