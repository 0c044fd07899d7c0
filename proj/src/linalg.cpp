#include "tasep/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

#include "tasep/errors.hpp"

namespace tasep {

std::complex<double> determinant(CMatrix a) {
  const Eigen::Index n = a.rows();
  if (n == 0) return 1.0;
  double log_abs = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double s = a.row(i).cwiseAbs().maxCoeff();
    if (s == 0.0) return 0.0;
    a.row(i) /= s;
    log_abs += std::log(s);
  }
  const Eigen::PartialPivLU<CMatrix> lu(a);
  std::complex<double> phase = lu.permutationP().determinant();
  for (Eigen::Index i = 0; i < n; ++i) {
    const std::complex<double> u = lu.matrixLU()(i, i);
    const double r = std::abs(u);
    if (r == 0.0) return 0.0;
    log_abs += std::log(r);
    phase *= u / r;
  }
  return std::exp(log_abs) * phase;
}

std::complex<double> vandermonde(std::span<const std::complex<double>> w) {
  std::complex<double> p = 1.0;
  for (std::size_t i = 0; i < w.size(); ++i)
    for (std::size_t j = i + 1; j < w.size(); ++j) p *= w[j] - w[i];
  return p;
}

std::complex<double> cross_product(std::span<const std::complex<double>> w,
                                   std::span<const std::complex<double>> wp) {
  std::complex<double> p = 1.0;
  for (const auto& a : w)
    for (const auto& b : wp) p *= a - b;
  return p;
}

std::complex<double> ipow(std::complex<double> base, long long e) {
  if (e < 0) return 1.0 / ipow(base, -e);
  std::complex<double> r = 1.0;
  while (e > 0) {
    if (e & 1) r *= base;
    base *= base;
    e >>= 1;
  }
  return r;
}

std::complex<double> polynomial_eval(std::span<const std::complex<double>> coeffs, std::complex<double> w) {
  std::complex<double> v = 0.0;
  for (std::size_t i = coeffs.size(); i-- > 0;) v = v * w + coeffs[i];
  return v;
}

std::vector<std::complex<double>> polynomial_roots(std::span<const std::complex<double>> coeffs) {
  std::size_t deg = coeffs.size();
  while (deg > 0 && coeffs[deg - 1] == 0.0) --deg;
  if (deg < 2) return {};
  const auto n = static_cast<Eigen::Index>(deg - 1);
  const std::complex<double> lead = coeffs[deg - 1];
  CMatrix comp = CMatrix::Zero(n, n);
  for (Eigen::Index i = 1; i < n; ++i) comp(i, i - 1) = 1.0;
  for (Eigen::Index i = 0; i < n; ++i) comp(i, n - 1) = -coeffs[static_cast<std::size_t>(i)] / lead;
  Eigen::ComplexEigenSolver<CMatrix> es(comp, false);
  if (es.info() != Eigen::Success) throw Convergence("companion eigenvalue solve failed", 0.0, 0.0);
  std::vector<std::complex<double>> deriv;
  for (std::size_t i = 1; i < deg; ++i) deriv.push_back(static_cast<double>(i) * coeffs[i]);
  std::vector<std::complex<double>> roots;
  for (Eigen::Index i = 0; i < n; ++i) {
    std::complex<double> w = es.eigenvalues()(i);
    for (int it = 0; it < 50; ++it) {
      const auto df = polynomial_eval(deriv, w);
      if (df == 0.0) break;
      const auto step = polynomial_eval(coeffs.first(deg), w) / df;
      w -= step;
      if (std::abs(step) <= 1e-16 * std::max(1.0, std::abs(w))) break;
    }
    roots.push_back(w);
  }
  return roots;
}

}  // namespace tasep
