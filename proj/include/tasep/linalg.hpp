#pragma once

#include <Eigen/Dense>
#include <complex>
#include <span>
#include <vector>

namespace tasep {

using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

// LU with partial pivoting after scaling each row by its max modulus
std::complex<double> determinant(CMatrix a);

// prod_{i<j} (w_j - w_i)
std::complex<double> vandermonde(std::span<const std::complex<double>> w);

// prod_{i,j} (w_i - w'_j)
std::complex<double> cross_product(std::span<const std::complex<double>> w,
                                   std::span<const std::complex<double>> wp);

// all roots of sum_j c_j w^j (ascending coefficients) via the companion matrix, Newton polished
std::vector<std::complex<double>> polynomial_roots(std::span<const std::complex<double>> coeffs);

std::complex<double> polynomial_eval(std::span<const std::complex<double>> coeffs, std::complex<double> w);

std::complex<double> ipow(std::complex<double> base, long long e);

}  // namespace tasep
