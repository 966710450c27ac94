#pragma once

#include <Eigen/Dense>
#include <cstdint>

namespace modvar {

/// Result of the uncertainty-constant eigensolve: the smallest eigenvalue of
/// n^2 + ell^2 s^2 on a truncated integer basis -n_max..n_max.
struct EigenReport {
  int n_max{0};
  double c_value{0.0};
  double convergence_delta{0.0};  // |c(n_max) - c(n_max - 8)|
};

/// Matrix element <n| ell^2 s^2 |n'> in the integer (Fourier) basis of the base
/// remainder cell: 1/12 on the diagonal, (-1)^k / (2 pi^2 k^2) for k = n - n'.
/// Independent of ell.
double s_squared_matrix_element(std::int64_t n, std::int64_t n_prime);

/// Truncated matrix of n^2 + ell^2 s^2, size (2 n_max + 1)^2, real symmetric.
Eigen::MatrixXd modular_uncertainty_matrix(int n_max);

/// Smallest eigenvalue of n^2 + ell^2 s^2 by dense symmetric eigensolve.
/// Converges from 1/12 at n_max = 0 down to 0.078235... within a few terms.
EigenReport constant_c(int n_max = 64);

}  // namespace modvar
