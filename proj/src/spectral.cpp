#include "modvar/spectral.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace modvar {

double s_squared_matrix_element(std::int64_t n, std::int64_t n_prime) {
  const std::int64_t k = n - n_prime;
  if (k == 0) return 1.0 / 12.0;
  const double sign = (k % 2 == 0) ? 1.0 : -1.0;
  const double pi2 = std::numbers::pi * std::numbers::pi;
  return sign / (2.0 * pi2 * double(k) * double(k));
}

Eigen::MatrixXd modular_uncertainty_matrix(int n_max) {
  if (n_max < 0) throw std::invalid_argument("modular_uncertainty_matrix: n_max must be >= 0");
  const int dim = 2 * n_max + 1;
  Eigen::MatrixXd a(dim, dim);
  for (int i = 0; i < dim; ++i) {
    const std::int64_t ni = i - n_max;
    for (int j = 0; j < dim; ++j) {
      const std::int64_t nj = j - n_max;
      a(i, j) = s_squared_matrix_element(ni, nj);
      if (i == j) a(i, j) += double(ni) * double(ni);
    }
  }
  return a;
}

namespace {

double smallest_eigenvalue(int n_max) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(modular_uncertainty_matrix(n_max),
                                                        Eigen::EigenvaluesOnly);
  return solver.eigenvalues()(0);
}

}  // namespace

EigenReport constant_c(int n_max) {
  if (n_max < 0) throw std::invalid_argument("constant_c: n_max must be >= 0");
  EigenReport report;
  report.n_max = n_max;
  report.c_value = smallest_eigenvalue(n_max);
  const int prev = n_max >= 8 ? n_max - 8 : 0;
  report.convergence_delta = std::abs(smallest_eigenvalue(prev) - report.c_value);
  return report;
}

}  // namespace modvar
