#include <doctest.h>

#include "modvar/spectral.hpp"
#include "oracles.hpp"

using namespace modvar;

TEST_CASE("s^2 matrix elements match the analytic forms") {
  CHECK(s_squared_matrix_element(0, 0) == doctest::Approx(1.0 / 12.0).epsilon(1e-15));
  CHECK(s_squared_matrix_element(3, 2) ==
        doctest::Approx(-1.0 / (2.0 * oracle::kPi * oracle::kPi)).epsilon(1e-15));
  CHECK(s_squared_matrix_element(5, 3) ==
        doctest::Approx(1.0 / (8.0 * oracle::kPi * oracle::kPi)).epsilon(1e-15));
}

TEST_CASE("s^2 matrix elements validated by quadrature, independent of ell") {
  for (const double ell : {0.16, 1.0, 3.7}) {
    for (std::int64_t k = 0; k <= 5; ++k) {
      const double quad = oracle::s_squared_element_quadrature(k, ell);
      CHECK(std::abs(quad - s_squared_matrix_element(k, 0)) < 1e-10);
    }
  }
}

TEST_CASE("constant_c") {
  SUBCASE("n_max = 0 is the bare 1/12") {
    const EigenReport r = constant_c(0);
    CHECK(r.c_value == doctest::Approx(1.0 / 12.0).epsilon(1e-15));
  }
  SUBCASE("n_max = 40 reproduces the uncertainty constant") {
    const EigenReport r = constant_c(40);
    CHECK(std::abs(r.c_value - 0.078235) < 5e-6);
    CHECK(std::abs(r.c_value - oracle::kConstantC) < 1e-9);
  }
  SUBCASE("default converges below 1e-7") {
    const EigenReport r = constant_c();
    CHECK(r.n_max == 64);
    CHECK(r.convergence_delta >= 0.0);
    CHECK(r.convergence_delta < 1e-7);
    CHECK(r.c_value > 0.0);
    CHECK(r.c_value <= 1.0 / 12.0);
  }
  SUBCASE("negative truncation is rejected") {
    CHECK_THROWS_AS(constant_c(-1), std::invalid_argument);
  }
}

TEST_CASE("c(n_max) is non-increasing in n_max") {
  double prev = 1.0;
  for (const int n : {0, 1, 2, 4, 8, 16, 32}) {
    const double c = constant_c(n).c_value;
    CHECK(c <= prev + 1e-15);
    prev = c;
  }
}

TEST_CASE("ground eigenvector mass concentrates at small |n|") {
  const int n_max = 40;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(modular_uncertainty_matrix(n_max));
  const Eigen::VectorXd ground = solver.eigenvectors().col(0);
  double inside = 0.0;
  for (int i = 0; i < ground.size(); ++i)
    if (std::abs(i - n_max) <= 10) inside += ground(i) * ground(i);
  CHECK(inside / ground.squaredNorm() >= 0.99);
}
