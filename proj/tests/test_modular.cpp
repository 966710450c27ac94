#include <doctest.h>

#include <cmath>
#include <random>

#include "modvar/modular.hpp"
#include "modvar/states.hpp"

using namespace modvar;

TEST_CASE("decompose_position") {
  SUBCASE("worked values") {
    auto d = decompose_position(0.0, 1.0);
    CHECK(d.integer == 0);
    CHECK(d.remainder == 0.0);

    d = decompose_position(0.75, 1.0);
    CHECK(d.integer == 1);
    CHECK(d.remainder == doctest::Approx(-0.25).epsilon(1e-15));

    d = decompose_position(-0.6, 1.0);
    CHECK(d.integer == -1);
    CHECK(d.remainder == doctest::Approx(0.4).epsilon(1e-15));
  }
  SUBCASE("boundary goes to the lower edge of the cell") {
    const auto d = decompose_position(0.5, 1.0);
    CHECK(d.integer == 1);
    CHECK(d.remainder == doctest::Approx(-0.5));
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(decompose_position(std::nan(""), 1.0), std::invalid_argument);
    CHECK_THROWS_AS(decompose_position(1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(decompose_position(1.0, -2.0), std::invalid_argument);
  }
}

TEST_CASE("decompose_momentum") {
  auto d = decompose_momentum(0.0, 2.0);
  CHECK(d.integer == 0);
  CHECK(d.remainder == 0.0);

  // period 1/ell = 0.5; s = ((1.3 + 0.25) mod 0.5) - 0.25
  d = decompose_momentum(1.3, 2.0);
  CHECK(d.integer == 3);
  CHECK(d.remainder == doctest::Approx(-0.2).epsilon(1e-12));

  d = decompose_momentum(0.24, 1.0);
  CHECK(d.integer == 0);
  CHECK(d.remainder == doctest::Approx(0.24).epsilon(1e-15));
}

TEST_CASE("reconstruction property") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> coords(-40.0, 40.0);
  std::uniform_real_distribution<double> scales(0.05, 5.0);
  for (int t = 0; t < 1000; ++t) {
    const double x = coords(rng), ell = scales(rng);
    const auto dp = decompose_position(x, ell);
    CHECK(std::abs(double(dp.integer) * ell + dp.remainder - x) <=
          1e-12 * std::max(1.0, std::abs(x)));
    CHECK(dp.remainder >= -0.5 * ell);
    CHECK(dp.remainder < 0.5 * ell);

    const double p = coords(rng);
    const auto dm = decompose_momentum(p, ell);
    CHECK(std::abs(double(dm.integer) / ell + dm.remainder - p) <=
          1e-12 * std::max(1.0, std::abs(p)));
  }
}

namespace {

JointDistribution point_mass_joint(double x1, double x2) {
  JointDistribution j;
  j.axis1 = Axis{AxisKind::position, x1, 0.05, 4};
  j.axis2 = Axis{AxisKind::position, x2, 0.05, 4};
  j.probs = Eigen::ArrayXXd::Zero(4, 4);
  j.probs(0, 0) = 1.0;
  return j;
}

}  // namespace

TEST_CASE("fold_joint point mass lands in the right combination bins") {
  for (const int bins : {4, 8, 16, 64}) {
    const ModularJoint m = fold_joint(point_mass_joint(0.75, -0.6), ModularConfig{1.0, bins});

    // N- = 1 - (-1) = 2 with certainty
    const Eigen::Index idx = Eigen::Index(2 - m.combo_int_minus.min_value);
    CHECK(m.combo_int_minus.probs(idx) == 1.0);
    CHECK(m.combo_int_minus.probs.sum() == 1.0);

    // R+ = -0.25 + 0.4 = 0.15: all mass in the bin whose interval contains it
    const Eigen::ArrayXd centers = m.combo_rem_plus.centers();
    const double w = m.combo_rem_plus.width;
    bool found = false;
    for (Eigen::Index k = 0; k < centers.size(); ++k) {
      if (0.15 >= centers(k) - 0.5 * w && 0.15 < centers(k) + 0.5 * w) {
        CHECK(m.combo_rem_plus.probs(k) == 1.0);
        found = true;
      } else {
        CHECK(m.combo_rem_plus.probs(k) == 0.0);
      }
    }
    CHECK(found);
  }
}

TEST_CASE("fold_joint ideal D=2 near field concentrates N- at zero") {
  const SlitSpec spec = reference_slit_spec(2);
  const JointDistribution j = ideal_near_field(spec, default_near_axis(spec, 64));
  const ModularJoint m = fold_joint(j, ModularConfig{spec.separation_mm, 32});
  const Eigen::Index zero = Eigen::Index(-m.combo_int_minus.min_value);
  CHECK(m.combo_int_minus.probs(zero) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("fold_joint conserves probability in every derived map") {
  const SlitSpec spec = reference_slit_spec(3);
  const JointDistribution far =
      ideal_far_field(spec, default_far_axis(spec, 64, 5), FarFieldMode::physical);
  const ModularJoint m = fold_joint(far, ModularConfig{spec.separation_mm, 16});
  CHECK(m.integer_joint.probs.sum() == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(m.remainder_joint.sum() == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(m.combo_int_plus.probs.sum() == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(m.combo_int_minus.probs.sum() == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(m.combo_rem_plus.probs.sum() == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(m.combo_rem_minus.probs.sum() == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("shift covariance: translating by ell increments the integers") {
  const SlitSpec spec = reference_slit_spec(2);
  const Axis axis = default_near_axis(spec, 64);
  const JointDistribution j = ideal_near_field(spec, axis);

  JointDistribution shifted = j;
  shifted.axis1.start += spec.separation_mm;
  shifted.axis2.start += spec.separation_mm;

  const ModularConfig cfg{spec.separation_mm, 32};
  const ModularJoint m0 = fold_joint(j, cfg);
  const ModularJoint m1 = fold_joint(shifted, cfg);

  CHECK(m1.integer_joint.min1 == m0.integer_joint.min1 + 1);
  CHECK(m1.integer_joint.min2 == m0.integer_joint.min2 + 1);
  CHECK((m1.integer_joint.probs - m0.integer_joint.probs).abs().maxCoeff() < 1e-12);
  CHECK((m1.remainder_joint - m0.remainder_joint).abs().maxCoeff() < 1e-12);
  // N- is invariant, N+ shifts by 2
  CHECK(m1.combo_int_minus.min_value == m0.combo_int_minus.min_value);
  CHECK((m1.combo_int_minus.probs - m0.combo_int_minus.probs).abs().maxCoeff() < 1e-12);
  CHECK(m1.combo_int_plus.min_value == m0.combo_int_plus.min_value + 2);
}

TEST_CASE("combo integers equal the brute-force pushforward") {
  const SlitSpec spec = reference_slit_spec(3);
  const JointDistribution far = ideal_far_field(spec, default_far_axis(spec, 64, 5));
  const ModularJoint m = fold_joint(far, ModularConfig{spec.separation_mm, 16});

  const auto& ij = m.integer_joint;
  Eigen::ArrayXd brute_minus = Eigen::ArrayXd::Zero(m.combo_int_minus.probs.size());
  Eigen::ArrayXd brute_plus = Eigen::ArrayXd::Zero(m.combo_int_plus.probs.size());
  for (Eigen::Index a = 0; a < ij.probs.rows(); ++a)
    for (Eigen::Index b = 0; b < ij.probs.cols(); ++b) {
      const std::int64_t n1 = ij.min1 + a, n2 = ij.min2 + b;
      brute_minus(n1 - n2 - m.combo_int_minus.min_value) += ij.probs(a, b);
      brute_plus(n1 + n2 - m.combo_int_plus.min_value) += ij.probs(a, b);
    }
  CHECK((brute_minus - m.combo_int_minus.probs).abs().maxCoeff() < 1e-12);
  CHECK((brute_plus - m.combo_int_plus.probs).abs().maxCoeff() < 1e-12);
}

TEST_CASE("uniform coordinate over one period gives a flat remainder marginal") {
  JointDistribution j;
  const int n = 64;
  j.axis1 = Axis{AxisKind::position, -0.5 + 0.5 / n, 1.0 / n, n};
  j.axis2 = Axis{AxisKind::position, 0.0, 0.01, 8};
  Eigen::ArrayXd f2(8);
  f2 << 0.3, 0.1, 0.05, 0.05, 0.1, 0.2, 0.15, 0.05;
  j.probs = Eigen::ArrayXd::Constant(n, 1.0 / n).matrix() * f2.matrix().transpose();

  const int bins = 16;
  const ModularJoint m = fold_joint(j, ModularConfig{1.0, bins});
  const Eigen::ArrayXd r1_marginal = m.remainder_joint.rowwise().sum();
  for (int b = 0; b < bins; ++b)
    CHECK(r1_marginal(b) == doctest::Approx(1.0 / bins).epsilon(1e-12));
}

TEST_CASE("fold_joint rejects a grid coarser than the period") {
  JointDistribution j;
  j.axis1 = Axis{AxisKind::position, 0.0, 0.6, 4};
  j.axis2 = Axis{AxisKind::position, 0.0, 0.6, 4};
  j.probs = Eigen::ArrayXXd::Constant(4, 4, 1.0 / 16.0);
  CHECK_THROWS_WITH_AS(fold_joint(j, ModularConfig{1.0, 8}),
                       "fold_joint: grid too coarse for period", std::invalid_argument);
}

TEST_CASE("commensurability diagnostic") {
  JointDistribution j;
  j.axis1 = Axis{AxisKind::position, 0.0, 0.1, 32};
  j.axis2 = Axis{AxisKind::position, 0.0, 0.1, 32};
  j.probs = Eigen::ArrayXXd::Constant(32, 32, 1.0 / 1024.0);
  CHECK(fold_joint(j, ModularConfig{1.0, 4}).step_period_mismatch < 1e-12);
  CHECK(fold_joint(j, ModularConfig{1.03, 4}).step_period_mismatch > 0.001);
}
