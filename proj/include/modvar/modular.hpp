#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "modvar/grid.hpp"

namespace modvar {

/// Scale factor and remainder-histogram resolution for the modular decomposition.
struct ModularConfig {
  double ell{1.0};          // scale factor, mm
  int bins_per_period{64};  // remainder histogram bins B

  void validate() const {
    if (!(ell > 0.0) || !std::isfinite(ell))
      throw std::invalid_argument("ModularConfig: ell must be positive");
    if (bins_per_period < 4)
      throw std::invalid_argument("ModularConfig: bins_per_period must be at least 4");
  }
};

struct ModularDecomposition {
  std::int64_t integer;
  double remainder;
};

namespace detail {

inline double positive_mod(double v, double period) {
  double m = v - period * std::floor(v / period);
  if (m >= period) m -= period;
  if (m < 0.0) m += period;
  return m;
}

// value = n*period + r with r in [-period/2, period/2)
inline ModularDecomposition decompose_by_period(double value, double period) {
  if (!std::isfinite(value))
    throw std::invalid_argument("modular decomposition: non-finite coordinate");
  const double r = positive_mod(value + 0.5 * period, period) - 0.5 * period;
  const auto n = std::int64_t(std::llround((value - r) / period));
  return {n, r};
}

}  // namespace detail

/// x = n*ell + r with centered remainder r in [-ell/2, ell/2).
inline ModularDecomposition decompose_position(double x, double ell) {
  if (!(ell > 0.0)) throw std::invalid_argument("decompose_position: ell must be positive");
  return detail::decompose_by_period(x, ell);
}

/// p = m/ell + s with centered remainder s in [-1/(2 ell), 1/(2 ell)).
inline ModularDecomposition decompose_momentum(double p, double ell) {
  if (!(ell > 0.0)) throw std::invalid_argument("decompose_momentum: ell must be positive");
  return detail::decompose_by_period(p, 1.0 / ell);
}

/// Histogram over integer modular values; value of entry i is min_value + i.
struct IntegerHist {
  Eigen::ArrayXd probs;
  std::int64_t min_value{0};

  Eigen::ArrayXd values() const {
    return double(min_value) + Eigen::ArrayXd::LinSpaced(probs.size(), 0.0, double(probs.size() - 1));
  }
};

/// Joint histogram over integer pairs; probs(i,j) is P(n1 = min1+i, n2 = min2+j).
struct IntegerJoint {
  Eigen::ArrayXXd probs;
  std::int64_t min1{0};
  std::int64_t min2{0};

  Eigen::ArrayXd values1() const {
    return double(min1) + Eigen::ArrayXd::LinSpaced(probs.rows(), 0.0, double(probs.rows() - 1));
  }
  Eigen::ArrayXd values2() const {
    return double(min2) + Eigen::ArrayXd::LinSpaced(probs.cols(), 0.0, double(probs.cols() - 1));
  }
};

/// Uniform-width histogram over a real variable; bin k is centered at
/// center0 + k*width.
struct RemainderHist {
  Eigen::ArrayXd probs;
  double center0{0.0};
  double width{1.0};

  Eigen::ArrayXd centers() const {
    return center0 + width * Eigen::ArrayXd::LinSpaced(probs.size(), 0.0, double(probs.size() - 1));
  }
};

/// Modular-variable view of a joint distribution: the integer-part joint,
/// the binned remainder joint, and the global-combination histograms
/// n1 +/- n2 and r1 +/- r2 (or their momentum counterparts).
struct ModularJoint {
  AxisKind kind{AxisKind::position};
  double ell{1.0};
  int bins{64};

  IntegerJoint integer_joint;
  Eigen::ArrayXXd remainder_joint;  // bins x bins over (r1, r2)

  IntegerHist combo_int_plus;    // n1 + n2
  IntegerHist combo_int_minus;   // n1 - n2
  RemainderHist combo_rem_plus;  // r1 + r2, 2B-1 bins on the doubled interval
  RemainderHist combo_rem_minus; // r1 - r2

  // relative deviation of period/step from the nearest integer (worst axis)
  double step_period_mismatch{0.0};

  double period() const { return kind == AxisKind::position ? ell : 1.0 / ell; }
  double remainder_bin_width() const { return period() / bins; }

  Eigen::ArrayXd remainder_centers() const {
    const double w = remainder_bin_width();
    return -0.5 * period() + w * (0.5 + Eigen::ArrayXd::LinSpaced(bins, 0.0, double(bins - 1)));
  }
};

/// Fold a joint distribution into modular variables. Each grid cell's
/// probability is assigned by its cell center; combination histograms push the
/// exact integer sums/differences and bin the raw remainder sums/differences.
ModularJoint fold_joint(const JointDistribution& j, const ModularConfig& cfg);

}  // namespace modvar
