#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <string>

namespace modvar {

inline constexpr double kNormalizationTol = 1e-9;

enum class AxisKind { position, momentum };

/// Uniform coordinate axis. Position coordinates are mm, momentum mm^-1.
/// coord(i) is the center of cell i; cell probabilities are attached to centers.
struct Axis {
  AxisKind kind{AxisKind::position};
  double start{0.0};
  double step{1.0};
  Eigen::Index count{0};

  double coord(Eigen::Index i) const { return start + double(i) * step; }

  Eigen::ArrayXd centers() const {
    return start + step * Eigen::ArrayXd::LinSpaced(count, 0.0, double(count - 1));
  }

  void validate() const {
    if (!(step > 0.0) || !std::isfinite(step) || !std::isfinite(start))
      throw std::invalid_argument("Axis: step must be positive and finite");
    if (count < 2) throw std::invalid_argument("Axis: count must be at least 2");
  }
};

/// Imaging parameters of the detection system (near-field magnification,
/// far-field lens focal length and photon wavelength).
struct OpticsConfig {
  double magnification{3.6};
  double focal_mm{300.0};
  double wavelength_nm{810.0};

  // f*lambda in mm^2; wavelength is stored in nm
  double focal_wavelength_mm2() const { return focal_mm * wavelength_nm * 1e-6; }

  void validate() const {
    if (!(magnification > 0.0) || !(focal_mm > 0.0) || !(wavelength_nm > 0.0))
      throw std::invalid_argument("OpticsConfig: all parameters must be positive");
  }
};

enum class DetectorPlane { near, far };

/// Detector position -> physical coordinate. Near field: x = rho/M (mm).
/// Far field: p = rho/(f*lambda) (mm^-1).
inline double convert_detector_coords(double rho_mm, DetectorPlane plane,
                                      const OpticsConfig& optics) {
  optics.validate();
  if (!std::isfinite(rho_mm))
    throw std::invalid_argument("convert_detector_coords: non-finite input");
  if (plane == DetectorPlane::near) return rho_mm / optics.magnification;
  return rho_mm / optics.focal_wavelength_mm2();
}

/// One-dimensional probability histogram; probs are per-cell probabilities
/// (already integrated over the cell), summing to 1.
struct Density {
  Axis axis;
  Eigen::ArrayXd probs;

  void validate() const {
    axis.validate();
    if (probs.size() != axis.count)
      throw std::invalid_argument("Density: probability size does not match axis");
    if ((probs < 0.0).any()) throw std::invalid_argument("Density: negative probabilities");
    if (std::abs(probs.sum() - 1.0) > kNormalizationTol)
      throw std::invalid_argument("Density: probabilities must sum to 1");
  }
};

/// Normalized joint probability grid over (x1,x2) or (p1,p2).
/// probs(i,j): i indexes axis1, j indexes axis2. Cell probabilities, not densities.
struct JointDistribution {
  Axis axis1;
  Axis axis2;
  Eigen::ArrayXXd probs;

  void validate() const {
    axis1.validate();
    axis2.validate();
    if (axis1.kind != axis2.kind)
      throw std::invalid_argument("JointDistribution: axes must share a kind");
    if (probs.rows() != axis1.count || probs.cols() != axis2.count)
      throw std::invalid_argument("JointDistribution: grid shape does not match axes");
    if ((probs < 0.0).any())
      throw std::invalid_argument("JointDistribution: negative probabilities");
    if (std::abs(probs.sum() - 1.0) > kNormalizationTol)
      throw std::invalid_argument("JointDistribution: probabilities must sum to 1");
  }
};

enum class Party { first, second };

/// Marginal of a joint distribution; normalization is preserved exactly.
inline Density marginal(const JointDistribution& j, Party which) {
  j.validate();
  Density d;
  if (which == Party::first) {
    d.axis = j.axis1;
    d.probs = j.probs.rowwise().sum();
  } else {
    d.axis = j.axis2;
    d.probs = j.probs.colwise().sum().transpose();
  }
  return d;
}

/// Mean of a probability vector against arbitrary cell centers.
template <typename DerivedP, typename DerivedC>
double weighted_mean(const Eigen::ArrayBase<DerivedP>& probs,
                     const Eigen::ArrayBase<DerivedC>& centers) {
  return (probs * centers).sum();
}

/// Variance against cell centers: sum p*c^2 - (sum p*c)^2, evaluated in
/// centered form for stability. Assumes probs sum to 1.
template <typename DerivedP, typename DerivedC>
double weighted_variance(const Eigen::ArrayBase<DerivedP>& probs,
                         const Eigen::ArrayBase<DerivedC>& centers) {
  const double m = weighted_mean(probs, centers);
  return (probs * (centers - m).square()).sum();
}

inline double mean_of(const Density& d) {
  d.validate();
  return weighted_mean(d.probs, d.axis.centers());
}

inline double variance_of(const Density& d) {
  d.validate();
  return weighted_variance(d.probs, d.axis.centers());
}

}  // namespace modvar
