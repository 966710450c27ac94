#include "modvar/states.hpp"

#include <cmath>
#include <numbers>
#include <vector>

namespace modvar {

namespace {

constexpr double kPi = std::numbers::pi;

// |sum_{j=0}^{D-1} e^{2 pi i j u}|^2 = sin^2(pi D u)/sin^2(pi u), limit D^2
double dirichlet_factor(double u, int d_slits) {
  const double s = std::sin(kPi * u);
  if (std::abs(s) < 1e-9) return double(d_slits) * double(d_slits);
  const double sd = std::sin(kPi * d_slits * u);
  return (sd * sd) / (s * s);
}

// squared top-hat Fourier envelope sin^2(pi a p)/(pi p)^2
double slit_envelope_sq(double p, double width) {
  const double q = kPi * p;
  if (std::abs(q) < 1e-12) return width * width;
  const double v = std::sin(width * q) / q;
  return v * v;
}

}  // namespace

SlitSpec reference_slit_spec(int slit_count) {
  switch (slit_count) {
    case 2: return {2, 0.08, 0.16};
    case 3: return {3, 0.04, 0.125};
    case 4: return {4, 0.08, 0.16};
    default: throw std::invalid_argument("reference_slit_spec: reference geometry has D = 2, 3, 4");
  }
}

double slit_center(const SlitSpec& spec, int j) {
  spec.validate();
  if (j < 0 || j >= spec.slit_count) throw std::invalid_argument("slit_center: index out of range");
  // integer-lattice centering: (D-1)/2 truncated, so centers are j*d shifted
  // to straddle zero without leaving the lattice
  return double(j - (spec.slit_count - 1) / 2) * spec.separation_mm;
}

Axis default_near_axis(const SlitSpec& spec, int cells_per_period) {
  spec.validate();
  if (cells_per_period < 2) throw std::invalid_argument("default_near_axis: need >= 2 cells");
  const double d = spec.separation_mm;
  const int lo_cell = int(std::llround(slit_center(spec, 0) / d)) - 1;
  const int hi_cell = int(std::llround(slit_center(spec, spec.slit_count - 1) / d)) + 1;
  Axis axis;
  axis.kind = AxisKind::position;
  axis.step = d / cells_per_period;
  axis.count = Eigen::Index(hi_cell - lo_cell + 1) * cells_per_period;
  axis.start = (lo_cell - 0.5) * d + 0.5 * axis.step;
  return axis;
}

Axis default_far_axis(const SlitSpec& spec, int cells_per_period, int periods) {
  spec.validate();
  if (cells_per_period < 2 || periods < 1)
    throw std::invalid_argument("default_far_axis: invalid resolution");
  const double period = 1.0 / spec.separation_mm;
  Axis axis;
  axis.kind = AxisKind::momentum;
  axis.step = period / cells_per_period;
  axis.count = Eigen::Index(periods) * cells_per_period;
  axis.start = -0.5 * periods * period + 0.5 * axis.step;
  return axis;
}

JointDistribution ideal_near_field(const SlitSpec& spec, const Axis& axis) {
  spec.validate();
  axis.validate();
  if (axis.kind != AxisKind::position)
    throw std::invalid_argument("ideal_near_field: axis must be position kind");

  const double half_width = 0.5 * spec.width_mm;
  const double lo = slit_center(spec, 0) - half_width;
  const double hi = slit_center(spec, spec.slit_count - 1) + half_width;
  if (axis.coord(0) > lo || axis.coord(axis.count - 1) < hi)
    throw std::invalid_argument("ideal_near_field: axis range does not cover slits");

  // slit index per cell center, -1 outside; slits are disjoint (width < separation)
  std::vector<int> slit_of(axis.count, -1);
  for (Eigen::Index i = 0; i < axis.count; ++i) {
    const double x = axis.coord(i);
    for (int j = 0; j < spec.slit_count; ++j) {
      const double c = slit_center(spec, j);
      if (x >= c - half_width && x < c + half_width) {
        slit_of[i] = j;
        break;
      }
    }
  }

  JointDistribution joint;
  joint.axis1 = joint.axis2 = axis;
  joint.probs = Eigen::ArrayXXd::Zero(axis.count, axis.count);
  double total = 0.0;
  for (Eigen::Index i = 0; i < axis.count; ++i) {
    if (slit_of[i] < 0) continue;
    for (Eigen::Index k = 0; k < axis.count; ++k) {
      if (slit_of[k] == slit_of[i]) {
        joint.probs(i, k) = 1.0;
        total += 1.0;
      }
    }
  }
  if (total == 0.0) throw std::invalid_argument("ideal_near_field: grid does not sample the slits");
  joint.probs /= total;
  return joint;
}

JointDistribution ideal_far_field(const SlitSpec& spec, const Axis& axis, FarFieldMode mode) {
  spec.validate();
  axis.validate();
  if (axis.kind != AxisKind::momentum)
    throw std::invalid_argument("ideal_far_field: axis must be momentum kind");
  const double fine_fringe = 1.0 / (double(spec.slit_count) * spec.separation_mm);
  if (axis.step > 0.5 * fine_fringe)
    throw std::invalid_argument("ideal_far_field: axis too coarse to resolve fringe period");

  Eigen::ArrayXd envelope(axis.count);
  for (Eigen::Index i = 0; i < axis.count; ++i)
    envelope(i) = mode == FarFieldMode::comb ? 1.0 : slit_envelope_sq(axis.coord(i), spec.width_mm);

  JointDistribution joint;
  joint.axis1 = joint.axis2 = axis;
  joint.probs.resize(axis.count, axis.count);
  for (Eigen::Index i = 0; i < axis.count; ++i) {
    const double p1 = axis.coord(i);
    for (Eigen::Index k = 0; k < axis.count; ++k) {
      joint.probs(i, k) = envelope(i) * envelope(k) *
                          dirichlet_factor((p1 + axis.coord(k)) * spec.separation_mm,
                                           spec.slit_count);
    }
  }
  joint.probs /= joint.probs.sum();
  return joint;
}

double theory_variance_S_plus(int slit_count, double ell) {
  if (slit_count < 2) throw std::invalid_argument("theory_variance_S_plus: need D >= 2");
  if (!(ell > 0.0)) throw std::invalid_argument("theory_variance_S_plus: ell must be positive");
  double sum = 0.0;
  for (int j = 1; j < slit_count; ++j)
    sum += double(slit_count - j) / (double(slit_count) * double(j) * double(j));
  return ell * ell / 6.0 - ell * ell / (kPi * kPi) * sum;
}

JointDistribution add_background(const JointDistribution& j, double fraction) {
  j.validate();
  if (!(fraction >= 0.0 && fraction <= 1.0))
    throw std::invalid_argument("add_background: fraction must be in [0, 1]");
  JointDistribution out = j;
  const double uniform = 1.0 / double(j.probs.size());
  out.probs = (1.0 - fraction) * j.probs + fraction * uniform;
  out.probs /= out.probs.sum();
  return out;
}

}  // namespace modvar
