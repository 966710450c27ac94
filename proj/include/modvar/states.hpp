#pragma once

#include "modvar/grid.hpp"

namespace modvar {

/// Geometry of a D-slit aperture: slit count, slit width and center-to-center
/// separation (mm). Slit j (j = 0..D-1) is centered at (j - (D-1)/2)*d,
/// rounded to the integer lattice so every slit sits at an integer multiple of
/// the separation.
struct SlitSpec {
  int slit_count{2};
  double width_mm{0.08};
  double separation_mm{0.16};

  void validate() const {
    if (slit_count < 2) throw std::invalid_argument("SlitSpec: slit_count must be at least 2");
    if (!(width_mm > 0.0) || !(width_mm < separation_mm))
      throw std::invalid_argument("SlitSpec: need 0 < width < separation");
  }
};

/// Slit dimensions used in the reference experiment:
/// a2 = a4 = 0.08 mm, a3 = 0.04 mm, d2 = d4 = 0.16 mm, d3 = 0.125 mm.
SlitSpec reference_slit_spec(int slit_count);

/// Center of slit j in mm, on the integer lattice of the separation.
double slit_center(const SlitSpec& spec, int j);

/// Far-field envelope model: `comb` keeps the envelope constant across the
/// momentum window (the approximation behind the closed-form theory values);
/// `physical` applies the squared top-hat transform sin^2(pi a p)/(pi p)^2.
enum class FarFieldMode { comb, physical };

/// Position axis covering all slits plus one modular period of margin,
/// commensurate with the slit separation (cells_per_period cells per d).
Axis default_near_axis(const SlitSpec& spec, int cells_per_period = 128);

/// Momentum axis covering `periods` full modular periods 1/d, centered on 0.
Axis default_far_axis(const SlitSpec& spec, int cells_per_period = 128, int periods = 9);

/// Two-photon near-field joint for the ideal state: both photons pass through
/// the same slit, so all mass lies in the D diagonal blocks.
JointDistribution ideal_near_field(const SlitSpec& spec, const Axis& axis);

/// Two-photon far-field joint: envelope(p1)*envelope(p2)*|sum_j e^{2 pi i j d (p1+p2)}|^2.
JointDistribution ideal_far_field(const SlitSpec& spec, const Axis& axis,
                                  FarFieldMode mode = FarFieldMode::comb);

/// Closed form ell^2/6 - (ell^2/pi^2) sum_{j=1}^{D-1} (D-j)/(D j^2) for the
/// ideal D-slit state. The witness combination ell^2 Var(S+) is
/// scale-invariant and equals this expression at ell = 1.
double theory_variance_S_plus(int slit_count, double ell);

/// Mix a uniform background over the grid window: (1-fraction)*j + fraction*uniform.
JointDistribution add_background(const JointDistribution& j, double fraction);

}  // namespace modvar
