#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "modvar/counts.hpp"
#include "modvar/modular.hpp"

namespace modvar {

enum class Criterion { var_ent, ent_ent, var_steer, ent_steer, coarse_grained };

/// Sign pairing of the global variables entering a witness: N- with S+ or
/// N+ with S-. These are the two combinations violable by entangled states.
enum class Pairing { n_minus_s_plus, n_plus_s_minus };

/// Which party's variables are inferred in the steering criteria.
enum class SteeringDirection { infer_first_from_second, infer_second_from_first };

/// Outcome of one criterion evaluation. violation = lhs - threshold; negative
/// values mean the inequality is violated and the correlation is detected.
struct WitnessResult {
  Criterion criterion{Criterion::var_ent};
  Pairing pairing{Pairing::n_minus_s_plus};
  double lhs{0.0};
  double threshold{0.0};
  double violation{0.0};
  std::map<std::string, double> components;
  std::optional<double> sd;
};

/// Average conditional variance of the row variable given the column variable,
/// with the conditional mean as estimator: sum_ab P(a,b) (a - E[a|b])^2.
double inferred_variance(const Eigen::ArrayXXd& joint, const Eigen::ArrayXd& centers_a);

/// Same, but against a caller-supplied estimate per column outcome. The
/// conditional mean minimizes this over all estimators.
double inferred_variance_with_estimator(const Eigen::ArrayXXd& joint,
                                        const Eigen::ArrayXd& centers_a,
                                        const Eigen::ArrayXd& estimate_b);

/// Variance entanglement criterion: Var(N+-) + ell^2 Var(S-+) >= 2C for all
/// separable states.
WitnessResult variance_entanglement(const ModularJoint& near, const ModularJoint& far, double ell,
                                    double c_value, Pairing pairing = Pairing::n_minus_s_plus);

/// Entropic entanglement witness: H(N+-) + h(S-+) >= ln(sqrt(2)/ell) for all
/// separable states.
WitnessResult entropic_entanglement(const ModularJoint& near, const ModularJoint& far, double ell,
                                    Pairing pairing = Pairing::n_minus_s_plus);

/// Variance steering criterion: inferred Var(n1) + ell^2 inferred Var(s1) >= C
/// for all non-steerable states.
WitnessResult variance_steering(const ModularJoint& near, const ModularJoint& far, double ell,
                                double c_value,
                                SteeringDirection direction = SteeringDirection::infer_first_from_second);

/// Entropic steering criterion: H(n1|n2) + h(s1|s2) >= -ln(ell).
WitnessResult entropic_steering(const ModularJoint& near, const ModularJoint& far, double ell,
                                SteeringDirection direction = SteeringDirection::infer_first_from_second);

/// Coarse-grained entropic witness with measurement precisions
/// delta_N = max(ell/slit_separation, 1) and delta_S (discrete entropies on
/// both sides): H(N+-) + H(S-+) >= ln(sqrt(2)/(delta_N delta_S ell)).
WitnessResult coarse_grained_entropic(const ModularJoint& near, const ModularJoint& far, double ell,
                                      double slit_separation, double delta_s,
                                      Pairing pairing = Pairing::n_minus_s_plus);

/// Coarse-grained violation as a function of ell/slit_separation.
struct ScanCurve {
  std::vector<double> ratios;
  std::vector<double> violations;
  double argmin_ratio{0.0};
};

ScanCurve scan_ell(const JointDistribution& near, const JointDistribution& far,
                   double slit_separation, const std::vector<double>& ratios, int bins_per_period);

/// Everything needed to evaluate one criterion from folded data.
struct WitnessSettings {
  Criterion criterion{Criterion::ent_ent};
  Pairing pairing{Pairing::n_minus_s_plus};
  SteeringDirection direction{SteeringDirection::infer_first_from_second};
  double ell{1.0};
  int bins_per_period{64};
  double c_value{0.0};
  double coarse_separation{0.0};  // slit separation d for the coarse-grained witness
};

WitnessResult evaluate_criterion(const ModularJoint& near, const ModularJoint& far,
                                 const WitnessSettings& settings);

/// Poisson-resampled uncertainty of a criterion evaluated from raw counts:
/// every trial redraws each cell from a Poisson law with the observed count as
/// mean and re-runs the full pipeline. Deterministic for a given seed.
struct ResampleStats {
  double mean{0.0};
  double sd{0.0};
};

ResampleStats poisson_uncertainty(const CountsMap& near, const CountsMap& far,
                                  const WitnessSettings& settings, int trials, std::uint64_t seed);

std::string criterion_name(Criterion c);
std::string pairing_name(Pairing p);

}  // namespace modvar
