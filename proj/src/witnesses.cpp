#include "modvar/witnesses.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "modvar/entropy.hpp"

namespace modvar {

namespace {

void check_inputs(const ModularJoint& near, const ModularJoint& far, double ell) {
  if (near.kind != AxisKind::position)
    throw std::invalid_argument("witness: near input must be position kind");
  if (far.kind != AxisKind::momentum)
    throw std::invalid_argument("witness: far input must be momentum kind");
  if (std::abs(near.ell - far.ell) > 1e-12 * std::max(near.ell, far.ell) ||
      std::abs(near.ell - ell) > 1e-12 * std::max(near.ell, ell))
    throw std::invalid_argument("witness: mismatched ell between inputs");
}

const IntegerHist& int_combo(const ModularJoint& m, Pairing pairing) {
  return pairing == Pairing::n_minus_s_plus ? m.combo_int_minus : m.combo_int_plus;
}

const RemainderHist& rem_combo(const ModularJoint& m, Pairing pairing) {
  return pairing == Pairing::n_minus_s_plus ? m.combo_rem_plus : m.combo_rem_minus;
}

WitnessResult make_result(Criterion criterion, Pairing pairing, double lhs, double threshold,
                          std::map<std::string, double> components) {
  WitnessResult r;
  r.criterion = criterion;
  r.pairing = pairing;
  r.lhs = lhs;
  r.threshold = threshold;
  r.violation = lhs - threshold;
  r.components = std::move(components);
  return r;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

}  // namespace

double inferred_variance(const Eigen::ArrayXXd& joint, const Eigen::ArrayXd& centers_a) {
  if (joint.rows() != centers_a.size())
    throw std::invalid_argument("inferred_variance: centers do not match joint rows");
  double acc = 0.0;
  for (Eigen::Index b = 0; b < joint.cols(); ++b) {
    const double pb = joint.col(b).sum();
    if (pb <= 0.0) continue;  // zero-probability outcomes carry no weight
    const double mean = (joint.col(b) * centers_a).sum() / pb;
    acc += (joint.col(b) * (centers_a - mean).square()).sum();
  }
  return acc;
}

double inferred_variance_with_estimator(const Eigen::ArrayXXd& joint,
                                        const Eigen::ArrayXd& centers_a,
                                        const Eigen::ArrayXd& estimate_b) {
  if (joint.rows() != centers_a.size() || joint.cols() != estimate_b.size())
    throw std::invalid_argument("inferred_variance_with_estimator: shape mismatch");
  double acc = 0.0;
  for (Eigen::Index b = 0; b < joint.cols(); ++b)
    acc += (joint.col(b) * (centers_a - estimate_b(b)).square()).sum();
  return acc;
}

WitnessResult variance_entanglement(const ModularJoint& near, const ModularJoint& far, double ell,
                                    double c_value, Pairing pairing) {
  check_inputs(near, far, ell);
  const IntegerHist& n_hist = int_combo(near, pairing);
  const RemainderHist& s_hist = rem_combo(far, pairing);
  const double var_n = weighted_variance(n_hist.probs, n_hist.values());
  const double var_s_scaled = ell * ell * weighted_variance(s_hist.probs, s_hist.centers());
  return make_result(Criterion::var_ent, pairing, var_n + var_s_scaled, 2.0 * c_value,
                     {{"var_N", var_n}, {"ell2_var_S", var_s_scaled}, {"c_value", c_value}});
}

WitnessResult entropic_entanglement(const ModularJoint& near, const ModularJoint& far, double ell,
                                    Pairing pairing) {
  check_inputs(near, far, ell);
  const double h_n = shannon_discrete(int_combo(near, pairing).probs);
  const double h_s = differential_from_histogram(rem_combo(far, pairing).probs,
                                                 far.remainder_bin_width());
  return make_result(Criterion::ent_ent, pairing, h_n + h_s, std::log(std::sqrt(2.0) / ell),
                     {{"H_N", h_n}, {"h_S", h_s}});
}

WitnessResult variance_steering(const ModularJoint& near, const ModularJoint& far, double ell,
                                double c_value, SteeringDirection direction) {
  check_inputs(near, far, ell);
  const bool swap = direction == SteeringDirection::infer_second_from_first;
  Eigen::ArrayXXd n_joint = near.integer_joint.probs;
  Eigen::ArrayXXd s_joint = far.remainder_joint;
  if (swap) {
    n_joint = n_joint.transpose().eval();
    s_joint = s_joint.transpose().eval();
  }
  const Eigen::ArrayXd n_vals = swap ? near.integer_joint.values2() : near.integer_joint.values1();

  const double inf_n = inferred_variance(n_joint, n_vals);
  const double inf_s_scaled = ell * ell * inferred_variance(s_joint, far.remainder_centers());
  return make_result(Criterion::var_steer, Pairing::n_minus_s_plus, inf_n + inf_s_scaled, c_value,
                     {{"inferred_var_n", inf_n},
                      {"ell2_inferred_var_s", inf_s_scaled},
                      {"c_value", c_value}});
}

WitnessResult entropic_steering(const ModularJoint& near, const ModularJoint& far, double ell,
                                SteeringDirection direction) {
  check_inputs(near, far, ell);
  const bool swap = direction == SteeringDirection::infer_second_from_first;
  const double h_n = swap ? conditional_discrete(near.integer_joint.probs.transpose().eval())
                          : conditional_discrete(near.integer_joint.probs);
  const double w = far.remainder_bin_width();
  const double h_s = swap ? conditional_differential(far.remainder_joint.transpose().eval(), w, w)
                          : conditional_differential(far.remainder_joint, w, w);
  return make_result(Criterion::ent_steer, Pairing::n_minus_s_plus, h_n + h_s, -std::log(ell),
                     {{"H_n_cond", h_n}, {"h_s_cond", h_s}});
}

WitnessResult coarse_grained_entropic(const ModularJoint& near, const ModularJoint& far, double ell,
                                      double slit_separation, double delta_s, Pairing pairing) {
  check_inputs(near, far, ell);
  if (!(slit_separation > 0.0))
    throw std::invalid_argument("coarse_grained_entropic: separation must be positive");
  if (!(delta_s > 0.0))
    throw std::invalid_argument("coarse_grained_entropic: delta_s must be positive");
  // precision finer than the integer spacing is not a valid coarse graining;
  // sub-unit ell/separation is capped at one unit
  const double delta_n = std::max(ell / slit_separation, 1.0);
  const double h_n = shannon_discrete(int_combo(near, pairing).probs);
  const double h_s = shannon_discrete(rem_combo(far, pairing).probs);
  const double threshold = std::log(std::sqrt(2.0) / (delta_n * delta_s * ell));
  return make_result(Criterion::coarse_grained, pairing, h_n + h_s, threshold,
                     {{"H_N", h_n},
                      {"H_S", h_s},
                      {"delta_N", delta_n},
                      {"delta_S", delta_s}});
}

ScanCurve scan_ell(const JointDistribution& near, const JointDistribution& far,
                   double slit_separation, const std::vector<double>& ratios,
                   int bins_per_period) {
  if (ratios.empty()) throw std::invalid_argument("scan_ell: empty ratio list");
  if (!(slit_separation > 0.0))
    throw std::invalid_argument("scan_ell: separation must be positive");

  ScanCurve curve;
  curve.ratios = ratios;
  curve.violations.reserve(ratios.size());
  for (const double ratio : ratios) {
    if (!(ratio > 0.0)) throw std::invalid_argument("scan_ell: ratios must be positive");
    const ModularConfig cfg{ratio * slit_separation, bins_per_period};
    const ModularJoint near_mod = fold_joint(near, cfg);
    const ModularJoint far_mod = fold_joint(far, cfg);
    const WitnessResult r = coarse_grained_entropic(near_mod, far_mod, cfg.ell, slit_separation,
                                                    far_mod.remainder_bin_width());
    curve.violations.push_back(r.violation);
  }
  const auto it = std::min_element(curve.violations.begin(), curve.violations.end());
  curve.argmin_ratio = curve.ratios[std::size_t(it - curve.violations.begin())];
  return curve;
}

WitnessResult evaluate_criterion(const ModularJoint& near, const ModularJoint& far,
                                 const WitnessSettings& s) {
  switch (s.criterion) {
    case Criterion::var_ent:
      return variance_entanglement(near, far, s.ell, s.c_value, s.pairing);
    case Criterion::ent_ent:
      return entropic_entanglement(near, far, s.ell, s.pairing);
    case Criterion::var_steer:
      return variance_steering(near, far, s.ell, s.c_value, s.direction);
    case Criterion::ent_steer:
      return entropic_steering(near, far, s.ell, s.direction);
    case Criterion::coarse_grained:
      return coarse_grained_entropic(near, far, s.ell, s.coarse_separation,
                                     far.remainder_bin_width(), s.pairing);
  }
  throw std::invalid_argument("evaluate_criterion: unknown criterion");
}

ResampleStats poisson_uncertainty(const CountsMap& near, const CountsMap& far,
                                  const WitnessSettings& settings, int trials,
                                  std::uint64_t seed) {
  if (trials < 2) throw std::invalid_argument("poisson_uncertainty: need at least 2 trials");
  near.validate();
  far.validate();

  const ModularConfig cfg{settings.ell, settings.bins_per_period};
  std::vector<double> values;
  values.reserve(std::size_t(trials));

  for (int t = 0; t < trials; ++t) {
    CountsMap near_t = near;
    CountsMap far_t = far;
    // independent, splittable stream per trial; substream index breaks the
    // (astronomically unlikely) all-zero redraw
    for (std::uint64_t sub = 0;; ++sub) {
      std::mt19937_64 rng(splitmix64(seed ^ splitmix64(std::uint64_t(t) * 0x10001ull + sub)));
      const auto redraw = [&rng](CountsMap& m) {
        for (Eigen::Index i = 0; i < m.counts.rows(); ++i)
          for (Eigen::Index k = 0; k < m.counts.cols(); ++k) {
            const std::int64_t c = m.counts(i, k);
            if (c == 0) continue;
            std::poisson_distribution<std::int64_t> law{double(c)};
            m.counts(i, k) = law(rng);
          }
      };
      redraw(near_t);
      redraw(far_t);
      if (near_t.total() > 0 && far_t.total() > 0) break;
      near_t = near;
      far_t = far;
    }
    const ModularJoint near_mod = fold_joint(normalize_counts(near_t), cfg);
    const ModularJoint far_mod = fold_joint(normalize_counts(far_t), cfg);
    values.push_back(evaluate_criterion(near_mod, far_mod, settings).violation);
  }

  ResampleStats stats;
  for (const double v : values) stats.mean += v;
  stats.mean /= double(trials);
  double ss = 0.0;
  for (const double v : values) ss += (v - stats.mean) * (v - stats.mean);
  stats.sd = std::sqrt(ss / double(trials - 1));
  return stats;
}

std::string criterion_name(Criterion c) {
  switch (c) {
    case Criterion::var_ent: return "var_ent";
    case Criterion::ent_ent: return "ent_ent";
    case Criterion::var_steer: return "var_steer";
    case Criterion::ent_steer: return "ent_steer";
    case Criterion::coarse_grained: return "coarse_grained";
  }
  return "unknown";
}

std::string pairing_name(Pairing p) {
  return p == Pairing::n_minus_s_plus ? "N-S+" : "N+S-";
}

}  // namespace modvar
