#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

#include "modvar/grid.hpp"

namespace modvar {

/// How an entropy value was obtained. The histogram routines below are
/// plug-in estimators: exact on analytic bin masses, biased by roughly
/// (nonzero bins)/(2N) on maps built from N counts.
enum class EntropyEstimator { exact_analytic, histogram_plugin };

/// An entropy in nats together with its estimator class. All entropies use
/// the natural logarithm.
struct EntropyValue {
  double nats{0.0};
  EntropyEstimator estimator_bias_note{EntropyEstimator::histogram_plugin};

  void validate() const {
    if (!std::isfinite(nats)) throw std::invalid_argument("EntropyValue: non-finite value");
  }
};

namespace detail {

inline double xlnx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

template <typename Derived>
double neg_sum_xlnx(const Eigen::DenseBase<Derived>& p) {
  double acc = 0.0;
  const auto flat = p.derived().reshaped();
  for (Eigen::Index i = 0; i < flat.size(); ++i) acc -= xlnx(flat(i));
  return acc;
}

template <typename Derived>
void check_probabilities(const Eigen::DenseBase<Derived>& p, const char* who) {
  const auto flat = p.derived().reshaped();
  double total = 0.0;
  for (Eigen::Index i = 0; i < flat.size(); ++i) {
    if (flat(i) < 0.0) throw std::invalid_argument(std::string(who) + ": negative probabilities");
    total += flat(i);
  }
  if (std::abs(total - 1.0) > kNormalizationTol)
    throw std::invalid_argument(std::string(who) + ": probabilities must sum to 1");
}

}  // namespace detail

/// Discrete Shannon entropy -sum p ln p in nats; empty cells contribute zero.
template <typename Derived>
double shannon_discrete(const Eigen::DenseBase<Derived>& probs) {
  detail::check_probabilities(probs, "shannon_discrete");
  return detail::neg_sum_xlnx(probs);
}

/// Plug-in differential entropy of a binned continuous variable:
/// -sum P ln(P/width) for bin probabilities P of common bin width.
template <typename Derived>
double differential_from_histogram(const Eigen::DenseBase<Derived>& bins, double width) {
  if (!(width > 0.0)) throw std::invalid_argument("differential_from_histogram: width must be positive");
  detail::check_probabilities(bins, "differential_from_histogram");
  return detail::neg_sum_xlnx(bins) + std::log(width);
}

/// Conditional discrete entropy H(a|b) = H(a,b) - H(b) for joint(i,j) with
/// a on rows and b on columns. Zero-probability b outcomes carry zero weight.
template <typename Derived>
double conditional_discrete(const Eigen::DenseBase<Derived>& joint) {
  detail::check_probabilities(joint, "conditional_discrete");
  const double h_joint = detail::neg_sum_xlnx(joint);
  const double h_b = detail::neg_sum_xlnx(joint.derived().colwise().sum());
  return h_joint - h_b;
}

/// Conditional differential entropy h(a|b) = h(a,b) - h(b) from a binned joint,
/// a on rows (bin width width_a), b on columns (bin width width_b).
template <typename Derived>
double conditional_differential(const Eigen::DenseBase<Derived>& joint, double width_a,
                                double width_b) {
  if (!(width_a > 0.0) || !(width_b > 0.0))
    throw std::invalid_argument("conditional_differential: widths must be positive");
  return conditional_discrete(joint) + std::log(width_a);
}

enum class CombineSign { plus, minus };

/// Distribution of s1 + s2 (or s1 - s2) for independent binned variables, via
/// discrete convolution of the bin masses. For B1- and B2-bin inputs of equal
/// width the output has B1+B2-1 bins of the same width.
inline Density convolve_densities(const Density& p1, const Density& p2, CombineSign sign) {
  p1.validate();
  p2.validate();
  const double w = p1.axis.step;
  if (std::abs(p2.axis.step - w) > 1e-9 * w)
    throw std::invalid_argument("convolve_densities: mismatched widths");

  const Eigen::Index n1 = p1.probs.size(), n2 = p2.probs.size();
  Density out;
  out.axis.kind = p1.axis.kind;
  out.axis.step = w;
  out.axis.count = n1 + n2 - 1;
  out.probs = Eigen::ArrayXd::Zero(n1 + n2 - 1);

  if (sign == CombineSign::plus) {
    out.axis.start = p1.axis.start + p2.axis.start;
    for (Eigen::Index i = 0; i < n1; ++i)
      for (Eigen::Index j = 0; j < n2; ++j) out.probs(i + j) += p1.probs(i) * p2.probs(j);
  } else {
    out.axis.start = p1.axis.start - p2.axis.coord(n2 - 1);
    for (Eigen::Index i = 0; i < n1; ++i)
      for (Eigen::Index j = 0; j < n2; ++j)
        out.probs(i + (n2 - 1 - j)) += p1.probs(i) * p2.probs(j);
  }
  return out;
}

}  // namespace modvar
