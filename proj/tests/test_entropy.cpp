#include <doctest.h>

#include <random>

#include "modvar/entropy.hpp"
#include "oracles.hpp"

using namespace modvar;

namespace {

Eigen::ArrayXd random_dist(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Eigen::ArrayXd p(n);
  for (int i = 0; i < n; ++i) p(i) = unif(rng);
  return p / p.sum();
}

}  // namespace

TEST_CASE("shannon_discrete") {
  CHECK(shannon_discrete(Eigen::ArrayXd::Constant(4, 0.25)) ==
        doctest::Approx(std::log(4.0)).epsilon(1e-12));

  Eigen::ArrayXd point = Eigen::ArrayXd::Zero(5);
  point(2) = 1.0;
  CHECK(shannon_discrete(point) == 0.0);

  Eigen::ArrayXd half(2);
  half << 0.5, 0.5;
  CHECK(shannon_discrete(half) == doctest::Approx(std::log(2.0)).epsilon(1e-12));

  Eigen::ArrayXd negative(2);
  negative << 1.5, -0.5;
  CHECK_THROWS_AS(shannon_discrete(negative), std::invalid_argument);

  Eigen::ArrayXd unnormalized(2);
  unnormalized << 0.5, 0.6;
  CHECK_THROWS_AS(shannon_discrete(unnormalized), std::invalid_argument);
}

TEST_CASE("shannon entropy is concave under mixing") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int t = 0; t < 100; ++t) {
    const Eigen::ArrayXd p = random_dist(rng, 12), q = random_dist(rng, 12);
    const double lambda = unif(rng);
    const double mixed = shannon_discrete((lambda * p + (1.0 - lambda) * q).eval());
    CHECK(mixed >= lambda * shannon_discrete(p) + (1.0 - lambda) * shannon_discrete(q) - 1e-12);
  }
}

TEST_CASE("differential_from_histogram") {
  SUBCASE("uniform over total width w") {
    for (const int bins : {1, 4, 64}) {
      const double width = 0.37;
      const Eigen::ArrayXd p = Eigen::ArrayXd::Constant(bins, 1.0 / bins);
      CHECK(differential_from_histogram(p, width / bins) ==
            doctest::Approx(std::log(width)).epsilon(1e-12));
    }
  }
  SUBCASE("single bin of width delta") {
    Eigen::ArrayXd p(1);
    p << 1.0;
    CHECK(differential_from_histogram(p, 0.01) == doctest::Approx(std::log(0.01)));
  }
  SUBCASE("triangular density on (-1, 1) has entropy 1/2") {
    // exact bin masses of f(v) = 1 - |v|: integrate per bin
    const int bins = 512;
    const double step = 2.0 / bins;
    Eigen::ArrayXd p(bins);
    for (int i = 0; i < bins; ++i) {
      const double a = -1.0 + i * step, b = a + step;
      const auto cdf = [](double v) {  // integral of 1-|v| from -1 to v
        return v < 0.0 ? 0.5 * (1.0 + v) * (1.0 + v) : 0.5 + v - 0.5 * v * v;
      };
      p(i) = cdf(b) - cdf(a);
    }
    p /= p.sum();
    CHECK(differential_from_histogram(p, step) == doctest::Approx(0.5).epsilon(2e-3));
  }
  SUBCASE("invalid width") {
    Eigen::ArrayXd p(1);
    p << 1.0;
    CHECK_THROWS_AS(differential_from_histogram(p, 0.0), std::invalid_argument);
  }
}

TEST_CASE("conditional_discrete") {
  SUBCASE("independent uniform 2x2") {
    CHECK(conditional_discrete(Eigen::ArrayXXd::Constant(2, 2, 0.25)) ==
          doctest::Approx(std::log(2.0)).epsilon(1e-12));
  }
  SUBCASE("perfectly correlated diagonal") {
    Eigen::ArrayXXd j = Eigen::ArrayXXd::Zero(3, 3);
    j(0, 0) = j(1, 1) = j(2, 2) = 1.0 / 3.0;
    CHECK(conditional_discrete(j) == doctest::Approx(0.0).epsilon(1e-12));
  }
  SUBCASE("worked example") {
    // conditioning variable on columns: P(b=0) = 0.75 with H(a|b=0) = H(2/3, 1/3)
    // with the conditioning variable on rows, transpose into our layout
    Eigen::ArrayXXd rows_b(2, 2);
    rows_b << 0.5, 0.0, 0.25, 0.25;
    CHECK(conditional_discrete(rows_b.transpose().eval()) ==
          doctest::Approx(0.5 * std::log(2.0)).epsilon(1e-12));
  }
}

TEST_CASE("conditional_differential") {
  SUBCASE("independent uniform remainders") {
    const double ell = 0.16;
    const int bins = 32;
    const double width = (1.0 / ell) / bins;
    const Eigen::ArrayXXd j = Eigen::ArrayXXd::Constant(bins, bins, 1.0 / (bins * bins));
    CHECK(conditional_differential(j, width, width) ==
          doctest::Approx(std::log(1.0 / ell)).epsilon(1e-12));
  }
  SUBCASE("deterministic s1 = s2 floors at one bin") {
    const int bins = 16;
    const double width = 1.0 / bins;
    Eigen::ArrayXXd j = Eigen::ArrayXXd::Zero(bins, bins);
    for (int i = 0; i < bins; ++i) j(i, i) = 1.0 / bins;
    CHECK(conditional_differential(j, width, width) ==
          doctest::Approx(std::log(width)).epsilon(1e-12));
  }
}

TEST_CASE("convolve_densities") {
  const double ell = 2.0;
  const int bins = 16;
  Axis cell{AxisKind::momentum, 0.0, (1.0 / ell) / bins, bins};
  cell.start = -0.5 / ell + 0.5 * cell.step;

  SUBCASE("uniform * uniform is a symmetric triangle") {
    Density u{cell, Eigen::ArrayXd::Constant(bins, 1.0 / bins)};
    const Density tri = convolve_densities(u, u, CombineSign::plus);
    CHECK(tri.probs.size() == 2 * bins - 1);
    CHECK(tri.probs.sum() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(tri.probs(bins - 1) == doctest::Approx(1.0 / bins).epsilon(1e-12));
    for (int k = 0; k < bins; ++k)
      CHECK(tri.probs(k) == doctest::Approx(tri.probs(2 * bins - 2 - k)).epsilon(1e-12));
    // center of the sum support is at 0
    CHECK(tri.axis.coord(bins - 1) == doctest::Approx(0.0).epsilon(1e-12));
  }

  SUBCASE("point mass is the identity element") {
    std::mt19937_64 rng(5);
    Density f{cell, random_dist(rng, bins)};
    Density delta{cell, Eigen::ArrayXd::Zero(bins)};
    delta.probs(7) = 1.0;
    const Density out = convolve_densities(delta, f, CombineSign::plus);
    for (int i = 0; i < bins; ++i)
      CHECK(out.probs(7 + i) == doctest::Approx(f.probs(i)).epsilon(1e-12));
  }

  SUBCASE("commutativity") {
    std::mt19937_64 rng(6);
    const Density f{cell, random_dist(rng, bins)};
    const Density g{cell, random_dist(rng, bins)};
    const Density fg = convolve_densities(f, g, CombineSign::plus);
    const Density gf = convolve_densities(g, f, CombineSign::plus);
    CHECK((fg.probs - gf.probs).abs().maxCoeff() < 1e-15);
    CHECK(fg.axis.start == doctest::Approx(gf.axis.start));
  }

  SUBCASE("minus flips the second density") {
    std::mt19937_64 rng(8);
    const Density f{cell, random_dist(rng, bins)};
    Density g{cell, random_dist(rng, bins)};
    const Density diff = convolve_densities(f, g, CombineSign::minus);
    Density g_flipped = g;
    g_flipped.probs = g.probs.reverse();
    const Density sum_flipped = convolve_densities(f, g_flipped, CombineSign::plus);
    CHECK((diff.probs - sum_flipped.probs).abs().maxCoeff() < 1e-15);
  }

  SUBCASE("mismatched widths") {
    Density f{cell, Eigen::ArrayXd::Constant(bins, 1.0 / bins)};
    Density g = f;
    g.axis.step *= 2.0;
    CHECK_THROWS_WITH_AS(convolve_densities(f, g, CombineSign::plus),
                         "convolve_densities: mismatched widths", std::invalid_argument);
  }
}

TEST_CASE("discrete sum inequality for independent integers") {
  std::mt19937_64 rng(9);
  for (int t = 0; t < 100; ++t) {
    const Eigen::ArrayXd p1 = random_dist(rng, 7), p2 = random_dist(rng, 5);
    Eigen::ArrayXd sum = Eigen::ArrayXd::Zero(11);
    for (int i = 0; i < 7; ++i)
      for (int j = 0; j < 5; ++j) sum(i + j) += p1(i) * p2(j);
    const double h_sum = shannon_discrete(sum);
    CHECK(h_sum >= shannon_discrete(p1) - 1e-12);
    CHECK(h_sum >= shannon_discrete(p2) - 1e-12);
  }
}

TEST_CASE("entropy power inequality on binned analytic densities") {
  // trigonometric densities with exact bin masses; the entropy power
  // inequality for independent sums should hold with clear margin
  std::mt19937_64 rng(10);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double period = 1.0 / 0.16;
  const int bins = 256;
  const double width = period / bins;
  Axis cell{AxisKind::momentum, -0.5 * period + 0.5 * width, width, bins};

  const auto random_density = [&]() {
    Density d{cell, Eigen::ArrayXd::Zero(bins)};
    const int modes = 1 + int(unif(rng) * 3.0);
    std::vector<double> amp(static_cast<std::size_t>(modes));
    std::vector<double> phase(static_cast<std::size_t>(modes));
    for (int k = 0; k < modes; ++k) {
      amp[std::size_t(k)] = (unif(rng) * 0.6 - 0.3) / double(k + 1);
      phase[std::size_t(k)] = unif(rng) * 2.0 * oracle::kPi;
    }
    for (int i = 0; i < bins; ++i) {
      const double a = -0.5 * period + i * width, b = a + width;
      double mass = width / period;
      for (int k = 0; k < modes; ++k) {
        const double omega = 2.0 * oracle::kPi * double(k + 1) / period;
        mass += amp[std::size_t(k)] / period *
                (std::sin(omega * b + phase[std::size_t(k)]) -
                 std::sin(omega * a + phase[std::size_t(k)])) /
                omega;
      }
      d.probs(i) = mass;
    }
    d.probs /= d.probs.sum();
    return d;
  };

  for (int t = 0; t < 100; ++t) {
    const Density p1 = random_density(), p2 = random_density();
    const double h1 = differential_from_histogram(p1.probs, width);
    const double h2 = differential_from_histogram(p2.probs, width);
    const double bound = 0.5 * std::log(std::exp(2.0 * h1) + std::exp(2.0 * h2));
    for (const auto sign : {CombineSign::plus, CombineSign::minus}) {
      const Density s = convolve_densities(p1, p2, sign);
      CHECK(differential_from_histogram(s.probs, width) >= bound - 1e-6);
    }
  }
}
