#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "generators.hpp"
#include "probdist/errors.hpp"
#include "probdist/kernels.hpp"
#include "probdist/transport.hpp"

namespace pd = probdist;

namespace {

const pd::GroundMetric kEuclid = pd::GroundMetric::euclidean();

// Independent four-atom evaluation: Q = TwoAtom(q), P = TwoAtom(theta).
double two_atom_ed_sq(const Eigen::Vector2d& q, const Eigen::Vector2d& theta) {
  const double cross = 0.5 * ((q - theta).norm() + (q + theta).norm());
  return 2.0 * cross - q.norm() - theta.norm();
}

}  // namespace

TEST(EnergyDistance, EqualMeasuresVanish) {
  pd::RngStream rng(1, 0);
  const auto q = pd::testing::random_measure(3, 7, rng);
  EXPECT_NEAR(pd::energy_distance_sq(q, q, kEuclid), 0.0, 1e-14);
}

TEST(EnergyDistance, DiracsGiveTwiceTheDistance) {
  pd::RngStream rng(2, 0);
  for (int trial = 0; trial < 20; ++trial) {
    const pd::Point x = pd::testing::random_points(3, 1, rng).col(0);
    const pd::Point y = pd::testing::random_points(3, 1, rng).col(0);
    const double ed = pd::energy_distance_sq(pd::DiscreteMeasure::dirac(x), pd::DiscreteMeasure::dirac(y), kEuclid);
    EXPECT_NEAR(ed, 2.0 * (x - y).norm(), 1e-14);
  }
}

TEST(EnergyDistance, TwoAtomClosedForm) {
  const Eigen::Vector2d q(2, 2);
  const auto target = pd::standard_measure(pd::TwoAtom{q});
  const double corner = pd::energy_distance_sq(target, pd::standard_measure(pd::TwoAtom{Eigen::Vector2d(-1, 1)}), kEuclid);
  EXPECT_NEAR(corner, 2.0 * std::sqrt(10.0) - 3.0 * std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(corner, 2.0819146332174734, 1e-12);
  EXPECT_NEAR(pd::energy_distance_sq(target, pd::standard_measure(pd::TwoAtom{Eigen::Vector2d(1, 1)}), kEuclid),
              std::sqrt(2.0), 1e-12);
  pd::RngStream rng(3, 0);
  for (int trial = 0; trial < 50; ++trial) {
    const Eigen::Vector2d theta(rng.uniform(-1, 1), rng.uniform(-1, 1));
    EXPECT_NEAR(pd::energy_distance_sq(target, pd::standard_measure(pd::TwoAtom{theta}), kEuclid),
                two_atom_ed_sq(q, theta), 1e-12);
  }
}

TEST(EnergyDistance, Errors) {
  const auto q = pd::make_discrete({{0.0}}, {1.0});
  const auto p = pd::make_discrete({{0.0, 1.0}}, {1.0});
  EXPECT_THROW(pd::energy_distance_sq(q, p, kEuclid), pd::DimensionMismatch);
  EXPECT_THROW(pd::energy_distance_sq(q, q, pd::GroundMetric::euclidean_power_unrestricted(3.0)), pd::DomainError);
}

TEST(EnergyDistance, PseudodistanceAxioms) {
  pd::RngStream rng(4, 0);
  for (int trial = 0; trial < 200; ++trial) {
    const auto a = pd::testing::random_measure(2, 5, rng);
    const auto b = pd::testing::random_measure(2, 5, rng);
    const auto c = pd::testing::random_measure(2, 5, rng);
    const double ab = std::sqrt(pd::energy_distance_sq(a, b, kEuclid));
    EXPECT_NEAR(pd::energy_distance_sq(a, b, kEuclid), pd::energy_distance_sq(b, a, kEuclid), 1e-12);
    EXPECT_LE(std::sqrt(pd::energy_distance_sq(a, c, kEuclid)),
              ab + std::sqrt(pd::energy_distance_sq(b, c, kEuclid)) + 1e-9);
  }
}

TEST(EnergyDistance, SeparationForStrictBetas) {
  pd::RngStream rng(5, 0);
  for (double beta : {0.5, 1.0, 1.5}) {
    const auto metric = pd::GroundMetric::euclidean_power(beta);
    for (int trial = 0; trial < 200; ++trial) {
      const auto a = pd::testing::random_measure(2, 4, rng);
      const auto b = pd::testing::random_measure(2, 4, rng);
      EXPECT_GT(pd::energy_distance_sq(a, b, metric), 1e-9);
    }
  }
}

TEST(EnergyDistance, BetaTwoOnlySeesMeans) {
  const auto a = pd::make_discrete({{-1.0}, {1.0}}, {0.5, 0.5});
  const auto b = pd::make_discrete({{-3.0}, {3.0}}, {0.5, 0.5});
  EXPECT_LE(std::abs(pd::energy_distance_sq(a, b, pd::GroundMetric::euclidean_power(2.0))), 1e-12);
  EXPECT_GT(pd::energy_distance_sq(a, b, kEuclid), 0.1);
}

TEST(TriangularGap, EntriesAndDiagonal) {
  pd::RngStream rng(6, 0);
  const auto pts = pd::testing::random_points(3, 10, rng);
  const pd::Point x0 = pd::testing::random_points(3, 1, rng).col(0);
  const auto gram = pd::triangular_gap_gram(kEuclid, pts, x0);
  for (Eigen::Index i = 0; i < pts.cols(); ++i) {
    EXPECT_NEAR(gram.entries(i, i), (pts.col(i) - x0).norm(), 1e-15);
    for (Eigen::Index j = 0; j < pts.cols(); ++j) {
      EXPECT_NEAR(gram.entries(i, j), gram.entries(j, i), 1e-12);
      const double expected =
          0.5 * ((pts.col(i) - x0).norm() + (pts.col(j) - x0).norm() - (pts.col(i) - pts.col(j)).norm());
      EXPECT_NEAR(gram.entries(i, j), expected, 1e-14);
    }
  }
  const pd::PointSet same = pd::PointSet::Zero(2, 1);
  EXPECT_EQ(pd::triangular_gap_gram(kEuclid, same, pd::Point::Zero(2)).entries(0, 0), 0.0);
}

TEST(TriangularGap, PositiveSemidefiniteForEuclidean) {
  pd::RngStream rng(7, 0);
  const auto pts = pd::testing::random_points(3, 50, rng);
  const auto gram = pd::triangular_gap_gram(kEuclid, pts, pd::Point::Zero(3));
  EXPECT_GE(gram.min_eigenvalue(), -1e-8);
  EXPECT_TRUE(gram.is_psd());
}

TEST(TriangularGap, NotPsdForBetaThree) {
  pd::PointSet pts(1, 3);
  pts << 0.0, 1.0, 2.0;
  const auto gram = pd::triangular_gap_gram(pd::GroundMetric::euclidean_power_unrestricted(3.0), pts, pd::Point::Zero(1));
  EXPECT_FALSE(gram.is_psd());
}

TEST(NegativeDefinite, ChecksAgreeWithTheory) {
  pd::RngStream rng(8, 0);
  const auto pts = pd::testing::random_points(2, 12, rng);
  EXPECT_LE(pd::check_negative_definite(kEuclid, pts, 2000, rng).max_form_value, 1e-9);
  EXPECT_LE(pd::check_negative_definite(pd::GroundMetric::euclidean_power(2.0), pts, 2000, rng).max_form_value, 1e-9);
  EXPECT_LE(pd::check_negative_definite(pd::GroundMetric::l1(), pts, 2000, rng).max_form_value, 1e-9);

  pd::PointSet line(1, 3);
  line << 0.0, 1.0, 2.0;
  const auto bad = pd::check_negative_definite(pd::GroundMetric::euclidean_power_unrestricted(3.0), line, 2000, rng);
  EXPECT_GT(bad.max_form_value, 0.1);
  EXPECT_NEAR(bad.worst_coefficients.sum(), 0.0, 1e-12);
  EXPECT_THROW(pd::check_negative_definite(kEuclid, pd::PointSet::Zero(2, 1), 10, rng), pd::DomainError);
}

TEST(Mmd, TriangularGapKernelReproducesEnergyDistance) {
  pd::RngStream rng(9, 0);
  for (int trial = 0; trial < 100; ++trial) {
    const auto q = pd::testing::random_measure(2, 5, rng);
    const auto p = pd::testing::random_measure(2, 4, rng);
    const pd::Point x0 = pd::testing::random_points(2, 1, rng).col(0);
    const double ed = pd::energy_distance_sq(q, p, kEuclid);
    EXPECT_NEAR(pd::mmd_sq_via_gram(q, p, pd::triangular_gap_kernel(kEuclid, x0)), 0.5 * ed, 1e-9);
    EXPECT_NEAR(pd::mmd_sq_via_gram(q, p, pd::triangular_gap_kernel(kEuclid, pd::Point::Zero(2))), 0.5 * ed, 1e-9);
  }
}

TEST(Mmd, InducedDistanceIdentity) {
  pd::RngStream rng(10, 0);
  const auto k = pd::gaussian_kernel(0.7);
  for (int trial = 0; trial < 100; ++trial) {
    const auto q = pd::testing::random_measure(2, 5, rng);
    const auto p = pd::testing::random_measure(2, 6, rng);
    EXPECT_NEAR(pd::mmd_sq_via_gram(q, p, k), 0.5 * pd::energy_distance_sq(q, p, pd::induced_distance(k)), 1e-9);
  }
  const auto q = pd::testing::random_measure(2, 5, rng);
  EXPECT_NEAR(pd::mmd_sq_via_gram(q, q, k), 0.0, 1e-12);
  EXPECT_THROW(pd::gaussian_kernel(0.0), pd::DomainError);
}

TEST(EdBias, Examples) {
  EXPECT_EQ(pd::ed_bias_exact(pd::DiscreteMeasure::dirac(Eigen::Vector2d(1, 1)), kEuclid), 0.0);
  const auto coin = pd::make_discrete({{0.0}, {1.0}}, {0.5, 0.5});
  EXPECT_DOUBLE_EQ(pd::ed_bias_exact(coin, kEuclid), 0.5);
  double mean = 0.0;
  for (double a : {0.0, 1.0}) {
    for (double b : {0.0, 1.0}) {
      const auto sample = pd::make_discrete({{a}, {b}}, {0.5, 0.5});
      mean += 0.25 * pd::energy_distance_sq(sample, coin, kEuclid);
    }
  }
  EXPECT_NEAR(mean, 0.25, 1e-15);
  const auto circle = pd::standard_measure(pd::UniformCircleGrid{360});
  EXPECT_NEAR(pd::ed_bias_exact(circle, kEuclid), 4.0 / std::numbers::pi, 1e-3);
}

TEST(Gram, SymmetricAndNamed) {
  pd::RngStream rng(11, 0);
  const auto pts = pd::testing::random_points(2, 8, rng);
  const auto g = pd::gram_matrix(pd::gaussian_kernel(1.0), pts, "gauss");
  EXPECT_EQ(g.kernel_name, "gauss");
  EXPECT_LE((g.entries - g.entries.transpose()).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_TRUE(g.is_psd());
}
