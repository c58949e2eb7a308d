#include <gtest/gtest.h>

#include <cmath>

#include "generators.hpp"
#include "probdist/errors.hpp"
#include "probdist/measures.hpp"

namespace pd = probdist;
using pd::testing::random_points;

TEST(MakeDiscrete, SingleAtomIsDirac) {
  const auto m = pd::make_discrete({{0.0, 0.0}}, {1.0});
  EXPECT_EQ(m.size(), 1);
  EXPECT_EQ(m.dim(), 2);
  EXPECT_TRUE(m.is_dirac());
  EXPECT_EQ(m.weight(0), 1.0);
}

TEST(MakeDiscrete, TwoAtomTarget) {
  const auto m = pd::make_discrete({{2.0, 2.0}, {-2.0, -2.0}}, {0.5, 0.5});
  EXPECT_TRUE(pd::same_measure(m, pd::standard_measure(pd::TwoAtom{Eigen::Vector2d(2.0, 2.0)})));
}

TEST(MakeDiscrete, RejectsBadWeights) {
  EXPECT_THROW(pd::make_discrete({{0.0}, {1.0}}, {0.3, 0.8}), pd::DomainError);
  EXPECT_THROW(pd::make_discrete({{0.0}, {1.0}}, {-0.5, 1.5}), pd::DomainError);
  EXPECT_THROW(pd::make_discrete({{0.0}, {1.0}}, {0.0, 0.0}), pd::DomainError);
  EXPECT_THROW(pd::make_discrete({{0.0}, {1.0, 2.0}}, {0.5, 0.5}), pd::DimensionMismatch);
  EXPECT_THROW(pd::make_discrete({{0.0}}, {0.5, 0.5}), pd::DimensionMismatch);
  EXPECT_THROW(pd::make_discrete({}, {}), pd::DomainError);
}

TEST(MakeDiscrete, RenormalizesWithinTolerance) {
  const auto m = pd::make_discrete({{0.0}, {1.0}}, {0.5 + 4e-10, 0.5});
  EXPECT_NEAR(m.weights().sum(), 1.0, 1e-15);
}

TEST(MakeDiscrete, KeepsDuplicatesAndZeros) {
  const auto m = pd::make_discrete({{1.0}, {1.0}, {2.0}}, {0.25, 0.75, 0.0});
  EXPECT_EQ(m.size(), 3);
  const auto merged = m.merged();
  EXPECT_EQ(merged.size(), 2);
  EXPECT_EQ(merged.without_zero_weights().size(), 1);
  EXPECT_TRUE(m.is_dirac());
}

TEST(GroundMetric, Examples) {
  EXPECT_DOUBLE_EQ(pd::ground_distance(pd::GroundMetric::euclidean(), Eigen::Vector2d(0, 0), Eigen::Vector2d(3, 4)), 5.0);
  EXPECT_NEAR(pd::ground_distance(pd::GroundMetric::euclidean_power(1.5), Eigen::VectorXd::Constant(1, 0.0),
                                  Eigen::VectorXd::Constant(1, 2.0)),
              2.8284271247461903, 1e-15);
  EXPECT_DOUBLE_EQ(pd::ground_distance(pd::GroundMetric::l1(), Eigen::Vector2d(1, 2), Eigen::Vector2d(4, -2)), 7.0);
}

TEST(GroundMetric, RejectsDimensionMismatchAndBadBeta) {
  EXPECT_THROW(pd::GroundMetric::euclidean()(Eigen::Vector2d(0, 0), Eigen::Vector3d(0, 0, 0)), pd::DimensionMismatch);
  EXPECT_THROW(pd::GroundMetric::euclidean_power(0.0), pd::DomainError);
  EXPECT_THROW(pd::GroundMetric::euclidean_power(2.5), pd::DomainError);
  EXPECT_NO_THROW(pd::GroundMetric::euclidean_power_unrestricted(3.0));
}

TEST(GroundMetric, AxiomsOnRandomTriples) {
  pd::RngStream rng(11, 0);
  const pd::GroundMetric metrics[] = {pd::GroundMetric::euclidean(), pd::GroundMetric::l1()};
  for (const auto& d : metrics) {
    for (int trial = 0; trial < 1000; ++trial) {
      const auto p = random_points(3, 3, rng, -5.0, 5.0);
      const auto x = p.col(0), y = p.col(1), z = p.col(2);
      EXPECT_EQ(d(x, y), d(y, x));
      EXPECT_EQ(d(x, x), 0.0);
      EXPECT_LE(d(x, z), d(x, y) + d(y, z) + 1e-12);
    }
  }
  const auto k = pd::GroundMetric::euclidean_power(1.5);
  for (int trial = 0; trial < 100; ++trial) {
    const auto p = random_points(2, 2, rng);
    EXPECT_EQ(k(p.col(0), p.col(1)), k(p.col(1), p.col(0)));
    EXPECT_EQ(k(p.col(0), p.col(0)), 0.0);
  }
}

TEST(StandardMeasure, Examples) {
  const auto two = pd::standard_measure(pd::TwoAtom{Eigen::Vector2d(1, 1)});
  EXPECT_TRUE(pd::same_measure(two, pd::make_discrete({{1, 1}, {-1, -1}}, {0.5, 0.5})));

  const auto vert = pd::standard_measure(pd::VerticalSegmentGrid{0.0, 2});
  EXPECT_TRUE(pd::same_measure(vert, pd::make_discrete({{0, 0.25}, {0, 0.75}}, {0.5, 0.5})));

  const auto circle = pd::standard_measure(pd::UniformCircleGrid{4});
  EXPECT_TRUE(pd::same_measure(circle, pd::make_discrete({{1, 0}, {0, 1}, {-1, 0}, {0, -1}}, {0.25, 0.25, 0.25, 0.25})));

  const auto seg = pd::standard_measure(pd::SegmentGrid{Eigen::Vector2d(1, 0), Eigen::Vector2d(0, 1), 0.5, 2});
  EXPECT_TRUE(pd::same_measure(seg, pd::make_discrete({{1, -0.25}, {1, 0.25}}, {0.5, 0.5})));
}

TEST(StandardMeasure, Errors) {
  EXPECT_THROW(pd::standard_measure(pd::UniformCircleGrid{0}), pd::DomainError);
  EXPECT_THROW(pd::standard_measure(pd::SegmentGrid{Eigen::Vector2d(0, 0), Eigen::Vector2d(1, 1), 1.0, 4}),
               pd::DomainError);
}

TEST(StandardMeasure, CircleAtomsOnUnitCircle) {
  const auto c = pd::standard_measure(pd::UniformCircleGrid{360});
  for (Eigen::Index i = 0; i < c.size(); ++i) EXPECT_NEAR(c.atom(i).norm(), 1.0, 1e-15);
  EXPECT_TRUE(c.has_uniform_weights());
}

TEST(Sampling, SphereNormsAndDeterminism) {
  pd::RngStream a(5, 3), b(5, 3);
  const auto m = pd::sample_measure(pd::UniformSphere{3}, 1000, a);
  EXPECT_EQ(m.size(), 1000);
  for (Eigen::Index i = 0; i < m.size(); ++i) EXPECT_NEAR(m.atom(i).norm(), 1.0, 1e-12);
  const auto again = pd::sample_measure(pd::UniformSphere{3}, 1000, b);
  EXPECT_EQ(m.atoms(), again.atoms());

  pd::RngStream c(5, 4);
  EXPECT_NE(pd::sample_measure(pd::UniformSphere{3}, 10, c).atoms(), m.atoms().leftCols(10));
}

TEST(Sampling, OtherSamplersAndErrors) {
  pd::RngStream rng(1, 0);
  const auto circle = pd::sample_measure(pd::UniformCircle{}, 50, rng);
  for (Eigen::Index i = 0; i < circle.size(); ++i) EXPECT_NEAR(circle.atom(i).norm(), 1.0, 1e-12);
  const auto seg = pd::sample_measure(pd::UniformSegment{Eigen::Vector2d(0, 0), Eigen::Vector2d(2, 0)}, 50, rng);
  for (Eigen::Index i = 0; i < seg.size(); ++i) {
    EXPECT_EQ(seg.atom(i)(1), 0.0);
    EXPECT_GE(seg.atom(i)(0), 0.0);
    EXPECT_LE(seg.atom(i)(0), 2.0);
  }
  EXPECT_THROW(pd::sample_measure(pd::UniformSphere{3}, 0, rng), pd::DomainError);
  EXPECT_THROW(pd::sample_measure(pd::UniformSphere{1}, 3, rng), pd::DomainError);
}

TEST(Sampling, EmpiricalFromDiscreteAvoidsZeroWeights) {
  pd::RngStream rng(9, 0);
  const auto q = pd::make_discrete({{0.0}, {1.0}, {2.0}}, {0.5, 0.0, 0.5});
  const auto e = pd::sample_empirical(q, 200, rng);
  for (Eigen::Index i = 0; i < e.size(); ++i) EXPECT_NE(e.atom(i)(0), 1.0);
  EXPECT_NEAR(e.weights().sum(), 1.0, 1e-12);
  for (Eigen::Index i = 0; i < e.size(); ++i) {
    EXPECT_NEAR(e.weight(i) * 200.0, std::round(e.weight(i) * 200.0), 1e-9);
  }
}

TEST(Rng, StreamsAreReproducibleAndDistinct) {
  pd::RngStream a(42, 7), b(42, 7), c(42, 8), d(43, 7);
  for (int k = 0; k < 100; ++k) {
    const double x = a.uniform();
    EXPECT_EQ(x, b.uniform());
    EXPECT_GE(x, 0.0);
    EXPECT_LT(x, 1.0);
  }
  pd::RngStream a2(42, 7);
  EXPECT_NE(a2.uniform(), c.uniform());
  pd::RngStream a3(42, 7);
  EXPECT_NE(a3.uniform(), d.uniform());
  EXPECT_EQ(a.substream(3).uniform(), b.substream(3).uniform());
}

TEST(Measure, MeanAndUniform) {
  const auto m = pd::make_discrete({{0.0, 0.0}, {2.0, 4.0}}, {0.75, 0.25});
  EXPECT_TRUE(m.mean().isApprox(Eigen::Vector2d(0.5, 1.0)));
  EXPECT_FALSE(m.has_uniform_weights());
  EXPECT_TRUE(pd::DiscreteMeasure::dirac(Eigen::Vector2d(1, 2)).is_dirac());
}
