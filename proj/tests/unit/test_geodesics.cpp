#include <gtest/gtest.h>

#include <cmath>

#include "generators.hpp"
#include "probdist/errors.hpp"
#include "probdist/geodesics.hpp"
#include "probdist/kernels.hpp"
#include "probdist/landscapes.hpp"
#include "probdist/transport.hpp"

namespace pd = probdist;

namespace {

const pd::GroundMetric kEuclid = pd::GroundMetric::euclidean();
const std::vector<double> kGrid = pd::uniform_grid(11);

std::vector<pd::GrainSchedule> alternating(std::size_t n) {
  std::vector<pd::GrainSchedule> s;
  for (std::size_t e = 0; e < n; ++e) {
    s.push_back(e % 3 == 0 ? pd::GrainSchedule::displace() : e % 3 == 1 ? pd::GrainSchedule::mixture() : pd::GrainSchedule::smear(4));
  }
  return s;
}

}  // namespace

TEST(Mixture, EndpointsAndMidpoint) {
  pd::RngStream rng(1, 0);
  const auto p0 = pd::testing::random_measure(2, 4, rng);
  const auto p1 = pd::testing::random_measure(2, 3, rng);
  EXPECT_TRUE(pd::same_measure(pd::mixture_at(p0, p1, 0.0), p0));
  EXPECT_TRUE(pd::same_measure(pd::mixture_at(p0, p1, 1.0), p1));
  const auto x = pd::DiscreteMeasure::dirac(Eigen::Vector2d(0, 0));
  const auto y = pd::DiscreteMeasure::dirac(Eigen::Vector2d(1, 0));
  EXPECT_TRUE(pd::same_measure(pd::mixture_at(x, y, 0.5), pd::make_discrete({{0, 0}, {1, 0}}, {0.5, 0.5})));
  EXPECT_THROW(pd::mixture_at(p0, p1, 1.5), pd::DomainError);
  EXPECT_THROW(pd::mixture_at(p0, p1, -0.1), pd::DomainError);
  const auto line = pd::make_discrete({{0.0}}, {1.0});
  EXPECT_THROW(pd::mixture_at(p0, line, 0.5), pd::DimensionMismatch);
}

TEST(Mixture, ConstantSpeedUnderW1AndEnergy) {
  pd::RngStream rng(2, 0);
  for (int trial = 0; trial < 20; ++trial) {
    const auto curve = pd::mixture_curve(pd::testing::random_measure(2, 5, rng), pd::testing::random_measure(2, 4, rng));
    EXPECT_FALSE(curve.support_plan().has_value());
    EXPECT_LE(pd::constant_speed_check(curve, pd::Distance::w1(), kGrid).max_violation, 1e-9);
    EXPECT_LE(pd::constant_speed_check(curve, pd::Distance::energy(), kGrid).max_violation, 1e-9);
  }
}

TEST(Mixture, SeparatedDiracsViolateW2ByPredictedAmount) {
  const double d = 3.0;
  const auto curve = pd::mixture_curve(pd::DiscreteMeasure::dirac(Eigen::Vector2d(0, 0)),
                                       pd::DiscreteMeasure::dirac(Eigen::Vector2d(d, 0)));
  const auto w2 = pd::Distance::wasserstein(kEuclid, 2.0);
  for (double t : {0.1, 0.25, 0.5, 0.9}) {
    const auto report = pd::constant_speed_check(curve, w2, {0.0, t});
    EXPECT_NEAR(report.max_violation, std::abs(std::sqrt(t) - t) * d, 1e-9);
  }
}

TEST(Displacement, DiracsMoveAlongSegment) {
  const Eigen::Vector2d x(1, 2), y(-3, 0);
  const auto curve = pd::displacement_curve(pd::DiscreteMeasure::dirac(x), pd::DiscreteMeasure::dirac(y), kEuclid, 2.0);
  for (double t : {0.0, 0.3, 1.0}) {
    const auto m = curve.eval(t);
    ASSERT_EQ(m.size(), 1);
    EXPECT_TRUE(m.atom(0).isApprox((1 - t) * x + t * y));
  }
}

TEST(Displacement, EndpointsAndConstantSpeed) {
  pd::RngStream rng(3, 0);
  for (int trial = 0; trial < 20; ++trial) {
    const auto p0 = pd::testing::random_measure(2, 4, rng);
    const auto p1 = pd::testing::random_measure(2, 4, rng);
    for (double p : {1.0, 2.0}) {
      const auto curve = pd::displacement_curve(p0, p1, kEuclid, p);
      EXPECT_TRUE(pd::same_measure(curve.eval(0.0), p0, 1e-12));
      EXPECT_TRUE(pd::same_measure(curve.eval(1.0), p1, 1e-12));
      const auto dist = pd::Distance::wasserstein(kEuclid, p);
      EXPECT_LE(pd::constant_speed_check(curve, dist, kGrid).max_violation, 1e-9);
      EXPECT_LE(pd::constant_speed_check(curve, dist, {0.25, 0.75}).max_violation, 1e-9);
    }
  }
  EXPECT_THROW(pd::displacement_curve(pd::testing::random_measure(2, 3, rng), pd::testing::random_measure(2, 3, rng),
                                      pd::GroundMetric::l1(), 1.0),
               pd::DomainError);
}

TEST(Displacement, EnergyMidpointIsNotGeodesic) {
  pd::RngStream rng(4, 0);
  for (int trial = 0; trial < 20; ++trial) {
    const auto curve = pd::displacement_curve(pd::testing::random_measure(2, 4, rng),
                                              pd::testing::random_measure(2, 4, rng), kEuclid, 2.0);
    EXPECT_GT(pd::constant_speed_check(curve, pd::Distance::energy(), {0.0, 0.5, 1.0}).max_violation, 1e-6);
  }
  const auto diracs = pd::displacement_curve(pd::DiscreteMeasure::dirac(Eigen::Vector2d(0, 0)),
                                             pd::DiscreteMeasure::dirac(Eigen::Vector2d(2, 1)), kEuclid, 2.0);
  EXPECT_GT(pd::constant_speed_check(diracs, pd::Distance::energy(), {0.0, 0.5, 1.0}).max_violation, 1e-6);
}

TEST(Displacement, SegmentMidpointIsShorterSegment) {
  const pd::SegmentFamily family{32};
  const double l = 0.7;
  const auto p0 = pd::family_eval(family, {l, 10.0 * M_PI / 180.0});
  const auto p1 = pd::family_eval(family, {l, 60.0 * M_PI / 180.0});
  const auto mid = pd::displacement_curve(p0, p1, kEuclid, 2.0).eval(0.5);
  ASSERT_EQ(mid.size(), 32);
  double max_norm = 0.0;
  for (Eigen::Index i = 0; i < mid.size(); ++i) {
    max_norm = std::max(max_norm, mid.atom(i).norm());
    const Eigen::Vector2d a = mid.atom(i);
    EXPECT_NEAR(a(0) * std::sin(35.0 * M_PI / 180.0) - a(1) * std::cos(35.0 * M_PI / 180.0), 0.0, 1e-12);
  }
  const double outer = l * (1.0 - 1.0 / 32.0);
  EXPECT_NEAR(max_norm, outer * std::cos(25.0 * M_PI / 180.0), 1e-12);
}

TEST(Hybrid, DegenerateSchedulesMatchPureCurves) {
  pd::RngStream rng(5, 0);
  for (int trial = 0; trial < 10; ++trial) {
    const auto p0 = pd::testing::random_measure(2, 5, rng);
    const auto p1 = pd::testing::random_measure(2, 4, rng);
    const auto plan = pd::solve_exact_ot(p0, p1, kEuclid, 1.0).plan;
    const auto disp = pd::hybrid_curve(plan, {pd::GrainSchedule::displace()});
    const auto mix = pd::hybrid_curve(plan, {pd::GrainSchedule::mixture()});
    const auto reference = pd::displacement_curve(p0, p1, kEuclid, 1.0);
    for (double t : kGrid) {
      EXPECT_TRUE(pd::same_measure(disp.eval(t), reference.eval(t), 1e-12));
      EXPECT_TRUE(pd::same_measure(mix.eval(t), pd::mixture_at(p0, p1, t), 1e-12));
    }
  }
}

TEST(Hybrid, MixedSchedulesAreW1Geodesics) {
  pd::RngStream rng(6, 0);
  for (int trial = 0; trial < 20; ++trial) {
    const auto p0 = pd::testing::random_measure(2, 5, rng);
    const auto p1 = pd::testing::random_measure(2, 5, rng);
    const auto plan = pd::solve_exact_ot(p0, p1, kEuclid, 1.0).plan;
    const auto curve = pd::hybrid_curve(plan, alternating(pd::plan_entries(plan).size()));
    const double total = pd::wasserstein(p0, p1, kEuclid, 1.0);
    for (double t : kGrid) {
      EXPECT_NEAR(pd::wasserstein(p0, curve.eval(t), kEuclid, 1.0), t * total, 1e-9);
    }
    EXPECT_LE(pd::constant_speed_check(curve, pd::Distance::w1(), kGrid).max_violation, 1e-9);
    for (double a : {0.0, 0.2}) {
      for (double b : {0.7, 1.0}) {
        const double t = a + 0.3 * (b - a), tp = a + 0.6 * (b - a);
        const auto pa = curve.eval(a), pt = curve.eval(t), ptp = curve.eval(tp), pb = curve.eval(b);
        const double chain = pd::wasserstein(pa, pt, kEuclid, 1.0) + pd::wasserstein(pt, ptp, kEuclid, 1.0) +
                             pd::wasserstein(ptp, pb, kEuclid, 1.0);
        EXPECT_NEAR(chain, pd::wasserstein(pa, pb, kEuclid, 1.0), 1e-9);
        EXPECT_LE(pd::w1_alignment_check(pa, pt, ptp, pb, kEuclid).max_defect, 1e-9);
      }
    }
  }
}

TEST(Hybrid, SmearPositionsStayOnSegment) {
  const auto x = pd::DiscreteMeasure::dirac(Eigen::Vector2d(0, 0));
  const auto y = pd::DiscreteMeasure::dirac(Eigen::Vector2d(4, 0));
  const auto curve = pd::hybrid_curve(x, y, kEuclid, {pd::GrainSchedule::smear(5)});
  const auto mid = curve.eval(0.5);
  EXPECT_EQ(mid.size(), 5);
  EXPECT_NEAR(mid.mean()(0), 2.0, 1e-12);
  EXPECT_EQ(mid.atom(0)(0), 0.0);
  EXPECT_EQ(mid.atom(4)(0), 4.0);
  const auto early = curve.eval(0.25);
  EXPECT_NEAR(early.atoms().row(0).maxCoeff(), 2.0, 1e-12);
  EXPECT_NEAR(early.mean()(0), 1.0, 1e-12);
}

TEST(Hybrid, ScheduleErrors) {
  pd::RngStream rng(7, 0);
  const auto p0 = pd::testing::random_measure(2, 3, rng);
  const auto p1 = pd::testing::random_measure(2, 3, rng);
  const auto plan = pd::solve_exact_ot(p0, p1, kEuclid, 1.0).plan;
  EXPECT_THROW(pd::hybrid_curve(plan, {}), pd::DomainError);
  EXPECT_THROW(pd::hybrid_curve(plan, std::vector<pd::GrainSchedule>(plan_entries(plan).size() + 1)), pd::DomainError);
  EXPECT_THROW(pd::hybrid_curve(plan, {pd::GrainSchedule::smear(0)}), pd::DomainError);
}

TEST(Gluing, IdentityGlue) {
  pd::RngStream rng(8, 0);
  const auto p1 = pd::testing::random_measure(2, 4, rng);
  const auto p2 = pd::testing::random_measure(2, 5, rng);
  const auto plan12 = pd::solve_exact_ot(p1, p2, kEuclid, 1.0).plan;
  const auto plan22 = pd::solve_exact_ot(p2, p2, kEuclid, 1.0).plan;
  const auto triple = pd::glue_plans(plan12, plan22);
  EXPECT_EQ(triple.arity(), 3);
  for (std::size_t e = 0; e < triple.size(); ++e) {
    EXPECT_EQ(triple.index(e, 1), triple.index(e, 2));
    EXPECT_NEAR(triple.mass(e), plan12.coupling(triple.index(e, 0), triple.index(e, 1)), 1e-12);
  }
}

TEST(Gluing, MarginalsReproduceInputs) {
  pd::RngStream rng(9, 0);
  for (int trial = 0; trial < 30; ++trial) {
    const auto a = pd::testing::random_measure(2, 5, rng);
    const auto b = pd::testing::random_measure(2, 4, rng);
    const auto c = pd::testing::random_measure(2, 6, rng);
    const auto d = pd::testing::random_measure(2, 3, rng);
    const auto ab = pd::solve_exact_ot(a, b, kEuclid, 1.0).plan;
    const auto bc = pd::solve_exact_ot(b, c, kEuclid, 2.0).plan;
    const auto cd = pd::solve_exact_ot(c, d, kEuclid, 1.0).plan;
    const auto triple = pd::glue_plans(ab, bc);
    EXPECT_LE((triple.pair_marginal(0, 1) - ab.coupling).cwiseAbs().maxCoeff(), 1e-9);
    EXPECT_LE((triple.pair_marginal(1, 2) - bc.coupling).cwiseAbs().maxCoeff(), 1e-9);
    const auto quad = pd::glue_plans(triple, cd);
    EXPECT_EQ(quad.arity(), 4);
    EXPECT_LE((quad.pair_marginal(2, 3) - cd.coupling).cwiseAbs().maxCoeff(), 1e-9);
    EXPECT_LE((quad.pair_marginal(0, 1) - ab.coupling).cwiseAbs().maxCoeff(), 1e-9);
  }
}

TEST(Gluing, MiddleMismatchRejected) {
  pd::RngStream rng(10, 0);
  const auto a = pd::testing::random_measure(2, 3, rng);
  const auto b = pd::testing::random_measure(2, 3, rng);
  const auto c = pd::testing::random_measure(2, 3, rng);
  EXPECT_THROW(pd::glue_plans(pd::solve_exact_ot(a, b, kEuclid, 1.0).plan, pd::solve_exact_ot(c, a, kEuclid, 1.0).plan),
               pd::DomainError);
}

TEST(Gluing, MixtureMidpointKeepsTotalCost) {
  pd::RngStream rng(11, 0);
  for (int trial = 0; trial < 20; ++trial) {
    const auto p0 = pd::testing::random_measure(2, 4, rng);
    const auto p1 = pd::testing::random_measure(2, 4, rng);
    const auto mid = pd::mixture_at(p0, p1, 0.5);
    const auto triple = pd::glue_plans(pd::solve_exact_ot(p0, mid, kEuclid, 1.0).plan,
                                       pd::solve_exact_ot(mid, p1, kEuclid, 1.0).plan);
    double cost = 0.0;
    for (std::size_t e = 0; e < triple.size(); ++e) {
      cost += triple.mass(e) * kEuclid(p0.atom(triple.index(e, 0)), p1.atom(triple.index(e, 2)));
    }
    EXPECT_NEAR(cost, pd::wasserstein(p0, p1, kEuclid, 1.0), 1e-9);
  }
}

TEST(Alignment, GeodesicsPassAndRotationFails) {
  pd::RngStream rng(12, 0);
  for (int trial = 0; trial < 10; ++trial) {
    const auto p0 = pd::testing::random_measure(2, 4, rng);
    const auto p1 = pd::testing::random_measure(2, 4, rng);
    const auto disp = pd::displacement_curve(p0, p1, kEuclid, 1.0);
    EXPECT_LE(pd::w1_alignment_check(p0, disp.eval(0.3), disp.eval(0.6), p1, kEuclid).max_defect, 1e-9);
    EXPECT_LE(pd::w1_alignment_check(p0, pd::mixture_at(p0, p1, 0.3), pd::mixture_at(p0, p1, 0.6), p1, kEuclid).max_defect,
              1e-9);
  }
  const auto x = pd::DiscreteMeasure::dirac(Eigen::Vector2d(0, 0));
  const auto z = pd::DiscreteMeasure::dirac(Eigen::Vector2d(2, 0));
  const auto off1 = pd::DiscreteMeasure::dirac(Eigen::Vector2d(0.6, 0.8));
  const auto off2 = pd::DiscreteMeasure::dirac(Eigen::Vector2d(1.4, 0.8));
  const auto rep = pd::w1_alignment_check(x, off1, off2, z, kEuclid);
  EXPECT_GT(rep.max_defect, 0.1);
  EXPECT_NEAR(rep.mean_defect, rep.max_defect, 1e-12);
  EXPECT_THROW(pd::w1_alignment_check(x, off1, off2, z, pd::GroundMetric::euclidean_power(2.0)), pd::DomainError);
}

TEST(ConstantSpeed, ReportsEveryPair) {
  const auto curve = pd::mixture_curve(pd::DiscreteMeasure::dirac(Eigen::Vector2d(0, 0)),
                                       pd::DiscreteMeasure::dirac(Eigen::Vector2d(1, 0)));
  const auto rep = pd::constant_speed_check(curve, pd::Distance::w1(), pd::uniform_grid(5));
  EXPECT_EQ(rep.rows.size(), 10u);
  EXPECT_NEAR(rep.endpoint_distance, 1.0, 1e-15);
  EXPECT_THROW(pd::uniform_grid(1), pd::DomainError);
  EXPECT_THROW(pd::constant_speed_check(curve, pd::Distance::w1(), {0.0, 1.2}), pd::DomainError);
}
