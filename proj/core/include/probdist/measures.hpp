#pragma once

#include <Eigen/Dense>

#include <string>
#include <variant>
#include <vector>

#include "probdist/rng.hpp"

namespace probdist {

using Point = Eigen::VectorXd;
// One atom per column: dim x n.
using PointSet = Eigen::MatrixXd;
using PointRef = Eigen::Ref<const Eigen::VectorXd>;

// Sample-space distance d. EuclideanPower(beta) is ||x - y||^beta; beta = 1 is
// the Euclidean distance. Only Euclidean and L1 are metrics; other powers are
// negative-definite kernels used by the generalized energy distance.
class GroundMetric {
 public:
  enum class Kind { kEuclideanPower, kL1 };

  static GroundMetric euclidean() { return GroundMetric(Kind::kEuclideanPower, 1.0); }
  static GroundMetric l1() { return GroundMetric(Kind::kL1, 1.0); }
  // beta must lie in (0, 2].
  static GroundMetric euclidean_power(double beta);
  // Any beta > 0. Only meant for falsifying negative definiteness.
  static GroundMetric euclidean_power_unrestricted(double beta);

  Kind kind() const { return kind_; }
  double beta() const { return beta_; }

  bool is_euclidean() const { return kind_ == Kind::kEuclideanPower && beta_ == 1.0; }
  bool is_metric() const { return kind_ == Kind::kL1 || is_euclidean(); }
  bool is_negative_definite() const { return kind_ == Kind::kL1 || beta_ <= 2.0; }

  double operator()(PointRef x, PointRef y) const;

  std::string name() const;

  friend bool operator==(const GroundMetric&, const GroundMetric&) = default;

 private:
  GroundMetric(Kind kind, double beta) : kind_(kind), beta_(beta) {}

  Kind kind_;
  double beta_;
};

double ground_distance(const GroundMetric& metric, PointRef x, PointRef y);

// Finitely supported probability measure on R^dim.
//
// Weights are nonnegative and sum to one within 1e-12. Duplicate and
// zero-weight atoms are allowed; use merged() / without_zero_weights() to
// canonicalize.
class DiscreteMeasure {
 public:
  // Validates the input and renormalizes the weights by their exact sum.
  // Accepts weight sums within 1e-9 of one.
  static DiscreteMeasure make(PointSet atoms, Eigen::VectorXd weights);
  static DiscreteMeasure uniform(PointSet atoms);
  static DiscreteMeasure dirac(const Point& x);

  Eigen::Index size() const { return atoms_.cols(); }
  Eigen::Index dim() const { return atoms_.rows(); }

  const PointSet& atoms() const { return atoms_; }
  const Eigen::VectorXd& weights() const { return weights_; }
  auto atom(Eigen::Index i) const { return atoms_.col(i); }
  double weight(Eigen::Index i) const { return weights_(i); }

  // Coincident atoms (exact coordinate equality) collapsed into one, in
  // lexicographic order of coordinates.
  DiscreteMeasure merged() const;
  DiscreteMeasure without_zero_weights() const;
  bool is_dirac() const;
  // All weights equal to 1/size within 1e-12.
  bool has_uniform_weights() const;

  Point mean() const;

 private:
  DiscreteMeasure(PointSet atoms, Eigen::VectorXd weights)
      : atoms_(std::move(atoms)), weights_(std::move(weights)) {}

  PointSet atoms_;
  Eigen::VectorXd weights_;
};

DiscreteMeasure make_discrete(const std::vector<std::vector<double>>& points,
                              const std::vector<double>& weights);

// True when both measures are equal after merging coincident atoms, with
// weights compared to `tol`.
bool same_measure(const DiscreteMeasure& a, const DiscreteMeasure& b, double tol = 1e-12);

// Reference distributions, discretized on equal-weight midpoint grids.
struct UniformCircleGrid {
  int m;
};
struct SegmentGrid {
  Point center;
  Point direction;  // unit vector
  double half_length;
  int m;
};
// Uniform on {(theta, s) : s in [0, 1]}.
struct VerticalSegmentGrid {
  double theta;
  int m;
};
// 1/2 (delta_theta + delta_{-theta}).
struct TwoAtom {
  Point theta;
};
using StandardMeasureSpec =
    std::variant<UniformCircleGrid, SegmentGrid, VerticalSegmentGrid, TwoAtom>;

DiscreteMeasure standard_measure(const StandardMeasureSpec& spec);

struct UniformSphere {
  int dim;
};
struct UniformCircle {};
struct UniformSegment {
  Point a;
  Point b;
};
using SamplerSpec = std::variant<UniformSphere, UniformCircle, UniformSegment>;

Point draw_point(const SamplerSpec& sampler, RngStream& rng);
// Equal-weight empirical measure of n independent draws.
DiscreteMeasure sample_measure(const SamplerSpec& sampler, int n, RngStream& rng);
// Empirical measure of n draws from a discrete measure, supported on the
// drawn atoms of q with weight count / n.
DiscreteMeasure sample_empirical(const DiscreteMeasure& q, int n, RngStream& rng);
// n indices drawn from the weights of q.
std::vector<Eigen::Index> sample_indices(const DiscreteMeasure& q, int n, RngStream& rng);

}  // namespace probdist
