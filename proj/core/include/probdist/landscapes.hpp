#pragma once

#include <Eigen/Dense>

#include <variant>
#include <vector>

#include "probdist/distance.hpp"
#include "probdist/measures.hpp"

namespace probdist {

// theta in [-1, 1]^2 -> 1/2 (delta_theta + delta_{-theta}).
struct TwoAtomFamily {};
// (half_length, angle) in [0, 1] x [0, pi) -> m-point midpoint grid of the
// segment through the origin with that direction and half-length.
struct SegmentFamily {
  int m = 50;
};
using ParametricFamily = std::variant<TwoAtomFamily, SegmentFamily>;

// Throws DomainError for parameters outside the family's domain.
DiscreteMeasure family_eval(const ParametricFamily& family, const Eigen::Vector2d& params);

// W1 with the Euclidean metric, or the squared energy distance ED^2.
enum class LandscapeDistance { kW1, kEnergySq };

double landscape_value(LandscapeDistance kind, const DiscreteMeasure& q, const DiscreteMeasure& p);

// lo, lo + pitch, ..., hi; (hi - lo) must be a whole number of pitches.
std::vector<double> grid_axis(double lo, double hi, double pitch);

struct LandscapeGrid {
  std::vector<double> axis0;
  std::vector<double> axis1;
  // values(i, j) is the distance at (axis0[i], axis1[j]).
  Eigen::MatrixXd values;
  LandscapeDistance kind = LandscapeDistance::kW1;

  Eigen::Vector2d point(Eigen::Index i, Eigen::Index j) const { return {axis0[i], axis1[j]}; }
  // Grid cell holding `point`, matched to 1e-9 of the axis pitch; throws
  // DomainError when the point is not a grid node.
  std::pair<Eigen::Index, Eigen::Index> locate(const Eigen::Vector2d& point) const;
  std::pair<Eigen::Index, Eigen::Index> argmin() const;
};

LandscapeGrid grid_scan(const ParametricFamily& family, const DiscreteMeasure& q, LandscapeDistance kind,
                        const std::vector<double>& axis0, const std::vector<double>& axis1,
                        unsigned threads = 1);

struct LocalMinResult {
  bool is_local_min = false;
  // Smallest value(neighbor) - value(point) over the 8 grid neighbors.
  double margin = 0.0;
};

LocalMinResult local_min_check(const LandscapeGrid& grid, Eigen::Index i, Eigen::Index j);
LocalMinResult local_min_check(const LandscapeGrid& grid, const Eigen::Vector2d& point);
// Every strict local minimum of the grid, in row-major order.
std::vector<std::pair<Eigen::Index, Eigen::Index>> strict_local_minima(const LandscapeGrid& grid);

struct MixtureConvexityReport {
  // max_t D(Q, (1-t) P0 + t P1) - (1-t) D(Q, P0) - t D(Q, P1).
  double max_violation = 0.0;
};

MixtureConvexityReport mixture_convexity_check(const DiscreteMeasure& q, const DiscreteMeasure& p0,
                                               const DiscreteMeasure& p1, const Distance& distance,
                                               const std::vector<double>& t_grid);

struct DisplacementProbeConfig {
  double half_length = 0.7;
  double angle0 = 0.0;  // radians
  double angle1 = 0.0;
  int segment_points = 64;
  int circle_points = 256;
  std::vector<double> t_grid{0.5};
};

struct DisplacementProbeReport {
  double w1_start = 0.0;
  double w1_end = 0.0;
  std::vector<double> w1_interior;  // one per t_grid entry
  // min_t W1(Q, P_t) - max(W1(Q, P0), W1(Q, P1)).
  double interior_excess = 0.0;
  // Worst-case change of interior_excess when every measure is replaced by
  // the continuum it discretizes: half the arc pitch of the circle plus half
  // the atom spacing of each segment, for both terms.
  double discretization_bound = 0.0;
};

// W1 to the uniform circle along the displacement interpolation (quadratic
// cost plan) between two segments through the origin.
DisplacementProbeReport displacement_convexity_probe(const DisplacementProbeConfig& config);

// 2 min_{u0} E_{u ~ Q} d(u, u0), with u0 ranging over the atoms of Q and its
// mean. An upper bound on the expected diameter of Q.
double expected_diameter(const DiscreteMeasure& q, const GroundMetric& metric = GroundMetric::euclidean());

struct AlmostConvexityReport {
  // max_t W1(Q, P_t) - [(1-t) W1(Q, P0) + t W1(Q, P1) + 2 t (1-t) K].
  double max_excess_over_bound = 0.0;
  double k_bound = 0.0;
};

// P_t is the displacement interpolation on a W1-optimal plan between P0 and
// P1 (Euclidean metric) and K is expected_diameter(Q).
AlmostConvexityReport almost_convexity_check(const DiscreteMeasure& q, const DiscreteMeasure& p0,
                                             const DiscreteMeasure& p1, const std::vector<double>& t_grid);

// 4-connected components of {values <= level}.
int level_set_components(const LandscapeGrid& grid, double level);

}  // namespace probdist
