#pragma once

#include <optional>
#include <vector>

#include "probdist/distance.hpp"
#include "probdist/measures.hpp"
#include "probdist/transport.hpp"

namespace probdist {

// What happens to one grain of a transport plan (mass m moving from x to y)
// at time t along a hybrid curve.
//   kDisplace: all of m sits at (1 - t) x + t y.
//   kMixture:  (1 - t) m stays at x, t m has arrived at y.
//   kSmear:    m is spread over k equispaced points covering
//              [max(0, 2t - 1), min(1, 2t)] of the segment; each point moves
//              monotonically from x to y and their mean position is t.
// Each rule moves its grain along a W1 geodesic of the segment, so a curve
// built on a W1-optimal plan is a W1 geodesic whatever the mix of rules.
enum class GrainRule { kDisplace, kMixture, kSmear };

struct GrainSchedule {
  GrainRule rule = GrainRule::kDisplace;
  int smear_points = 1;

  static GrainSchedule displace() { return {GrainRule::kDisplace, 1}; }
  static GrainSchedule mixture() { return {GrainRule::kMixture, 1}; }
  static GrainSchedule smear(int k) { return {GrainRule::kSmear, k}; }
};

enum class CurveKind { kMixture, kDisplacement, kHybrid };

// Parametrized family t in [0, 1] -> DiscreteMeasure.
class Curve {
 public:
  CurveKind kind() const { return kind_; }
  const DiscreteMeasure& start() const { return start_; }
  const DiscreteMeasure& end() const { return end_; }
  // Absent for mixture curves.
  const std::optional<TransportPlan>& support_plan() const { return plan_; }

  // Coincident atoms merged, zero-weight atoms dropped.
  DiscreteMeasure eval(double t) const;

  friend Curve mixture_curve(const DiscreteMeasure&, const DiscreteMeasure&);
  friend Curve hybrid_curve(const TransportPlan&, const std::vector<GrainSchedule>&);
  friend Curve displacement_curve(const DiscreteMeasure&, const DiscreteMeasure&,
                                  const GroundMetric&, double);

 private:
  struct Grain {
    Eigen::Index source;
    Eigen::Index target;
    double mass;
    GrainSchedule schedule;
  };

  Curve(CurveKind kind, DiscreteMeasure start, DiscreteMeasure end)
      : kind_(kind), start_(std::move(start)), end_(std::move(end)) {}

  CurveKind kind_;
  DiscreteMeasure start_;
  DiscreteMeasure end_;
  std::optional<TransportPlan> plan_;
  std::vector<Grain> grains_;
};

// (1 - t) P0 + t P1.
DiscreteMeasure mixture_at(const DiscreteMeasure& p0, const DiscreteMeasure& p1, double t);
Curve mixture_curve(const DiscreteMeasure& p0, const DiscreteMeasure& p1);

// Grains of the solver's W_p-optimal plan moving along straight segments.
// Euclidean metric only.
Curve displacement_curve(const DiscreteMeasure& p0, const DiscreteMeasure& p1,
                         const GroundMetric& metric, double p);

// Positive plan entries (source, target) in column-major order; this is the
// order in which hybrid schedules are matched to grains.
std::vector<std::pair<Eigen::Index, Eigen::Index>> plan_entries(const TransportPlan& plan);

// One schedule entry per positive plan entry, or a single entry applied to
// all of them.
Curve hybrid_curve(const TransportPlan& plan, const std::vector<GrainSchedule>& schedule);
// Builds on the W1-optimal plan between the endpoints.
Curve hybrid_curve(const DiscreteMeasure& p0, const DiscreteMeasure& p1, const GroundMetric& metric,
                   const std::vector<GrainSchedule>& schedule);

// Joint coupling of a chain of measures mu_0, ..., mu_{k-1} obtained by gluing
// consecutive plans along their shared marginals.
class GluedCoupling {
 public:
  int arity() const { return arity_; }
  std::size_t size() const { return mass_.size(); }
  Eigen::Index index(std::size_t entry, int slot) const {
    return indices_[entry * static_cast<std::size_t>(arity_) + static_cast<std::size_t>(slot)];
  }
  double mass(std::size_t entry) const { return mass_[entry]; }
  const DiscreteMeasure& marginal_measure(int slot) const { return measures_[static_cast<std::size_t>(slot)]; }

  // Joint law of slots (a, b).
  Eigen::MatrixXd pair_marginal(int a, int b) const;

  friend GluedCoupling glue_plans(const TransportPlan&, const TransportPlan&);
  friend GluedCoupling glue_plans(const GluedCoupling&, const TransportPlan&);

 private:
  int arity_ = 0;
  std::vector<Eigen::Index> indices_;
  std::vector<double> mass_;
  std::vector<DiscreteMeasure> measures_;
};

using TripleCoupling = GluedCoupling;

// mass(i, j, k) = plan12(i, j) plan23(j, k) / mu2(j), with 0/0 = 0. Throws
// DomainError when the middle marginals disagree beyond 1e-9.
GluedCoupling glue_plans(const TransportPlan& plan12, const TransportPlan& plan23);
// Glues `next` onto the last slot of `chain`.
GluedCoupling glue_plans(const GluedCoupling& chain, const TransportPlan& next);

struct ConstantSpeedRow {
  double t;
  double t_prime;
  double violation;
};

struct ConstantSpeedReport {
  double max_violation = 0.0;
  double endpoint_distance = 0.0;
  std::vector<ConstantSpeedRow> rows;
};

// |D(c(t), c(t')) - |t - t'| D(c(0), c(1))| over all grid pairs t < t'.
ConstantSpeedReport constant_speed_check(const Curve& curve, const Distance& distance,
                                         const std::vector<double>& grid);

std::vector<double> uniform_grid(int points);

struct AlignmentReport {
  // Largest |d(x,u) + d(u,v) + d(v,z) - d(x,z)| over glued quadruples with
  // mass above 1e-12, and its mass-weighted mean.
  double max_defect = 0.0;
  double mean_defect = 0.0;
};

// Glues W1-optimal plans P0 -> Pt -> Pt' -> P1 and measures how far the glued
// quadruples are from lying in order on minimal paths.
AlignmentReport w1_alignment_check(const DiscreteMeasure& p0, const DiscreteMeasure& pt,
                                   const DiscreteMeasure& pt_prime, const DiscreteMeasure& p1,
                                   const GroundMetric& metric);

}  // namespace probdist
