#pragma once

#include <string>

#include "probdist/measures.hpp"

namespace probdist {

// A probability distance usable by the geodesic and convexity predicates:
// W_p with a ground metric, or the energy pseudodistance sqrt(ED^2).
class Distance {
 public:
  enum class Kind { kWasserstein, kEnergy };

  static Distance wasserstein(GroundMetric metric, double p) { return Distance(Kind::kWasserstein, metric, p); }
  static Distance w1(GroundMetric metric = GroundMetric::euclidean()) { return wasserstein(metric, 1.0); }
  static Distance energy(GroundMetric metric = GroundMetric::euclidean()) { return Distance(Kind::kEnergy, metric, 1.0); }

  Kind kind() const { return kind_; }
  const GroundMetric& metric() const { return metric_; }
  double p() const { return p_; }
  std::string name() const;

  double operator()(const DiscreteMeasure& q, const DiscreteMeasure& p) const;

 private:
  Distance(Kind kind, GroundMetric metric, double p) : kind_(kind), metric_(metric), p_(p) {}

  Kind kind_;
  GroundMetric metric_;
  double p_;
};

}  // namespace probdist
