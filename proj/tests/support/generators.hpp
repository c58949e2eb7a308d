#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

#include "probdist/measures.hpp"
#include "probdist/rng.hpp"

namespace probdist::testing {

inline PointSet random_points(int dim, int n, RngStream& rng, double lo = -1.0, double hi = 1.0) {
  PointSet x(dim, n);
  for (Eigen::Index k = 0; k < x.size(); ++k) x.data()[k] = rng.uniform(lo, hi);
  return x;
}

inline DiscreteMeasure random_measure(int dim, int n, RngStream& rng) {
  Eigen::VectorXd w(n);
  for (int k = 0; k < n; ++k) w(k) = rng.uniform(0.05, 1.0);
  return DiscreteMeasure::make(random_points(dim, n, rng), w / w.sum());
}

inline DiscreteMeasure random_uniform_measure(int dim, int n, RngStream& rng) {
  return DiscreteMeasure::uniform(random_points(dim, n, rng));
}

// Integer-lattice atoms, so that coincidences between measures are common.
inline DiscreteMeasure random_lattice_measure(int dim, int n, int side, RngStream& rng) {
  PointSet x(dim, n);
  for (Eigen::Index k = 0; k < x.size(); ++k) x.data()[k] = static_cast<double>(rng.index(static_cast<std::size_t>(side)));
  Eigen::VectorXd w(n);
  for (int k = 0; k < n; ++k) w(k) = rng.uniform(0.05, 1.0);
  return DiscreteMeasure::make(std::move(x), w / w.sum());
}

// Random measures on a shared support, weights possibly zero on some atoms.
inline std::pair<DiscreteMeasure, DiscreteMeasure> shared_support_pair(int dim, int n, RngStream& rng) {
  const PointSet x = random_points(dim, n, rng);
  Eigen::VectorXd a(n), b(n);
  for (int k = 0; k < n; ++k) {
    a(k) = rng.uniform() < 0.2 ? 0.0 : rng.uniform(0.05, 1.0);
    b(k) = rng.uniform() < 0.2 ? 0.0 : rng.uniform(0.05, 1.0);
  }
  if (a.sum() == 0.0) a(0) = 1.0;
  if (b.sum() == 0.0) b(0) = 1.0;
  return {DiscreteMeasure::make(x, a / a.sum()), DiscreteMeasure::make(x, b / b.sum())};
}

}  // namespace probdist::testing
