#pragma once

#include <Eigen/Dense>

#include <functional>
#include <string>

#include "probdist/measures.hpp"
#include "probdist/rng.hpp"

namespace probdist {

// Symmetric function of two points, used both as a positive-definite kernel K
// and as a negative-definite "distance" d.
using PointKernel = std::function<double(PointRef, PointRef)>;

// Gram matrix of a kernel over an explicit point list, with the points it was
// built from.
struct GramMatrix {
  Eigen::MatrixXd entries;
  PointSet points;
  std::string kernel_name;

  double min_eigenvalue() const;
  // min_eigenvalue() >= -rel_tol * ||entries||_F.
  bool is_psd(double rel_tol = 1e-8) const;
};

GramMatrix gram_matrix(const PointKernel& kernel, const PointSet& points, std::string name = "custom");

// K_d(x, y) = 1/2 (d(x, x0) + d(y, x0) - d(x, y)).
PointKernel triangular_gap_kernel(const GroundMetric& metric, Point x0);
GramMatrix triangular_gap_gram(const GroundMetric& metric, const PointSet& points, const Point& x0);

// exp(-||x - y||^2 / (2 bandwidth^2)).
PointKernel gaussian_kernel(double bandwidth);

// d_K(x, y) = K(x, x) + K(y, y) - 2 K(x, y).
PointKernel induced_distance(PointKernel kernel);

// Generalized energy distance, squared:
//   2 E[d(x, y)] - E[d(x, x')] - E[d(y, y')],  x, x' ~ Q,  y, y' ~ P,
// as exact weighted double sums (V-statistic, diagonal terms included).
double energy_distance_sq(const DiscreteMeasure& q, const DiscreteMeasure& p,
                          const GroundMetric& metric);
double energy_distance_sq(const DiscreteMeasure& q, const DiscreteMeasure& p,
                          const PointKernel& distance);

// ||E_Q Phi - E_P Phi||^2 = w^T K w over the concatenated atoms of Q and P,
// with signed weights w = (weights_Q, -weights_P). Equals
// 1/2 energy_distance_sq(Q, P, induced_distance(K)), and 1/2 ED^2 for the
// triangular gap kernel of a negative-definite d.
double mmd_sq_via_gram(const DiscreteMeasure& q, const DiscreteMeasure& p, const PointKernel& kernel);

// E_{x, x' ~ Q}[d(x, x')]. The expected squared energy distance between Q and
// its n-sample empirical measure is this value divided by n.
double ed_bias_exact(const DiscreteMeasure& q, const GroundMetric& metric);

struct NegativeDefiniteReport {
  // Largest c^T D c over the random unit vectors c with sum c_i = 0.
  double max_form_value = 0.0;
  Eigen::VectorXd worst_coefficients;
};

// Randomized falsification of sum c_i = 0  =>  sum_ij d(x_i, x_j) c_i c_j <= 0.
NegativeDefiniteReport check_negative_definite(const GroundMetric& metric, const PointSet& points,
                                               int trials, RngStream& rng);

}  // namespace probdist
