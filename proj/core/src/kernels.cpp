#include "probdist/kernels.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

#include "probdist/errors.hpp"

namespace probdist {

namespace {

void require_same_dim(const DiscreteMeasure& q, const DiscreteMeasure& p) {
  if (q.dim() != p.dim()) {
    throw DimensionMismatch("measures of dimension " + std::to_string(q.dim()) + " and " +
                            std::to_string(p.dim()));
  }
}

// sum_ij a_i b_j d(x_i, y_j)
double cross_expectation(const DiscreteMeasure& a, const DiscreteMeasure& b,
                         const PointKernel& distance) {
  double total = 0.0;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    double row = 0.0;
    for (Eigen::Index j = 0; j < b.size(); ++j) row += b.weight(j) * distance(a.atom(i), b.atom(j));
    total += a.weight(i) * row;
  }
  return total;
}

double self_expectation(const DiscreteMeasure& a, const PointKernel& distance) {
  // Symmetric: off-diagonal pairs once, doubled; diagonal kept.
  double off = 0.0;
  double diag = 0.0;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    diag += a.weight(i) * a.weight(i) * distance(a.atom(i), a.atom(i));
    for (Eigen::Index j = i + 1; j < a.size(); ++j)
      off += a.weight(i) * a.weight(j) * distance(a.atom(i), a.atom(j));
  }
  return 2.0 * off + diag;
}

PointKernel as_kernel(const GroundMetric& metric) {
  return [metric](PointRef x, PointRef y) { return metric(x, y); };
}

}  // namespace

double GramMatrix::min_eigenvalue() const {
  if (entries.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(entries, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

bool GramMatrix::is_psd(double rel_tol) const {
  return min_eigenvalue() >= -rel_tol * std::max(entries.norm(), 1.0);
}

GramMatrix gram_matrix(const PointKernel& kernel, const PointSet& points, std::string name) {
  const auto n = points.cols();
  Eigen::MatrixXd k(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i; j < n; ++j) {
      const double v = kernel(points.col(i), points.col(j));
      k(i, j) = v;
      k(j, i) = v;
    }
  }
  return GramMatrix{std::move(k), points, std::move(name)};
}

PointKernel triangular_gap_kernel(const GroundMetric& metric, Point x0) {
  return [metric, x0 = std::move(x0)](PointRef x, PointRef y) {
    return 0.5 * (metric(x, x0) + metric(y, x0) - metric(x, y));
  };
}

GramMatrix triangular_gap_gram(const GroundMetric& metric, const PointSet& points, const Point& x0) {
  if (points.rows() != x0.size()) {
    throw DimensionMismatch("origin x0 has dimension " + std::to_string(x0.size()) +
                            ", points have " + std::to_string(points.rows()));
  }
  return gram_matrix(triangular_gap_kernel(metric, x0), points, "triangular-gap[" + metric.name() + "]");
}

PointKernel gaussian_kernel(double bandwidth) {
  if (!(bandwidth > 0.0)) throw DomainError("gaussian bandwidth must be positive");
  const double scale = 1.0 / (2.0 * bandwidth * bandwidth);
  return [scale](PointRef x, PointRef y) {
    if (x.size() != y.size()) throw DimensionMismatch("kernel between points of different dimension");
    return std::exp(-scale * (x - y).squaredNorm());
  };
}

PointKernel induced_distance(PointKernel kernel) {
  return [k = std::move(kernel)](PointRef x, PointRef y) { return k(x, x) + k(y, y) - 2.0 * k(x, y); };
}

double energy_distance_sq(const DiscreteMeasure& q, const DiscreteMeasure& p,
                          const PointKernel& distance) {
  require_same_dim(q, p);
  return 2.0 * cross_expectation(q, p, distance) - self_expectation(q, distance) -
         self_expectation(p, distance);
}

double energy_distance_sq(const DiscreteMeasure& q, const DiscreteMeasure& p,
                          const GroundMetric& metric) {
  if (!metric.is_negative_definite()) {
    throw DomainError("energy distance needs a negative-definite ground kernel, got " + metric.name());
  }
  return energy_distance_sq(q, p, as_kernel(metric));
}

double mmd_sq_via_gram(const DiscreteMeasure& q, const DiscreteMeasure& p, const PointKernel& kernel) {
  require_same_dim(q, p);
  const Eigen::Index n = q.size();
  PointSet pts(q.dim(), n + p.size());
  pts.leftCols(n) = q.atoms();
  pts.rightCols(p.size()) = p.atoms();
  Eigen::VectorXd w(n + p.size());
  w.head(n) = q.weights();
  w.tail(p.size()) = -p.weights();
  const auto gram = gram_matrix(kernel, pts);
  return w.dot(gram.entries * w);
}

double ed_bias_exact(const DiscreteMeasure& q, const GroundMetric& metric) {
  return self_expectation(q, as_kernel(metric));
}

NegativeDefiniteReport check_negative_definite(const GroundMetric& metric, const PointSet& points,
                                               int trials, RngStream& rng) {
  const auto n = points.cols();
  if (n < 2) throw DomainError("negative-definiteness check needs at least two points");
  Eigen::MatrixXd d(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) d(i, j) = metric(points.col(i), points.col(j));

  NegativeDefiniteReport report;
  report.max_form_value = -std::numeric_limits<double>::infinity();
  Eigen::VectorXd c(n);
  for (int t = 0; t < trials; ++t) {
    for (Eigen::Index i = 0; i < n; ++i) c(i) = rng.normal();
    c.array() -= c.mean();
    const double norm = c.norm();
    if (norm == 0.0) continue;
    c /= norm;
    const double form = c.dot(d * c);
    if (form > report.max_form_value) {
      report.max_form_value = form;
      report.worst_coefficients = c;
    }
  }
  return report;
}

}  // namespace probdist
