#include "probdist/transport.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <vector>

#include "probdist/errors.hpp"
#include "probdist/network_simplex.hpp"

namespace probdist {

namespace {

constexpr double kCertifyTol = 1e-9;

void check_problem(const DiscreteMeasure& q, const DiscreteMeasure& p, double exponent) {
  if (q.dim() != p.dim()) {
    throw DimensionMismatch("transport between measures of dimension " + std::to_string(q.dim()) +
                            " and " + std::to_string(p.dim()));
  }
  if (!(exponent >= 1.0) || !std::isfinite(exponent)) {
    throw DomainError("transport exponent p must be >= 1");
  }
}

std::vector<Eigen::Index> positive_support(const DiscreteMeasure& m) {
  std::vector<Eigen::Index> idx;
  for (Eigen::Index i = 0; i < m.size(); ++i)
    if (m.weight(i) > 0.0) idx.push_back(i);
  return idx;
}

std::string describe_instance(const DiscreteMeasure& q, const DiscreteMeasure& p,
                              const GroundMetric& metric, double exponent) {
  std::ostringstream os;
  os.precision(17);
  os << "instance: metric=" << metric.name() << " p=" << exponent << " dim=" << q.dim()
     << "\nsource (" << q.size() << " atoms):\n";
  for (Eigen::Index i = 0; i < q.size(); ++i) os << "  " << q.weight(i) << " " << q.atom(i).transpose() << "\n";
  os << "target (" << p.size() << " atoms):\n";
  for (Eigen::Index j = 0; j < p.size(); ++j) os << "  " << p.weight(j) << " " << p.atom(j).transpose() << "\n";
  return os.str();
}

DualityReport duality_check(const TransportPlan& plan, const DualPotentials& potentials,
                            bool lipschitz);

}  // namespace

Eigen::Index TransportPlan::support_size(double threshold) const {
  return (coupling.array() > threshold).count();
}

Eigen::MatrixXd cost_matrix(const DiscreteMeasure& q, const DiscreteMeasure& p,
                            const GroundMetric& metric, double exponent) {
  if (q.dim() != p.dim()) throw DimensionMismatch("cost matrix between different dimensions");
  Eigen::MatrixXd c(q.size(), p.size());
  for (Eigen::Index j = 0; j < p.size(); ++j) {
    for (Eigen::Index i = 0; i < q.size(); ++i) {
      const double d = metric(q.atom(i), p.atom(j));
      c(i, j) = exponent == 1.0 ? d : exponent == 2.0 ? d * d : std::pow(d, exponent);
    }
  }
  return c;
}

OtSolution solve_exact_ot(const DiscreteMeasure& q, const DiscreteMeasure& p,
                          const GroundMetric& metric, double exponent) {
  check_problem(q, p, exponent);
  const Eigen::MatrixXd cost = cost_matrix(q, p, metric, exponent);
  const auto rows = positive_support(q);
  const auto cols = positive_support(p);

  Eigen::VectorXd supply(static_cast<Eigen::Index>(rows.size()));
  Eigen::VectorXd demand(static_cast<Eigen::Index>(cols.size()));
  Eigen::MatrixXd reduced(supply.size(), demand.size());
  for (std::size_t a = 0; a < rows.size(); ++a) supply(static_cast<Eigen::Index>(a)) = q.weight(rows[a]);
  for (std::size_t b = 0; b < cols.size(); ++b) {
    demand(static_cast<Eigen::Index>(b)) = p.weight(cols[b]);
    for (std::size_t a = 0; a < rows.size(); ++a)
      reduced(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = cost(rows[a], cols[b]);
  }

  const auto sol = detail::solve_transport(supply, demand, reduced);

  OtSolution out{TransportPlan{Eigen::MatrixXd::Zero(q.size(), p.size()), 0.0, exponent, q, p, metric},
                 DualPotentials{Eigen::VectorXd::Zero(q.size()), Eigen::VectorXd::Zero(p.size()), exponent}};
  auto& plan = out.plan.coupling;
  for (std::size_t b = 0; b < cols.size(); ++b)
    for (std::size_t a = 0; a < rows.size(); ++a)
      plan(rows[a], cols[b]) = sol.flow(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
  out.plan.cost = (plan.array() * cost.array()).sum();

  // Simplex potentials satisfy c_ij + pi_i - pi_j >= -tol; flip signs to the
  // f - g <= c convention, then c-transform twice so the pair is exactly
  // feasible and defined on zero-weight atoms too.
  auto& f = out.potentials.f;
  auto& g = out.potentials.g;
  Eigen::VectorXd f_support(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t a = 0; a < rows.size(); ++a) f_support(static_cast<Eigen::Index>(a)) = -sol.source_potential(static_cast<Eigen::Index>(a));
  for (Eigen::Index j = 0; j < p.size(); ++j) {
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < rows.size(); ++a)
      best = std::max(best, f_support(static_cast<Eigen::Index>(a)) - cost(rows[a], j));
    g(j) = best;
  }
  for (Eigen::Index i = 0; i < q.size(); ++i) f(i) = (g + cost.row(i).transpose()).minCoeff();
  // Zero-weight targets need g_j >= f_i - c_ij against the final f.
  for (Eigen::Index j = 0; j < p.size(); ++j) {
    if (p.weight(j) > 0.0) continue;
    g(j) = (f - cost.col(j)).maxCoeff();
  }

  const auto report = duality_check(out.plan, out.potentials, false);
  if (report.gap > kCertifyTol || report.max_infeasibility > kCertifyTol) {
    std::ostringstream os;
    os.precision(17);
    os << "optimal transport not certified: gap=" << report.gap
       << " infeasibility=" << report.max_infeasibility << " pivots=" << sol.pivots << "\n"
       << describe_instance(q, p, metric, exponent);
    throw SolverFailure(os.str());
  }
  return out;
}

double wasserstein(const DiscreteMeasure& q, const DiscreteMeasure& p, const GroundMetric& metric,
                   double exponent) {
  const double cost = std::max(0.0, solve_exact_ot(q, p, metric, exponent).plan.cost);
  return exponent == 1.0 ? cost : std::pow(cost, 1.0 / exponent);
}

double assignment_oracle(const DiscreteMeasure& q, const DiscreteMeasure& p,
                         const GroundMetric& metric, double exponent) {
  check_problem(q, p, exponent);
  if (q.size() != p.size()) throw DomainError("assignment oracle needs equal atom counts");
  if (q.size() > 8) throw DomainError("assignment oracle limited to n <= 8");
  if (!q.has_uniform_weights() || !p.has_uniform_weights()) {
    throw DomainError("assignment oracle needs equal weights");
  }
  const Eigen::MatrixXd cost = cost_matrix(q, p, metric, exponent);
  std::vector<Eigen::Index> perm(static_cast<std::size_t>(q.size()));
  std::iota(perm.begin(), perm.end(), Eigen::Index{0});
  double best = std::numeric_limits<double>::infinity();
  do {
    double total = 0.0;
    for (std::size_t i = 0; i < perm.size(); ++i) total += cost(static_cast<Eigen::Index>(i), perm[i]);
    best = std::min(best, total);
  } while (std::next_permutation(perm.begin(), perm.end()));
  const double mean_cost = best / static_cast<double>(q.size());
  return std::pow(mean_cost, 1.0 / exponent);
}

namespace {

DualityReport duality_check(const TransportPlan& plan, const DualPotentials& potentials,
                            bool lipschitz) {
  const auto& q = plan.source;
  const auto& p = plan.target;
  if (plan.coupling.rows() != q.size() || plan.coupling.cols() != p.size() ||
      potentials.f.size() != q.size() || potentials.g.size() != p.size() ||
      potentials.p != plan.p) {
    throw DomainError("plan and potentials come from different problem instances");
  }
  const Eigen::MatrixXd cost = cost_matrix(q, p, plan.metric, plan.p);
  const double primal = (plan.coupling.array() * cost.array()).sum();
  const double dual = q.weights().dot(potentials.f) - p.weights().dot(potentials.g);
  const double scale = std::max({std::abs(primal), cost.maxCoeff(), std::numeric_limits<double>::min()});

  DualityReport report;
  report.gap = std::abs(primal - dual) / scale;
  double worst = 0.0;
  for (Eigen::Index j = 0; j < p.size(); ++j)
    for (Eigen::Index i = 0; i < q.size(); ++i)
      worst = std::max(worst, potentials.f(i) - potentials.g(j) - cost(i, j));
  report.max_infeasibility = worst;

  if (lipschitz && plan.p == 1.0 && plan.metric.is_metric()) {
    // Critic phi = g^c is 1-Lipschitz by construction whenever d is a metric;
    // evaluating it numerically checks that the potentials realize the
    // IPM form of W1.
    const Eigen::Index n = q.size();
    const Eigen::Index total = n + p.size();
    PointSet pts(q.dim(), total);
    pts.leftCols(n) = q.atoms();
    pts.rightCols(p.size()) = p.atoms();
    Eigen::VectorXd phi(total);
    for (Eigen::Index a = 0; a < total; ++a) {
      double best = std::numeric_limits<double>::infinity();
      for (Eigen::Index j = 0; j < p.size(); ++j)
        best = std::min(best, potentials.g(j) + plan.metric(pts.col(a), p.atom(j)));
      phi(a) = best;
    }
    double lip = 0.0;
    for (Eigen::Index a = 0; a < total; ++a)
      for (Eigen::Index b = a + 1; b < total; ++b)
        lip = std::max(lip, std::abs(phi(a) - phi(b)) - plan.metric(pts.col(a), pts.col(b)));
    report.lip_violation = lip;
    const double ipm = q.weights().dot(phi.head(n)) - p.weights().dot(phi.tail(p.size()));
    report.ipm_gap = std::abs(ipm - primal) / scale;
  }
  return report;
}

}  // namespace

DualityReport verify_duality(const TransportPlan& plan, const DualPotentials& potentials) {
  return duality_check(plan, potentials, true);
}

Eigen::MatrixXd ot_position_gradient(const TransportPlan& plan) {
  if (!plan.metric.is_euclidean()) throw DomainError("position gradient needs the Euclidean metric");
  const auto& q = plan.source;
  const auto& p = plan.target;
  Eigen::MatrixXd grad = Eigen::MatrixXd::Zero(p.dim(), p.size());
  for (Eigen::Index j = 0; j < p.size(); ++j) {
    for (Eigen::Index i = 0; i < q.size(); ++i) {
      const double mass = plan.coupling(i, j);
      if (mass <= 0.0) continue;
      const Eigen::VectorXd diff = p.atom(j) - q.atom(i);
      const double r = diff.norm();
      if (r == 0.0) {
        if (plan.p == 1.0) {
          throw DomainError("W1 is not differentiable: plan mass on a zero-length pair (source " +
                            std::to_string(i) + ", target " + std::to_string(j) + ")");
        }
        continue;
      }
      // grad_y |y - x|^p = p |y - x|^(p-2) (y - x)
      grad.col(j) += mass * plan.p * std::pow(r, plan.p - 2.0) * diff;
    }
  }
  return grad;
}

Eigen::MatrixXd ot_position_gradient(const DiscreteMeasure& q, const DiscreteMeasure& p,
                                     const GroundMetric& metric, double exponent) {
  if (!metric.is_euclidean()) throw DomainError("position gradient needs the Euclidean metric");
  return ot_position_gradient(solve_exact_ot(q, p, metric, exponent).plan);
}

}  // namespace probdist
