#pragma once

#include <Eigen/Dense>

#include <cstdint>

namespace probdist::detail {

// Optimal flow of an uncapacitated transportation problem
//
//   min sum_ij cost_ij flow_ij   s.t.  flow 1 = supply, flow^T 1 = demand, flow >= 0
//
// together with node potentials certifying it: reduced costs
// cost_ij + source_potential_i - sink_potential_j are >= -tolerance, and
// vanish on every basic arc.
struct TransportSolution {
  Eigen::MatrixXd flow;
  Eigen::VectorXd source_potential;
  Eigen::VectorXd sink_potential;
  std::int64_t pivots = 0;
};

// Primal network simplex on the complete bipartite graph with an artificial
// root (strongly feasible initial tree), block-search pivoting and the
// last-blocking-arc leaving rule. The pivot order is fixed, so the returned
// basic solution is deterministic. supply and demand must be nonnegative with
// equal sums; costs must be finite.
TransportSolution solve_transport(const Eigen::VectorXd& supply, const Eigen::VectorXd& demand,
                                  const Eigen::MatrixXd& cost);

}  // namespace probdist::detail
