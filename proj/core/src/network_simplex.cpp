#include "probdist/network_simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "probdist/errors.hpp"

namespace probdist::detail {

namespace {

class NetworkSimplex {
 public:
  NetworkSimplex(const Eigen::VectorXd& supply, const Eigen::VectorXd& demand,
                 const Eigen::MatrixXd& cost)
      : n_(supply.size()),
        m_(demand.size()),
        node_count_(static_cast<int>(n_ + m_ + 1)),
        root_(static_cast<int>(n_ + m_)),
        real_arcs_(n_ * m_),
        cost_(cost) {
    double c_max = 0.0;
    for (Eigen::Index k = 0; k < cost.size(); ++k) c_max = std::max(c_max, std::abs(cost.data()[k]));
    art_cost_ = (c_max + 1.0) * static_cast<double>(node_count_);
    clean_tolerance_ = 1e-13 * std::max(c_max, std::numeric_limits<double>::min());
    // Until the first recompute, sink potentials carry the artificial cost and
    // reduced costs are only accurate to a few ulps of it.
    tolerance_ = 1e-14 * art_cost_;
    init(supply, demand);
  }

  void run() {
    // Fresh potentials between rounds stop rounding drift from accumulating in
    // subtree shifts.
    const std::int64_t limit = 50 * static_cast<std::int64_t>(real_arcs_) + 100000;
    for (;;) {
      Eigen::Index entering;
      while ((entering = find_entering_arc()) >= 0) {
        pivot(entering);
        if (++pivots_ > limit) throw SolverFailure("network simplex exceeded its pivot limit");
      }
      recompute_potentials();
      tolerance_ = clean_tolerance_;
      if (find_entering_arc() < 0) break;
    }
  }

  TransportSolution result() const {
    TransportSolution out;
    out.flow = Eigen::MatrixXd::Zero(n_, m_);
    for (int u = 0; u < node_count_; ++u) {
      if (u == root_) continue;
      const Eigen::Index e = pred_[u];
      if (e < real_arcs_) out.flow(e % n_, e / n_) = std::max(0.0, flow_[u]);
    }
    out.source_potential = Eigen::Map<const Eigen::VectorXd>(pi_.data(), n_);
    out.sink_potential = Eigen::Map<const Eigen::VectorXd>(pi_.data() + n_, m_);
    out.pivots = pivots_;
    return out;
  }

 private:
  // Arc ids: real arc (i, j) is j * n + i, matching the column-major cost
  // layout. The artificial arc of node u is real_arcs_ + u.
  int tail(Eigen::Index e) const {
    if (e < real_arcs_) return static_cast<int>(e % n_);
    const int u = static_cast<int>(e - real_arcs_);
    return art_up_[u] ? u : root_;
  }
  int head(Eigen::Index e) const {
    if (e < real_arcs_) return static_cast<int>(n_ + e / n_);
    const int u = static_cast<int>(e - real_arcs_);
    return art_up_[u] ? root_ : u;
  }
  double arc_cost(Eigen::Index e) const {
    if (e < real_arcs_) return cost_.data()[e];
    return art_up_[e - real_arcs_] ? 0.0 : art_cost_;
  }

  void init(const Eigen::VectorXd& supply, const Eigen::VectorXd& demand) {
    const auto nodes = static_cast<std::size_t>(node_count_);
    parent_.assign(nodes, -1);
    pred_.assign(nodes, -1);
    up_.assign(nodes, 0);
    flow_.assign(nodes, 0.0);
    depth_.assign(nodes, 0);
    pi_.assign(nodes, 0.0);
    first_child_.assign(nodes, -1);
    next_sibling_.assign(nodes, -1);
    prev_sibling_.assign(nodes, -1);
    art_up_.assign(nodes, 0);
    in_tree_.assign(static_cast<std::size_t>(real_arcs_), 0);

    // Every node hangs from the root through its artificial arc, oriented so
    // that the arc carries the node's supply (strongly feasible start).
    for (int u = 0; u < root_; ++u) {
      const double s = u < n_ ? supply(u) : -demand(u - n_);
      art_up_[u] = s >= 0.0;
      pred_[u] = real_arcs_ + u;
      up_[u] = art_up_[u];
      flow_[u] = std::abs(s);
      pi_[u] = art_up_[u] ? 0.0 : art_cost_;
      depth_[u] = 1;
      attach(u, root_);
    }
  }

  void attach(int u, int p) {
    parent_[u] = p;
    prev_sibling_[u] = -1;
    next_sibling_[u] = first_child_[p];
    if (first_child_[p] >= 0) prev_sibling_[first_child_[p]] = u;
    first_child_[p] = u;
  }

  void detach(int u) {
    const int p = parent_[u];
    if (prev_sibling_[u] >= 0) {
      next_sibling_[prev_sibling_[u]] = next_sibling_[u];
    } else {
      first_child_[p] = next_sibling_[u];
    }
    if (next_sibling_[u] >= 0) prev_sibling_[next_sibling_[u]] = prev_sibling_[u];
    parent_[u] = -1;
    prev_sibling_[u] = next_sibling_[u] = -1;
  }

  // Block search: scan blocks of arcs cyclically starting after the previous
  // entering arc and return the most negative reduced cost of the first block
  // that has one.
  Eigen::Index find_entering_arc() {
    if (real_arcs_ == 0) return -1;
    const Eigen::Index block =
        std::max<Eigen::Index>(10, static_cast<Eigen::Index>(std::sqrt(static_cast<double>(real_arcs_))));
    Eigen::Index e = next_arc_;
    Eigen::Index i = e % n_;
    Eigen::Index j = e / n_;
    double best = -tolerance_;
    Eigen::Index best_arc = -1;
    Eigen::Index in_block = 0;
    const double* c = cost_.data();
    for (Eigen::Index scanned = 0; scanned < real_arcs_; ++scanned) {
      if (!in_tree_[static_cast<std::size_t>(e)]) {
        const double rc = c[e] + pi_[static_cast<std::size_t>(i)] - pi_[static_cast<std::size_t>(n_ + j)];
        if (rc < best) {
          best = rc;
          best_arc = e;
        }
      }
      ++e;
      if (++i == n_) {
        i = 0;
        if (++j == m_) {
          j = 0;
          e = 0;
        }
      }
      if (++in_block == block) {
        if (best_arc >= 0) {
          next_arc_ = e;
          return best_arc;
        }
        in_block = 0;
      }
    }
    next_arc_ = e;
    return best_arc;
  }

  void pivot(Eigen::Index entering) {
    const int first = tail(entering);
    const int second = head(entering);

    int a = first;
    int b = second;
    while (a != b) {
      if (depth_[a] > depth_[b]) {
        a = parent_[a];
      } else if (depth_[b] > depth_[a]) {
        b = parent_[b];
      } else {
        a = parent_[a];
        b = parent_[b];
      }
    }
    const int join = a;

    // Flow is pushed first -> second along the entering arc, second -> join
    // upward and join -> first downward. The leaving arc is the last blocking
    // arc met when traversing the cycle in that orientation from the join,
    // which keeps the tree strongly feasible.
    constexpr double kInf = std::numeric_limits<double>::infinity();
    double delta = kInf;
    int leaving_node = -1;
    bool on_first_side = false;
    for (int u = first; u != join; u = parent_[u]) {
      // Downward push decreases flow on arcs oriented u -> parent.
      if (up_[u] && flow_[u] < delta) {
        delta = flow_[u];
        leaving_node = u;
        on_first_side = true;
      }
    }
    for (int u = second; u != join; u = parent_[u]) {
      if (!up_[u] && flow_[u] <= delta) {
        delta = flow_[u];
        leaving_node = u;
        on_first_side = false;
      }
    }
    if (leaving_node < 0) throw SolverFailure("unbounded transport cycle");
    delta = std::max(0.0, delta);

    if (delta > 0.0) {
      for (int u = first; u != join; u = parent_[u]) flow_[u] += up_[u] ? -delta : delta;
      for (int u = second; u != join; u = parent_[u]) flow_[u] += up_[u] ? delta : -delta;
    }

    const Eigen::Index leaving_arc = pred_[leaving_node];
    if (leaving_arc < real_arcs_) in_tree_[static_cast<std::size_t>(leaving_arc)] = 0;
    in_tree_[static_cast<std::size_t>(entering)] = 1;

    // Re-hang the subtree that contains the cut side of the cycle below the
    // other endpoint of the entering arc, reversing the stem between the
    // entering endpoint and the leaving node.
    const int u_in = on_first_side ? first : second;
    const int v_in = on_first_side ? second : first;
    int u = u_in;
    int new_parent = v_in;
    Eigen::Index arc = entering;
    char dir_up = on_first_side ? 1 : 0;
    double f = delta;
    for (;;) {
      const int old_parent = parent_[u];
      const Eigen::Index old_arc = pred_[u];
      const char old_up = up_[u];
      const double old_flow = flow_[u];
      detach(u);
      pred_[u] = arc;
      up_[u] = dir_up;
      flow_[u] = f;
      attach(u, new_parent);
      if (u == leaving_node) break;
      new_parent = u;
      arc = old_arc;
      dir_up = old_up ? 0 : 1;
      f = old_flow;
      u = old_parent;
    }

    const double c_in = arc_cost(entering);
    const double new_pi = on_first_side ? pi_[v_in] - c_in : pi_[v_in] + c_in;
    shift_subtree(u_in, new_pi - pi_[u_in]);
  }

  void shift_subtree(int top, double sigma) {
    stack_.clear();
    stack_.push_back(top);
    while (!stack_.empty()) {
      const int u = stack_.back();
      stack_.pop_back();
      pi_[u] += sigma;
      depth_[u] = depth_[parent_[u]] + 1;
      for (int c = first_child_[u]; c >= 0; c = next_sibling_[c]) stack_.push_back(c);
    }
  }

  // Tree-consistent potentials from scratch. When every subtree of the root
  // hangs from it through the same kind of artificial arc (always the case at
  // an optimal basis), the root is placed so that the tops sit at zero and no
  // potential carries the artificial cost scale.
  void recompute_potentials() {
    bool all_sink_tops = true;
    for (int top = first_child_[root_]; top >= 0; top = next_sibling_[top])
      all_sink_tops = all_sink_tops && !up_[top];
    pi_[root_] = all_sink_tops ? -art_cost_ : 0.0;
    depth_[root_] = 0;
    stack_.clear();
    for (int c = first_child_[root_]; c >= 0; c = next_sibling_[c]) stack_.push_back(c);
    while (!stack_.empty()) {
      const int u = stack_.back();
      stack_.pop_back();
      const int p = parent_[u];
      const double c = arc_cost(pred_[u]);
      pi_[u] = up_[u] ? pi_[p] - c : pi_[p] + c;
      depth_[u] = depth_[p] + 1;
      for (int k = first_child_[u]; k >= 0; k = next_sibling_[k]) stack_.push_back(k);
    }
  }

  Eigen::Index n_;
  Eigen::Index m_;
  int node_count_;
  int root_;
  Eigen::Index real_arcs_;
  const Eigen::MatrixXd& cost_;
  double art_cost_ = 0.0;
  double tolerance_ = 0.0;
  double clean_tolerance_ = 0.0;

  std::vector<int> parent_;
  std::vector<Eigen::Index> pred_;
  std::vector<char> up_;  // pred arc oriented node -> parent
  std::vector<double> flow_;
  std::vector<int> depth_;
  std::vector<double> pi_;
  std::vector<int> first_child_;
  std::vector<int> next_sibling_;
  std::vector<int> prev_sibling_;
  std::vector<char> art_up_;
  std::vector<char> in_tree_;
  std::vector<int> stack_;
  Eigen::Index next_arc_ = 0;
  std::int64_t pivots_ = 0;
};

}  // namespace

TransportSolution solve_transport(const Eigen::VectorXd& supply, const Eigen::VectorXd& demand,
                                  const Eigen::MatrixXd& cost) {
  if (cost.rows() != supply.size() || cost.cols() != demand.size()) {
    throw DimensionMismatch("cost matrix shape does not match supply/demand");
  }
  if (supply.size() == 0 || demand.size() == 0) throw DomainError("empty transport problem");
  if ((supply.array() < 0.0).any() || (demand.array() < 0.0).any()) {
    throw DomainError("supplies and demands must be nonnegative");
  }
  if (!cost.allFinite()) throw DomainError("transport costs must be finite");
  const double total = supply.sum();
  if (std::abs(total - demand.sum()) > 1e-9 * std::max(1.0, total)) {
    throw DomainError("supply and demand totals differ");
  }
  NetworkSimplex solver(supply, demand, cost);
  solver.run();
  return solver.result();
}

}  // namespace probdist::detail
