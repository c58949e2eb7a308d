#include "probdist/geodesics.hpp"

#include <algorithm>
#include <cmath>

#include "probdist/errors.hpp"

namespace probdist {

namespace {

constexpr double kMarginalTol = 1e-9;
constexpr double kAlignmentMassFloor = 1e-12;

void require_time(double t) {
  if (!(t >= 0.0 && t <= 1.0)) throw DomainError("curve parameter t must lie in [0, 1]");
}

void require_same_dim(const DiscreteMeasure& a, const DiscreteMeasure& b) {
  if (a.dim() != b.dim()) {
    throw DimensionMismatch("curve endpoints have dimension " + std::to_string(a.dim()) + " and " +
                            std::to_string(b.dim()));
  }
}

class AtomAccumulator {
 public:
  explicit AtomAccumulator(Eigen::Index dim) : dim_(dim) {}

  void add(const Eigen::VectorXd& x, double w) {
    if (w <= 0.0) return;
    coords_.insert(coords_.end(), x.data(), x.data() + x.size());
    weights_.push_back(w);
  }

  DiscreteMeasure finish() const {
    const auto n = static_cast<Eigen::Index>(weights_.size());
    PointSet atoms = Eigen::Map<const PointSet>(coords_.data(), dim_, n);
    Eigen::VectorXd w = Eigen::Map<const Eigen::VectorXd>(weights_.data(), n);
    return DiscreteMeasure::make(std::move(atoms), std::move(w)).merged();
  }

 private:
  Eigen::Index dim_;
  std::vector<double> coords_;
  std::vector<double> weights_;
};

Eigen::VectorXd lerp(PointRef x, PointRef y, double s) { return (1.0 - s) * x + s * y; }

}  // namespace

DiscreteMeasure Curve::eval(double t) const {
  require_time(t);
  if (kind_ == CurveKind::kMixture) return mixture_at(start_, end_, t);
  AtomAccumulator acc(start_.dim());
  for (const auto& grain : grains_) {
    const auto x = start_.atom(grain.source);
    const auto y = end_.atom(grain.target);
    switch (grain.schedule.rule) {
      case GrainRule::kDisplace:
        acc.add(lerp(x, y, t), grain.mass);
        break;
      case GrainRule::kMixture:
        acc.add(x, (1.0 - t) * grain.mass);
        acc.add(y, t * grain.mass);
        break;
      case GrainRule::kSmear: {
        const int k = grain.schedule.smear_points;
        if (k == 1) {
          acc.add(lerp(x, y, t), grain.mass);
          break;
        }
        const double spread = std::min(t, 1.0 - t);
        for (int r = 0; r < k; ++r) {
          const double a = 2.0 * r / (k - 1) - 1.0;
          const double s = std::clamp(t + a * spread, 0.0, 1.0);
          acc.add(lerp(x, y, s), grain.mass / k);
        }
        break;
      }
    }
  }
  return acc.finish();
}

DiscreteMeasure mixture_at(const DiscreteMeasure& p0, const DiscreteMeasure& p1, double t) {
  require_same_dim(p0, p1);
  require_time(t);
  AtomAccumulator acc(p0.dim());
  for (Eigen::Index i = 0; i < p0.size(); ++i) acc.add(p0.atom(i), (1.0 - t) * p0.weight(i));
  for (Eigen::Index j = 0; j < p1.size(); ++j) acc.add(p1.atom(j), t * p1.weight(j));
  return acc.finish();
}

Curve mixture_curve(const DiscreteMeasure& p0, const DiscreteMeasure& p1) {
  require_same_dim(p0, p1);
  return Curve(CurveKind::kMixture, p0, p1);
}

std::vector<std::pair<Eigen::Index, Eigen::Index>> plan_entries(const TransportPlan& plan) {
  std::vector<std::pair<Eigen::Index, Eigen::Index>> out;
  for (Eigen::Index j = 0; j < plan.coupling.cols(); ++j)
    for (Eigen::Index i = 0; i < plan.coupling.rows(); ++i)
      if (plan.coupling(i, j) > 0.0) out.emplace_back(i, j);
  return out;
}

Curve hybrid_curve(const TransportPlan& plan, const std::vector<GrainSchedule>& schedule) {
  if (schedule.empty()) throw DomainError("hybrid curve needs a non-empty schedule");
  const auto entries = plan_entries(plan);
  if (schedule.size() != 1 && schedule.size() != entries.size()) {
    throw DomainError("schedule has " + std::to_string(schedule.size()) + " rules for " +
                      std::to_string(entries.size()) + " plan entries");
  }
  for (const auto& s : schedule) {
    if (s.rule == GrainRule::kSmear && s.smear_points < 1) {
      throw DomainError("smear rule needs at least one point");
    }
  }
  Curve curve(CurveKind::kHybrid, plan.source, plan.target);
  curve.plan_ = plan;
  curve.grains_.reserve(entries.size());
  for (std::size_t e = 0; e < entries.size(); ++e) {
    const auto [i, j] = entries[e];
    curve.grains_.push_back({i, j, plan.coupling(i, j), schedule.size() == 1 ? schedule[0] : schedule[e]});
  }
  return curve;
}

Curve hybrid_curve(const DiscreteMeasure& p0, const DiscreteMeasure& p1, const GroundMetric& metric,
                   const std::vector<GrainSchedule>& schedule) {
  if (!metric.is_euclidean()) throw DomainError("hybrid curves move grains along Euclidean segments");
  return hybrid_curve(solve_exact_ot(p0, p1, metric, 1.0).plan, schedule);
}

Curve displacement_curve(const DiscreteMeasure& p0, const DiscreteMeasure& p1,
                         const GroundMetric& metric, double p) {
  if (!metric.is_euclidean()) throw DomainError("displacement curves need the Euclidean metric");
  Curve curve = hybrid_curve(solve_exact_ot(p0, p1, metric, p).plan, {GrainSchedule::displace()});
  curve.kind_ = CurveKind::kDisplacement;
  return curve;
}

Eigen::MatrixXd GluedCoupling::pair_marginal(int a, int b) const {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(marginal_measure(a).size(), marginal_measure(b).size());
  for (std::size_t e = 0; e < size(); ++e) out(index(e, a), index(e, b)) += mass_[e];
  return out;
}

namespace {

void check_middle(const DiscreteMeasure& left_target, const Eigen::VectorXd& left_mass,
                  const TransportPlan& next) {
  if (left_target.size() != next.source.size() || left_target.atoms() != next.source.atoms()) {
    throw DomainError("gluing failed: plans do not share their middle measure");
  }
  const Eigen::VectorXd right_mass = next.coupling.rowwise().sum();
  const double err = (left_mass - right_mass).cwiseAbs().maxCoeff();
  if (err > kMarginalTol) {
    throw DomainError("gluing failed: middle marginals differ by " + std::to_string(err));
  }
}

}  // namespace

GluedCoupling glue_plans(const TransportPlan& plan12, const TransportPlan& plan23) {
  check_middle(plan12.target, plan12.coupling.colwise().sum().transpose(), plan23);
  GluedCoupling out;
  out.arity_ = 3;
  out.measures_ = {plan12.source, plan12.target, plan23.target};
  const auto& mid = plan12.target;
  for (Eigen::Index j = 0; j < mid.size(); ++j) {
    const double mu = mid.weight(j);
    if (mu <= 0.0) continue;
    for (Eigen::Index i = 0; i < plan12.coupling.rows(); ++i) {
      const double a = plan12.coupling(i, j);
      if (a <= 0.0) continue;
      for (Eigen::Index k = 0; k < plan23.coupling.cols(); ++k) {
        const double b = plan23.coupling(j, k);
        if (b <= 0.0) continue;
        out.indices_.insert(out.indices_.end(), {i, j, k});
        out.mass_.push_back(a * b / mu);
      }
    }
  }
  return out;
}

GluedCoupling glue_plans(const GluedCoupling& chain, const TransportPlan& next) {
  const int last = chain.arity() - 1;
  const auto& mid = chain.marginal_measure(last);
  Eigen::VectorXd left = Eigen::VectorXd::Zero(mid.size());
  for (std::size_t e = 0; e < chain.size(); ++e) left(chain.index(e, last)) += chain.mass(e);
  check_middle(mid, left, next);

  GluedCoupling out;
  out.arity_ = chain.arity() + 1;
  out.measures_ = chain.measures_;
  out.measures_.push_back(next.target);
  for (std::size_t e = 0; e < chain.size(); ++e) {
    const Eigen::Index j = chain.index(e, last);
    const double mu = mid.weight(j);
    if (mu <= 0.0) continue;
    for (Eigen::Index k = 0; k < next.coupling.cols(); ++k) {
      const double b = next.coupling(j, k);
      if (b <= 0.0) continue;
      for (int s = 0; s < chain.arity(); ++s) out.indices_.push_back(chain.index(e, s));
      out.indices_.push_back(k);
      out.mass_.push_back(chain.mass(e) * b / mu);
    }
  }
  return out;
}

std::vector<double> uniform_grid(int points) {
  if (points < 2) throw DomainError("grid needs at least two points");
  std::vector<double> grid(static_cast<std::size_t>(points));
  for (int k = 0; k < points; ++k) grid[static_cast<std::size_t>(k)] = static_cast<double>(k) / (points - 1);
  return grid;
}

ConstantSpeedReport constant_speed_check(const Curve& curve, const Distance& distance,
                                         const std::vector<double>& grid) {
  for (double t : grid) require_time(t);
  std::vector<DiscreteMeasure> points;
  points.reserve(grid.size());
  for (double t : grid) points.push_back(curve.eval(t));

  ConstantSpeedReport report;
  report.endpoint_distance = distance(curve.start(), curve.end());
  for (std::size_t a = 0; a < grid.size(); ++a) {
    for (std::size_t b = a + 1; b < grid.size(); ++b) {
      const double expected = std::abs(grid[b] - grid[a]) * report.endpoint_distance;
      const double v = std::abs(distance(points[a], points[b]) - expected);
      report.rows.push_back({grid[a], grid[b], v});
      report.max_violation = std::max(report.max_violation, v);
    }
  }
  return report;
}

AlignmentReport w1_alignment_check(const DiscreteMeasure& p0, const DiscreteMeasure& pt,
                                   const DiscreteMeasure& pt_prime, const DiscreteMeasure& p1,
                                   const GroundMetric& metric) {
  if (!metric.is_metric()) throw DomainError("alignment check needs the Euclidean or L1 metric");
  const auto a = solve_exact_ot(p0, pt, metric, 1.0).plan;
  const auto b = solve_exact_ot(pt, pt_prime, metric, 1.0).plan;
  const auto c = solve_exact_ot(pt_prime, p1, metric, 1.0).plan;
  const auto quad = glue_plans(glue_plans(a, b), c);

  AlignmentReport report;
  double weighted = 0.0;
  double total = 0.0;
  for (std::size_t e = 0; e < quad.size(); ++e) {
    const auto x = p0.atom(quad.index(e, 0));
    const auto u = pt.atom(quad.index(e, 1));
    const auto v = pt_prime.atom(quad.index(e, 2));
    const auto z = p1.atom(quad.index(e, 3));
    const double defect = std::abs(metric(x, u) + metric(u, v) + metric(v, z) - metric(x, z));
    const double m = quad.mass(e);
    weighted += m * defect;
    total += m;
    if (m > kAlignmentMassFloor) report.max_defect = std::max(report.max_defect, defect);
  }
  report.mean_defect = total > 0.0 ? weighted / total : 0.0;
  return report;
}

}  // namespace probdist
