#include "probdist/landscapes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "probdist/errors.hpp"
#include "probdist/geodesics.hpp"
#include "probdist/kernels.hpp"
#include "probdist/parallel.hpp"
#include "probdist/transport.hpp"

namespace probdist {

namespace {

std::string format_params(const Eigen::Vector2d& p) {
  return "(" + std::to_string(p(0)) + ", " + std::to_string(p(1)) + ")";
}

Eigen::Index locate_on_axis(const std::vector<double>& axis, double x) {
  if (axis.empty()) return -1;
  const double pitch = axis.size() > 1 ? std::abs(axis[1] - axis[0]) : 1.0;
  for (std::size_t k = 0; k < axis.size(); ++k) {
    if (std::abs(axis[k] - x) <= 1e-9 * pitch) return static_cast<Eigen::Index>(k);
  }
  return -1;
}

}  // namespace

DiscreteMeasure family_eval(const ParametricFamily& family, const Eigen::Vector2d& params) {
  if (!params.allFinite()) throw DomainError("family parameters must be finite");
  return std::visit(
      [&params](const auto& f) -> DiscreteMeasure {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, TwoAtomFamily>) {
          if (params.cwiseAbs().maxCoeff() > 1.0) {
            throw DomainError("two-atom parameter " + format_params(params) + " outside [-1, 1]^2");
          }
          return standard_measure(TwoAtom{params});
        } else {
          const double half_length = params(0);
          const double angle = params(1);
          if (half_length < 0.0 || half_length > 1.0 || angle < 0.0 || angle >= std::numbers::pi) {
            throw DomainError("segment parameter " + format_params(params) +
                              " outside [0, 1] x [0, pi)");
          }
          return standard_measure(SegmentGrid{Point::Zero(2), Eigen::Vector2d(std::cos(angle), std::sin(angle)),
                                              half_length, f.m});
        }
      },
      family);
}

double landscape_value(LandscapeDistance kind, const DiscreteMeasure& q, const DiscreteMeasure& p) {
  const auto metric = GroundMetric::euclidean();
  return kind == LandscapeDistance::kW1 ? wasserstein(q, p, metric, 1.0) : energy_distance_sq(q, p, metric);
}

std::vector<double> grid_axis(double lo, double hi, double pitch) {
  if (!(pitch > 0.0) || !(hi >= lo)) throw DomainError("grid axis needs pitch > 0 and hi >= lo");
  const double steps = (hi - lo) / pitch;
  const auto n = static_cast<long>(std::llround(steps));
  if (std::abs(steps - static_cast<double>(n)) > 1e-9 * std::max(1.0, steps)) {
    throw DomainError("grid axis: range is not a whole number of pitches");
  }
  std::vector<double> axis(static_cast<std::size_t>(n + 1));
  for (long k = 0; k <= n; ++k) {
    axis[static_cast<std::size_t>(k)] = n == 0 ? lo : lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(n);
  }
  return axis;
}

std::pair<Eigen::Index, Eigen::Index> LandscapeGrid::locate(const Eigen::Vector2d& p) const {
  const auto i = locate_on_axis(axis0, p(0));
  const auto j = locate_on_axis(axis1, p(1));
  if (i < 0 || j < 0) throw DomainError("point " + format_params(p) + " is not a grid node");
  return {i, j};
}

std::pair<Eigen::Index, Eigen::Index> LandscapeGrid::argmin() const {
  Eigen::Index i = 0, j = 0;
  values.minCoeff(&i, &j);
  return {i, j};
}

LandscapeGrid grid_scan(const ParametricFamily& family, const DiscreteMeasure& q, LandscapeDistance kind,
                        const std::vector<double>& axis0, const std::vector<double>& axis1,
                        unsigned threads) {
  if (axis0.empty() || axis1.empty()) throw DomainError("landscape grid is empty");
  LandscapeGrid grid{axis0, axis1, Eigen::MatrixXd(axis0.size(), axis1.size()), kind};
  const std::size_t cols = axis1.size();
  parallel_for(axis0.size() * cols, threads, [&](std::size_t cell) {
    const auto i = static_cast<Eigen::Index>(cell / cols);
    const auto j = static_cast<Eigen::Index>(cell % cols);
    grid.values(i, j) = landscape_value(kind, q, family_eval(family, grid.point(i, j)));
  });
  return grid;
}

LocalMinResult local_min_check(const LandscapeGrid& grid, Eigen::Index i, Eigen::Index j) {
  const auto rows = grid.values.rows();
  const auto cols = grid.values.cols();
  if (i < 0 || j < 0 || i >= rows || j >= cols) throw DomainError("grid index out of range");
  double margin = std::numeric_limits<double>::infinity();
  for (Eigen::Index di = -1; di <= 1; ++di) {
    for (Eigen::Index dj = -1; dj <= 1; ++dj) {
      if (di == 0 && dj == 0) continue;
      const auto a = i + di;
      const auto b = j + dj;
      if (a < 0 || b < 0 || a >= rows || b >= cols) continue;
      margin = std::min(margin, grid.values(a, b) - grid.values(i, j));
    }
  }
  return {margin > 0.0, margin};
}

LocalMinResult local_min_check(const LandscapeGrid& grid, const Eigen::Vector2d& point) {
  const auto [i, j] = grid.locate(point);
  return local_min_check(grid, i, j);
}

std::vector<std::pair<Eigen::Index, Eigen::Index>> strict_local_minima(const LandscapeGrid& grid) {
  std::vector<std::pair<Eigen::Index, Eigen::Index>> out;
  for (Eigen::Index i = 0; i < grid.values.rows(); ++i)
    for (Eigen::Index j = 0; j < grid.values.cols(); ++j)
      if (local_min_check(grid, i, j).is_local_min) out.emplace_back(i, j);
  return out;
}

MixtureConvexityReport mixture_convexity_check(const DiscreteMeasure& q, const DiscreteMeasure& p0,
                                               const DiscreteMeasure& p1, const Distance& distance,
                                               const std::vector<double>& t_grid) {
  const double d0 = distance(q, p0);
  const double d1 = distance(q, p1);
  MixtureConvexityReport report{-std::numeric_limits<double>::infinity()};
  for (double t : t_grid) {
    const double v = distance(q, mixture_at(p0, p1, t)) - ((1.0 - t) * d0 + t * d1);
    report.max_violation = std::max(report.max_violation, v);
  }
  if (t_grid.empty()) report.max_violation = 0.0;
  return report;
}

DisplacementProbeReport displacement_convexity_probe(const DisplacementProbeConfig& c) {
  if (!(c.angle0 > 0.0 && c.angle0 <= c.angle1 && c.angle1 < std::numbers::pi / 2)) {
    throw DomainError("probe angles must satisfy 0 < angle0 <= angle1 < pi/2");
  }
  if (!(c.half_length > 0.0 && c.half_length < 1.0)) throw DomainError("probe half-length must lie in (0, 1)");
  for (double t : c.t_grid) {
    if (!(t > 0.0 && t < 1.0)) throw DomainError("probe times must be interior");
  }
  if (c.t_grid.empty()) throw DomainError("probe needs at least one interior time");

  const SegmentFamily family{c.segment_points};
  const auto q = standard_measure(UniformCircleGrid{c.circle_points});
  const auto p0 = family_eval(family, {c.half_length, c.angle0});
  const auto p1 = family_eval(family, {c.half_length, c.angle1});
  const auto metric = GroundMetric::euclidean();
  const auto curve = displacement_curve(p0, p1, metric, 2.0);

  DisplacementProbeReport report;
  report.w1_start = wasserstein(q, p0, metric, 1.0);
  report.w1_end = wasserstein(q, p1, metric, 1.0);
  const double worst_end = std::max(report.w1_start, report.w1_end);
  report.interior_excess = std::numeric_limits<double>::infinity();
  double widest_interior = 0.0;
  const Eigen::Vector2d u0(std::cos(c.angle0), std::sin(c.angle0));
  const Eigen::Vector2d u1(std::cos(c.angle1), std::sin(c.angle1));
  for (double t : c.t_grid) {
    const double v = wasserstein(q, curve.eval(t), metric, 1.0);
    report.w1_interior.push_back(v);
    report.interior_excess = std::min(report.interior_excess, v - worst_end);
    widest_interior = std::max(widest_interior, ((1.0 - t) * u0 + t * u1).norm());
  }
  const double arc_pitch = 2.0 * std::numbers::pi / c.circle_points;
  const double segment_pitch = 2.0 * c.half_length / c.segment_points;
  const double interior_pitch = segment_pitch * widest_interior;
  report.discretization_bound = arc_pitch + 0.5 * (segment_pitch + interior_pitch);
  return report;
}

double expected_diameter(const DiscreteMeasure& q, const GroundMetric& metric) {
  auto mean_distance = [&](PointRef u0) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < q.size(); ++i) s += q.weight(i) * metric(q.atom(i), u0);
    return s;
  };
  double best = mean_distance(q.mean());
  for (Eigen::Index i = 0; i < q.size(); ++i) {
    if (q.weight(i) > 0.0) best = std::min(best, mean_distance(q.atom(i)));
  }
  return 2.0 * best;
}

AlmostConvexityReport almost_convexity_check(const DiscreteMeasure& q, const DiscreteMeasure& p0,
                                             const DiscreteMeasure& p1, const std::vector<double>& t_grid) {
  const auto metric = GroundMetric::euclidean();
  const auto curve = displacement_curve(p0, p1, metric, 1.0);
  const double w0 = wasserstein(q, p0, metric, 1.0);
  const double w1 = wasserstein(q, p1, metric, 1.0);
  AlmostConvexityReport report{-std::numeric_limits<double>::infinity(), expected_diameter(q, metric)};
  for (double t : t_grid) {
    const double bound = (1.0 - t) * w0 + t * w1 + 2.0 * t * (1.0 - t) * report.k_bound;
    report.max_excess_over_bound =
        std::max(report.max_excess_over_bound, wasserstein(q, curve.eval(t), metric, 1.0) - bound);
  }
  if (t_grid.empty()) report.max_excess_over_bound = 0.0;
  return report;
}

int level_set_components(const LandscapeGrid& grid, double level) {
  const auto rows = grid.values.rows();
  const auto cols = grid.values.cols();
  Eigen::Matrix<int, Eigen::Dynamic, Eigen::Dynamic> label =
      Eigen::Matrix<int, Eigen::Dynamic, Eigen::Dynamic>::Constant(rows, cols, -1);
  int components = 0;
  std::vector<std::pair<Eigen::Index, Eigen::Index>> stack;
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) {
      if (label(i, j) >= 0 || !(grid.values(i, j) <= level)) continue;
      label(i, j) = components;
      stack.emplace_back(i, j);
      while (!stack.empty()) {
        const auto [a, b] = stack.back();
        stack.pop_back();
        const std::pair<Eigen::Index, Eigen::Index> next[] = {{a - 1, b}, {a + 1, b}, {a, b - 1}, {a, b + 1}};
        for (const auto& [x, y] : next) {
          if (x < 0 || y < 0 || x >= rows || y >= cols) continue;
          if (label(x, y) >= 0 || !(grid.values(x, y) <= level)) continue;
          label(x, y) = components;
          stack.emplace_back(x, y);
        }
      }
      ++components;
    }
  }
  return components;
}

}  // namespace probdist
