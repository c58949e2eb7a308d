#include "probdist/measures.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <numeric>
#include <sstream>

#include "probdist/errors.hpp"

namespace probdist {

namespace {

constexpr double kWeightInputTol = 1e-9;

struct LexLess {
  bool operator()(const std::vector<double>& a, const std::vector<double>& b) const {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
  }
};

std::vector<double> to_key(const auto& col) {
  return std::vector<double>(col.data(), col.data() + col.size());
}

}  // namespace

GroundMetric GroundMetric::euclidean_power(double beta) {
  if (!(beta > 0.0 && beta <= 2.0)) {
    throw DomainError("EuclideanPower exponent must lie in (0, 2], got " + std::to_string(beta));
  }
  return GroundMetric(Kind::kEuclideanPower, beta);
}

GroundMetric GroundMetric::euclidean_power_unrestricted(double beta) {
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    throw DomainError("EuclideanPower exponent must be positive");
  }
  return GroundMetric(Kind::kEuclideanPower, beta);
}

double GroundMetric::operator()(PointRef x, PointRef y) const {
  if (x.size() != y.size()) {
    throw DimensionMismatch("ground distance between points of dimension " +
                            std::to_string(x.size()) + " and " + std::to_string(y.size()));
  }
  if (kind_ == Kind::kL1) return (x - y).lpNorm<1>();
  if (beta_ == 2.0) return (x - y).squaredNorm();
  const double r = (x - y).norm();
  return beta_ == 1.0 ? r : std::pow(r, beta_);
}

std::string GroundMetric::name() const {
  if (kind_ == Kind::kL1) return "l1";
  if (beta_ == 1.0) return "euclidean";
  std::ostringstream os;
  os << "power:" << beta_;
  return os.str();
}

double ground_distance(const GroundMetric& metric, PointRef x, PointRef y) { return metric(x, y); }

DiscreteMeasure DiscreteMeasure::make(PointSet atoms, Eigen::VectorXd weights) {
  if (atoms.cols() == 0) throw DomainError("measure needs at least one atom");
  if (atoms.rows() < 1) throw DimensionMismatch("atoms must have dimension >= 1");
  if (atoms.cols() != weights.size()) {
    throw DimensionMismatch("got " + std::to_string(atoms.cols()) + " atoms but " +
                            std::to_string(weights.size()) + " weights");
  }
  if (!atoms.allFinite()) throw DomainError("atom coordinates must be finite");
  for (Eigen::Index i = 0; i < weights.size(); ++i) {
    if (!std::isfinite(weights(i))) throw DomainError("weights must be finite");
    if (weights(i) < 0.0) throw DomainError("negative weight at atom " + std::to_string(i));
  }
  const double total = weights.sum();
  if (total <= 0.0) throw DomainError("total weight is zero");
  if (std::abs(total - 1.0) > kWeightInputTol) {
    std::ostringstream os;
    os.precision(17);
    os << "weights sum to " << total << ", not 1";
    throw DomainError(os.str());
  }
  weights /= total;
  return DiscreteMeasure(std::move(atoms), std::move(weights));
}

DiscreteMeasure DiscreteMeasure::uniform(PointSet atoms) {
  const auto n = atoms.cols();
  if (n == 0) throw DomainError("measure needs at least one atom");
  return make(std::move(atoms), Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n)));
}

DiscreteMeasure DiscreteMeasure::dirac(const Point& x) {
  PointSet atoms(x.size(), 1);
  atoms.col(0) = x;
  return make(std::move(atoms), Eigen::VectorXd::Ones(1));
}

DiscreteMeasure DiscreteMeasure::merged() const {
  std::map<std::vector<double>, double, LexLess> acc;
  for (Eigen::Index i = 0; i < size(); ++i) acc[to_key(atoms_.col(i))] += weights_(i);
  PointSet atoms(dim(), static_cast<Eigen::Index>(acc.size()));
  Eigen::VectorXd w(static_cast<Eigen::Index>(acc.size()));
  Eigen::Index k = 0;
  for (const auto& [key, mass] : acc) {
    atoms.col(k) = Eigen::Map<const Eigen::VectorXd>(key.data(), dim());
    w(k) = mass;
    ++k;
  }
  return DiscreteMeasure(std::move(atoms), std::move(w));
}

DiscreteMeasure DiscreteMeasure::without_zero_weights() const {
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < size(); ++i)
    if (weights_(i) > 0.0) keep.push_back(i);
  PointSet atoms(dim(), static_cast<Eigen::Index>(keep.size()));
  Eigen::VectorXd w(static_cast<Eigen::Index>(keep.size()));
  for (std::size_t k = 0; k < keep.size(); ++k) {
    atoms.col(static_cast<Eigen::Index>(k)) = atoms_.col(keep[k]);
    w(static_cast<Eigen::Index>(k)) = weights_(keep[k]);
  }
  return DiscreteMeasure(std::move(atoms), std::move(w));
}

bool DiscreteMeasure::is_dirac() const { return merged().without_zero_weights().size() == 1; }

bool DiscreteMeasure::has_uniform_weights() const {
  const double u = 1.0 / static_cast<double>(size());
  return ((weights_.array() - u).abs() <= 1e-12).all();
}

Point DiscreteMeasure::mean() const { return atoms_ * weights_; }

DiscreteMeasure make_discrete(const std::vector<std::vector<double>>& points,
                              const std::vector<double>& weights) {
  if (points.empty()) throw DomainError("measure needs at least one atom");
  if (points.size() != weights.size()) {
    throw DimensionMismatch("got " + std::to_string(points.size()) + " atoms but " +
                            std::to_string(weights.size()) + " weights");
  }
  const auto dim = static_cast<Eigen::Index>(points.front().size());
  PointSet atoms(dim, static_cast<Eigen::Index>(points.size()));
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (static_cast<Eigen::Index>(points[i].size()) != dim) {
      throw DimensionMismatch("atom " + std::to_string(i) + " has dimension " +
                              std::to_string(points[i].size()) + ", expected " +
                              std::to_string(dim));
    }
    atoms.col(static_cast<Eigen::Index>(i)) =
        Eigen::Map<const Eigen::VectorXd>(points[i].data(), dim);
  }
  return DiscreteMeasure::make(
      std::move(atoms),
      Eigen::Map<const Eigen::VectorXd>(weights.data(), static_cast<Eigen::Index>(weights.size())));
}

bool same_measure(const DiscreteMeasure& a, const DiscreteMeasure& b, double tol) {
  if (a.dim() != b.dim()) return false;
  const auto ma = a.without_zero_weights().merged();
  const auto mb = b.without_zero_weights().merged();
  if (ma.size() != mb.size()) return false;
  return ma.atoms() == mb.atoms() && ((ma.weights() - mb.weights()).array().abs() <= tol).all();
}

namespace {

void require_positive_count(int m) {
  if (m < 1) throw DomainError("grid size m must be >= 1");
}

}  // namespace

DiscreteMeasure standard_measure(const StandardMeasureSpec& spec) {
  return std::visit(
      [](const auto& s) -> DiscreteMeasure {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, UniformCircleGrid>) {
          require_positive_count(s.m);
          PointSet atoms(2, s.m);
          for (int k = 0; k < s.m; ++k) {
            const double a = 2.0 * std::numbers::pi * k / s.m;
            atoms(0, k) = std::cos(a);
            atoms(1, k) = std::sin(a);
          }
          // Exact values at the quarter turns so that the 4-point grid is the
          // 4th roots of unity.
          for (int k = 0; k < s.m; ++k) {
            if ((4 * k) % s.m != 0) continue;
            switch ((4 * k) / s.m) {
              case 0: atoms.col(k) << 1.0, 0.0; break;
              case 1: atoms.col(k) << 0.0, 1.0; break;
              case 2: atoms.col(k) << -1.0, 0.0; break;
              case 3: atoms.col(k) << 0.0, -1.0; break;
            }
          }
          return DiscreteMeasure::uniform(std::move(atoms));
        } else if constexpr (std::is_same_v<T, SegmentGrid>) {
          require_positive_count(s.m);
          if (s.center.size() != s.direction.size()) {
            throw DimensionMismatch("segment center and direction differ in dimension");
          }
          if (std::abs(s.direction.norm() - 1.0) > 1e-12) {
            throw DomainError("segment direction must be a unit vector");
          }
          if (s.half_length < 0.0) throw DomainError("segment half-length must be >= 0");
          PointSet atoms(s.center.size(), s.m);
          for (int k = 0; k < s.m; ++k) {
            const double u = -s.half_length + 2.0 * s.half_length * (k + 0.5) / s.m;
            atoms.col(k) = s.center + u * s.direction;
          }
          return DiscreteMeasure::uniform(std::move(atoms));
        } else if constexpr (std::is_same_v<T, VerticalSegmentGrid>) {
          require_positive_count(s.m);
          PointSet atoms(2, s.m);
          for (int k = 0; k < s.m; ++k) {
            atoms(0, k) = s.theta;
            atoms(1, k) = (k + 0.5) / s.m;
          }
          return DiscreteMeasure::uniform(std::move(atoms));
        } else {
          PointSet atoms(s.theta.size(), 2);
          atoms.col(0) = s.theta;
          atoms.col(1) = -s.theta;
          return DiscreteMeasure::uniform(std::move(atoms));
        }
      },
      spec);
}

Point draw_point(const SamplerSpec& sampler, RngStream& rng) {
  return std::visit(
      [&rng](const auto& s) -> Point {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, UniformSphere>) {
          if (s.dim < 2) throw DomainError("sphere sampling needs dim >= 2");
          Point x(s.dim);
          double norm = 0.0;
          while (norm == 0.0) {
            for (int k = 0; k < s.dim; ++k) x(k) = rng.normal();
            norm = x.norm();
          }
          return x / norm;
        } else if constexpr (std::is_same_v<T, UniformCircle>) {
          const double a = rng.uniform(0.0, 2.0 * std::numbers::pi);
          return Point{{std::cos(a), std::sin(a)}};
        } else {
          if (s.a.size() != s.b.size()) throw DimensionMismatch("segment endpoints differ in dimension");
          const double u = rng.uniform();
          return ((1.0 - u) * s.a + u * s.b).eval();
        }
      },
      sampler);
}

DiscreteMeasure sample_measure(const SamplerSpec& sampler, int n, RngStream& rng) {
  if (n < 1) throw DomainError("sample size must be >= 1");
  Point first = draw_point(sampler, rng);
  PointSet atoms(first.size(), n);
  atoms.col(0) = first;
  for (int i = 1; i < n; ++i) atoms.col(i) = draw_point(sampler, rng);
  return DiscreteMeasure::uniform(std::move(atoms));
}

std::vector<Eigen::Index> sample_indices(const DiscreteMeasure& q, int n, RngStream& rng) {
  if (n < 1) throw DomainError("sample size must be >= 1");
  std::vector<double> cdf(static_cast<std::size_t>(q.size()));
  std::partial_sum(q.weights().begin(), q.weights().end(), cdf.begin());
  std::vector<Eigen::Index> out(static_cast<std::size_t>(n));
  for (auto& idx : out) {
    const double u = rng.uniform() * cdf.back();
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    // upper_bound never lands on a zero-weight atom.
    if (it == cdf.end()) --it;
    idx = static_cast<Eigen::Index>(it - cdf.begin());
    while (idx > 0 && q.weight(idx) == 0.0) --idx;
  }
  return out;
}

DiscreteMeasure sample_empirical(const DiscreteMeasure& q, int n, RngStream& rng) {
  const auto idx = sample_indices(q, n, rng);
  Eigen::VectorXd counts = Eigen::VectorXd::Zero(q.size());
  for (auto i : idx) counts(i) += 1.0;
  std::vector<Eigen::Index> support;
  for (Eigen::Index i = 0; i < q.size(); ++i)
    if (counts(i) > 0.0) support.push_back(i);
  PointSet atoms(q.dim(), static_cast<Eigen::Index>(support.size()));
  Eigen::VectorXd w(static_cast<Eigen::Index>(support.size()));
  for (std::size_t k = 0; k < support.size(); ++k) {
    atoms.col(static_cast<Eigen::Index>(k)) = q.atom(support[k]);
    w(static_cast<Eigen::Index>(k)) = counts(support[k]) / n;
  }
  return DiscreteMeasure::make(std::move(atoms), std::move(w));
}

}  // namespace probdist
