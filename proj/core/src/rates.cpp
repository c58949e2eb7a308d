#include "probdist/rates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "probdist/errors.hpp"
#include "probdist/kernels.hpp"
#include "probdist/parallel.hpp"
#include "probdist/transport.hpp"

namespace probdist {

namespace {

MonteCarloEstimate summarize(const std::vector<double>& values) {
  MonteCarloEstimate out;
  out.trials = static_cast<int>(values.size());
  if (values.empty()) return out;
  double sum = 0.0;
  for (double v : values) sum += v;
  out.mean = sum / static_cast<double>(values.size());
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - out.mean) * (v - out.mean);
    out.standard_error = std::sqrt(ss / static_cast<double>(values.size() - 1) / static_cast<double>(values.size()));
  }
  return out;
}

PointSet gather(const DiscreteMeasure& q, const std::vector<Eigen::Index>& idx) {
  PointSet out(q.dim(), static_cast<Eigen::Index>(idx.size()));
  for (std::size_t k = 0; k < idx.size(); ++k) out.col(static_cast<Eigen::Index>(k)) = q.atom(idx[k]);
  return out;
}

void validate_sweep(const RateSweepConfig& c) {
  if (c.ns.empty()) throw DomainError("rate sweep needs at least one sample size");
  if (!c.finite_target && c.dims.empty()) throw DomainError("rate sweep needs at least one dimension");
  for (std::size_t k = 0; k < c.ns.size(); ++k) {
    if (c.ns[k] < 1) throw DomainError("sample sizes must be positive");
    if (k > 0 && c.ns[k] <= c.ns[k - 1]) throw DomainError("sample sizes must be increasing");
  }
  if (c.trials < 10) throw DomainError("rate sweep needs at least 10 trials");
  if (c.distance == RateDistance::kW1 && c.finite_target) {
    throw DomainError("the W1 sweep samples a continuous sphere; finite targets are for ED^2");
  }
  if (c.reference_factor < 8) throw DomainError("reference sample must be at least 8x the largest n");
  if (c.ed_target_atoms < 2) throw DomainError("ED^2 target needs at least two atoms");
}

}  // namespace

SlopeFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw DomainError("line fit needs two or more points");
  const auto n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    mx += x[k];
    my += y[k];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    sxx += (x[k] - mx) * (x[k] - mx);
    sxy += (x[k] - mx) * (y[k] - my);
  }
  if (sxx <= 0.0) throw DomainError("line fit needs distinct abscissae");
  SlopeFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  if (x.size() > 2) {
    double rss = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
      const double r = y[k] - fit.intercept - fit.slope * x[k];
      rss += r * r;
    }
    fit.slope_se = std::sqrt(rss / (n - 2.0) / sxx);
  }
  return fit;
}

RateReport rate_sweep(const RateSweepConfig& c) {
  validate_sweep(c);
  const RngStream base(c.seed, 0);
  const bool ed = c.distance == RateDistance::kEnergySq;
  const std::vector<int> dims = c.finite_target ? std::vector<int>{static_cast<int>(c.finite_target->dim())} : c.dims;

  struct DimContext {
    int dim;
    std::optional<DiscreteMeasure> target;
    double bias = 0.0;
  };
  std::vector<DimContext> contexts;
  for (std::size_t di = 0; di < dims.size(); ++di) {
    DimContext ctx{dims[di], std::nullopt};
    auto setup = base.substream(di).substream(0);
    if (c.finite_target) {
      ctx.target = *c.finite_target;
    } else {
      if (dims[di] < 2) throw DomainError("sphere dimension must be >= 2");
      if (ed) {
        ctx.target = sample_measure(UniformSphere{dims[di]}, c.ed_target_atoms, setup);
      } else if (c.w1_estimator == W1Estimator::kReference) {
        ctx.target = sample_measure(UniformSphere{dims[di]}, c.reference_factor * c.ns.back(), setup);
      }
    }
    if (ed) ctx.bias = ed_bias_exact(*ctx.target, GroundMetric::euclidean());
    contexts.push_back(std::move(ctx));
  }

  const std::size_t per_dim = c.ns.size() * static_cast<std::size_t>(c.trials);
  std::vector<double> values(dims.size() * per_dim);
  const auto metric = GroundMetric::euclidean();
  // Largest tasks first so that the tail of the pool stays busy.
  parallel_for(values.size(), c.threads, [&](std::size_t task) {
    const std::size_t cell = values.size() - 1 - task;
    const std::size_t di = cell / per_dim;
    const std::size_t ni = (cell % per_dim) / static_cast<std::size_t>(c.trials);
    const std::size_t trial = cell % static_cast<std::size_t>(c.trials);
    const auto& ctx = contexts[di];
    const int n = c.ns[ni];
    auto rng = base.substream(di).substream(ni + 1).substream(trial);
    double v = 0.0;
    if (ed) {
      v = energy_distance_sq(sample_empirical(*ctx.target, n, rng), *ctx.target, metric);
    } else {
      const UniformSphere sphere{ctx.dim};
      const auto a = sample_measure(sphere, n, rng);
      if (c.w1_estimator == W1Estimator::kReference) {
        v = wasserstein(a, *ctx.target, metric, 1.0);
      } else {
        v = wasserstein(a, sample_measure(sphere, n, rng), metric, 1.0);
      }
    }
    values[cell] = v;
  });

  RateReport report;
  for (std::size_t di = 0; di < dims.size(); ++di) {
    std::vector<double> log_n, log_mean;
    for (std::size_t ni = 0; ni < c.ns.size(); ++ni) {
      std::vector<double> cell_values;
      for (int trial = 0; trial < c.trials; ++trial) {
        const double v = values[di * per_dim + ni * static_cast<std::size_t>(c.trials) + static_cast<std::size_t>(trial)];
        report.rows.push_back({dims[di], c.ns[ni], trial, v});
        cell_values.push_back(v);
      }
      const auto est = summarize(cell_values);
      log_n.push_back(std::log(static_cast<double>(c.ns[ni])));
      log_mean.push_back(std::log(est.mean));
      if (ed) {
        const double expected = contexts[di].bias / c.ns[ni];
        report.bias_checks.push_back({dims[di], c.ns[ni], est.mean, est.standard_error, expected,
                                      std::abs(est.mean - expected) <= 3.0 * est.standard_error});
      }
    }
    if (c.ns.size() >= 2) {
      auto fit = fit_line(log_n, log_mean);
      fit.dim = dims[di];
      report.slopes.push_back(fit);
    }
  }
  return report;
}

double expected_ed_sq_exact(const DiscreteMeasure& q, const DiscreteMeasure& p, int n, const GroundMetric& metric) {
  if (n < 1) throw DomainError("sample size must be positive");
  const double tuples = std::pow(static_cast<double>(q.size()), n);
  if (tuples > 1e7) throw DomainError("exact enumeration limited to 1e7 sample tuples");
  std::vector<Eigen::Index> idx(static_cast<std::size_t>(n), 0);
  double total = 0.0;
  for (;;) {
    double prob = 1.0;
    Eigen::VectorXd counts = Eigen::VectorXd::Zero(q.size());
    for (auto i : idx) {
      prob *= q.weight(i);
      counts(i) += 1.0;
    }
    if (prob > 0.0) {
      const auto qn = DiscreteMeasure::make(q.atoms(), counts / n).without_zero_weights();
      total += prob * energy_distance_sq(qn, p, metric);
    }
    std::size_t k = 0;
    while (k < idx.size() && ++idx[k] == q.size()) idx[k++] = 0;
    if (k == idx.size()) break;
  }
  return total;
}

MonteCarloEstimate ed_sq_monte_carlo(const DiscreteMeasure& q, const DiscreteMeasure& p, int n, int trials,
                                     std::uint64_t seed, unsigned threads, const GroundMetric& metric) {
  if (n < 1 || trials < 2) throw DomainError("Monte Carlo needs n >= 1 and at least two trials");
  const RngStream base(seed, 0);
  std::vector<double> values(static_cast<std::size_t>(trials));
  parallel_for(values.size(), threads, [&](std::size_t t) {
    auto rng = base.substream(t);
    values[t] = energy_distance_sq(sample_empirical(q, n, rng), p, metric);
  });
  return summarize(values);
}

SphereReport sphere_experiment(int dim, int n, int probes, std::uint64_t seed, unsigned threads) {
  if (dim < 2 || n < 1 || probes < 1) throw DomainError("sphere experiment needs dim >= 2, n >= 1, probes >= 1");
  const RngStream base(seed, 0);
  auto sample_rng = base.substream(0);
  auto probe_rng = base.substream(1);
  const auto sample = sample_measure(UniformSphere{dim}, n, sample_rng);
  const auto probe = sample_measure(UniformSphere{dim}, probes, probe_rng);

  std::vector<double> nearest(static_cast<std::size_t>(probes));
  parallel_for(nearest.size(), threads, [&](std::size_t k) {
    const auto x = probe.atom(static_cast<Eigen::Index>(k));
    nearest[k] = (sample.atoms().colwise() - x).colwise().norm().minCoeff();
  });
  SphereReport report;
  double sum = 0.0;
  for (double v : nearest) sum += v;
  report.mean_nearest = sum / probes;
  report.w1_to_dirac_empirical =
      wasserstein(sample, DiscreteMeasure::dirac(Point::Zero(dim)), GroundMetric::euclidean(), 1.0);
  report.w1_to_dirac_target = 1.0;
  return report;
}

InequalityReport inequality_sweep(const InequalityConfig& c) {
  if (c.atoms < 1 || c.dim < 1 || c.trials < 0 || c.dirac_trials < 0) {
    throw DomainError("inequality sweep needs positive atoms and dim and nonnegative trial counts");
  }
  const RngStream base(c.seed, 0);
  const auto metric = GroundMetric::euclidean();
  const int total = c.trials + c.dirac_trials;
  std::vector<InequalityRow> rows(static_cast<std::size_t>(total));
  parallel_for(rows.size(), c.threads, [&](std::size_t t) {
    auto rng = base.substream(t);
    const bool dirac = static_cast<int>(t) >= c.trials;
    const int atoms = dirac ? 1 : c.atoms;
    auto draw = [&] {
      PointSet x(c.dim, atoms);
      for (Eigen::Index k = 0; k < x.size(); ++k) x.data()[k] = rng.uniform(-1.0, 1.0);
      Eigen::VectorXd w(atoms);
      for (int k = 0; k < atoms; ++k) w(k) = rng.uniform(0.05, 1.0);
      return DiscreteMeasure::make(std::move(x), w / w.sum());
    };
    const auto q = draw();
    const auto p = draw();
    const double ed = energy_distance_sq(q, p, metric);
    const double w1 = wasserstein(q, p, metric, 1.0);
    const double ratio = w1 > 0.0 ? ed / (2.0 * w1) : std::numeric_limits<double>::quiet_NaN();
    rows[t] = {static_cast<int>(t), ed, w1, ratio, dirac};
  });

  InequalityReport report;
  report.rows = std::move(rows);
  for (const auto& r : report.rows) {
    if (std::isnan(r.ratio)) {
      ++report.degenerate;
      continue;
    }
    report.max_ratio = std::max(report.max_ratio, r.ratio);
    if (r.dirac) report.tightness_gap_at_diracs = std::max(report.tightness_gap_at_diracs, std::abs(r.ratio - 1.0));
  }
  return report;
}

double ed_sq_u_statistic(const PointSet& x, const PointSet& y, const GroundMetric& metric) {
  const auto n = x.cols();
  const auto m = y.cols();
  if (n < 2 || m < 2) throw DomainError("pairwise ED^2 estimate needs two or more points per sample");
  if (x.rows() != y.rows()) throw DimensionMismatch("samples differ in dimension");
  double cross = 0.0, within_x = 0.0, within_y = 0.0;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < m; ++j) cross += metric(x.col(i), y.col(j));
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j) within_x += metric(x.col(i), x.col(j));
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = i + 1; j < m; ++j) within_y += metric(y.col(i), y.col(j));
  const auto dn = static_cast<double>(n);
  const auto dm = static_cast<double>(m);
  return 2.0 * cross / (dn * dm) - 2.0 * within_x / (dn * (dn - 1.0)) - 2.0 * within_y / (dm * (dm - 1.0));
}

MinibatchReport minibatch_bias_experiment(const DiscreteMeasure& q, const DiscreteMeasure& p, int k, int batches,
                                          std::uint64_t seed, unsigned threads) {
  if (k < 1 || k > 512) throw DomainError("minibatch size must lie in [1, 512]");
  if (batches < 100) throw DomainError("minibatch experiment needs at least 100 batches");
  if (q.dim() != p.dim()) throw DimensionMismatch("minibatch measures differ in dimension");
  const auto metric = GroundMetric::euclidean();
  const RngStream base(seed, 0);
  std::vector<double> w1(static_cast<std::size_t>(batches));
  std::vector<double> ed(static_cast<std::size_t>(batches));
  parallel_for(w1.size(), threads, [&](std::size_t b) {
    auto rng = base.substream(b);
    const auto x = gather(q, sample_indices(q, k, rng));
    const auto y = gather(p, sample_indices(p, k, rng));
    w1[b] = wasserstein(DiscreteMeasure::uniform(x), DiscreteMeasure::uniform(y), metric, 1.0);
    if (k >= 2) ed[b] = ed_sq_u_statistic(x, y, metric);
  });

  MinibatchReport report;
  const auto w1_est = summarize(w1);
  report.mean_minibatch_w1 = w1_est.mean;
  report.minibatch_w1_se = w1_est.standard_error;
  report.true_w1 = wasserstein(q, p, metric, 1.0);
  report.true_ed_sq = energy_distance_sq(q, p, metric);
  if (k >= 2) {
    const auto ed_est = summarize(ed);
    report.ed_minibatch_mean = ed_est.mean;
    report.ed_minibatch_se = ed_est.standard_error;
  }
  return report;
}

}  // namespace probdist
