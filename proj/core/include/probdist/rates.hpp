#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "probdist/measures.hpp"
#include "probdist/rng.hpp"

namespace probdist {

enum class RateDistance { kW1, kEnergySq };

// How E W1(Q_n, Q) is estimated for a continuous target.
//   kTwoSample: W1 between two independent n-samples. Within a factor two of
//               E W1(Q_n, Q), so it carries the same exponent.
//   kReference: W1 between an n-sample and one frozen reference sample of
//               reference_factor * max(ns) points per dimension.
enum class W1Estimator { kTwoSample, kReference };

struct RateSweepConfig {
  RateDistance distance = RateDistance::kW1;
  // Uniform sphere in R^dim for each entry; ignored when finite_target is set.
  std::vector<int> dims{4, 8};
  std::vector<int> ns{64, 128, 256, 512, 1024, 2048, 4096};
  int trials = 20;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  W1Estimator w1_estimator = W1Estimator::kTwoSample;
  int reference_factor = 8;
  // ED^2 needs a finite target. Without finite_target each sphere is replaced
  // by a frozen sample of this many points, and Q_n is drawn from that.
  int ed_target_atoms = 64;
  std::optional<DiscreteMeasure> finite_target;
};

struct RateRow {
  int dim;
  int n;
  int trial;
  double value;
};

struct SlopeFit {
  int dim = 0;
  double slope = 0.0;
  double slope_se = 0.0;
  double intercept = 0.0;
};

// ED^2 only: Monte Carlo mean at one n against the exact expectation.
struct BiasCheck {
  int dim;
  int n;
  double mean;
  double standard_error;
  double expected;
  bool within_3se;
};

struct RateReport {
  std::vector<RateRow> rows;
  std::vector<SlopeFit> slopes;
  std::vector<BiasCheck> bias_checks;
};

// Least squares fit of log(mean over trials) against log(n), per dimension.
RateReport rate_sweep(const RateSweepConfig& config);

// Least squares line through (x, y) with the standard error of the slope.
SlopeFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

// E ED^2(Q_n, P) by enumerating all size^n index tuples of the sample.
double expected_ed_sq_exact(const DiscreteMeasure& q, const DiscreteMeasure& p, int n,
                            const GroundMetric& metric = GroundMetric::euclidean());

struct MonteCarloEstimate {
  double mean = 0.0;
  double standard_error = 0.0;
  int trials = 0;
};

// Monte Carlo estimate of E ED^2(Q_n, P), one RNG substream per trial.
MonteCarloEstimate ed_sq_monte_carlo(const DiscreteMeasure& q, const DiscreteMeasure& p, int n, int trials,
                                     std::uint64_t seed, unsigned threads = 1,
                                     const GroundMetric& metric = GroundMetric::euclidean());

struct SphereReport {
  double mean_nearest = 0.0;
  double w1_to_dirac_empirical = 0.0;
  double w1_to_dirac_target = 1.0;
};

// n sample points and `probes` fresh points on the unit sphere of R^dim; the
// mean distance from a probe to its nearest sample point, and W1 of the
// sample (and of the sphere itself) to the Dirac at the origin.
SphereReport sphere_experiment(int dim, int n, int probes, std::uint64_t seed, unsigned threads = 1);

struct InequalityConfig {
  int atoms = 6;
  int dim = 2;
  int trials = 500;
  // Extra trials with two random Diracs.
  int dirac_trials = 100;
  std::uint64_t seed = 0;
  unsigned threads = 1;
};

struct InequalityRow {
  int trial;
  double ed_sq;
  double w1;
  double ratio;  // NaN for degenerate pairs (W1 = 0)
  bool dirac;
};

struct InequalityReport {
  std::vector<InequalityRow> rows;
  // max ED^2 / (2 W1) over non-degenerate trials.
  double max_ratio = 0.0;
  // max |ratio - 1| over the Dirac trials.
  double tightness_gap_at_diracs = 0.0;
  int degenerate = 0;
};

// Random pairs with atoms uniform in [-1, 1]^dim and random weights.
InequalityReport inequality_sweep(const InequalityConfig& config);

struct MinibatchReport {
  double mean_minibatch_w1 = 0.0;
  double minibatch_w1_se = 0.0;
  double true_w1 = 0.0;
  // Pairwise (U-statistic) ED^2 estimate; needs batch size >= 2.
  std::optional<double> ed_minibatch_mean;
  std::optional<double> ed_minibatch_se;
  double true_ed_sq = 0.0;
};

// `batches` independent pairs of k-samples from Q and P.
MinibatchReport minibatch_bias_experiment(const DiscreteMeasure& q, const DiscreteMeasure& p, int k, int batches,
                                          std::uint64_t seed, unsigned threads = 1);

// Unbiased estimate of ED^2 from two samples of size >= 2.
double ed_sq_u_statistic(const PointSet& x, const PointSet& y, const GroundMetric& metric = GroundMetric::euclidean());

}  // namespace probdist
