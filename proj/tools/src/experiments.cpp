#include "probdist/cli/experiments.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <sstream>

#include "probdist/distance.hpp"
#include "probdist/divergences.hpp"
#include "probdist/geodesics.hpp"
#include "probdist/kernels.hpp"
#include "probdist/landscapes.hpp"
#include "probdist/rates.hpp"
#include "probdist/transport.hpp"

namespace probdist::cli {

namespace {

constexpr std::uint64_t kFallbackSeed = 20240611;

const std::map<std::string, std::map<std::string, std::string>>& defaults_table() {
  static const std::map<std::string, std::map<std::string, std::string>> table{
      {"dist", {{"distance", "w"}, {"p", "1"}, {"metric", "euclidean"}, {"source", ""}, {"target", ""}}},
      {"landscape",
       {{"family", "two-atom"},
        {"target", "2,2"},
        {"distance", "w1"},
        {"pitch", "0.05"},
        {"segment-points", "50"},
        {"circle-points", "256"}}},
      {"geodesic-check",
       {{"curve", "mixture"},
        {"distance", "w1"},
        {"points", "11"},
        {"atoms", "5"},
        {"dim", "2"},
        {"source", ""},
        {"target", ""},
        {"tolerance", "1e-9"}}},
      {"convexity",
       {{"check", "mixture"},
        {"distance", "w1"},
        {"trials", "100"},
        {"atoms", "5"},
        {"dim", "2"},
        {"t-points", "11"},
        {"half-length", "0.7"},
        {"angle0-deg", "10"},
        {"angle1-deg", "60"},
        {"segment-points", "256"},
        {"circle-points", "1024"},
        {"t", "0.5"},
        {"tolerance", "1e-9"}}},
      {"rates",
       {{"distance", "w1"},
        {"dims", "4,8"},
        {"ns", "64,128,256,512,1024,2048,4096"},
        {"trials", "20"},
        {"estimator", "two-sample"},
        {"reference-factor", "8"},
        {"target-atoms", "64"}}},
      {"sphere", {{"dim", "128"}, {"n", "1024"}, {"probes", "1024"}}},
      {"inequality", {{"atoms", "6"}, {"dim", "2"}, {"trials", "500"}, {"dirac-trials", "100"}}},
      {"minibatch-bias", {{"instance", "crossing"}, {"source", ""}, {"target", ""}, {"k", "1"}, {"batches", "1000"}}},
  };
  return table;
}

class Params {
 public:
  Params(const std::string& experiment, const std::map<std::string, std::string>& overrides)
      : values_(experiment_defaults(experiment)) {
    for (const auto& [k, v] : overrides) {
      auto it = values_.find(k);
      if (it == values_.end()) throw ConfigError("unknown key '" + k + "' for experiment '" + experiment + "'");
      it->second = v;
    }
  }

  const std::string& str(const std::string& key) const { return values_.at(key); }

  double real(const std::string& key) const {
    const auto& s = str(key);
    try {
      std::size_t used = 0;
      const double v = std::stod(s, &used);
      if (used == s.size() && std::isfinite(v)) return v;
    } catch (const std::exception&) {
    }
    throw ConfigError("key '" + key + "' expects a number, got '" + s + "'");
  }

  int integer(const std::string& key, int min_value = 1) const {
    const auto& s = str(key);
    int v = 0;
    try {
      std::size_t used = 0;
      v = std::stoi(s, &used);
      if (used != s.size()) throw ConfigError("");
    } catch (const std::exception&) {
      throw ConfigError("key '" + key + "' expects an integer, got '" + s + "'");
    }
    if (v < min_value) throw ConfigError("key '" + key + "' must be >= " + std::to_string(min_value));
    return v;
  }

  std::vector<double> reals(const std::string& key) const {
    std::vector<double> out;
    std::stringstream ss(str(key));
    std::string item;
    while (std::getline(ss, item, ',')) {
      try {
        std::size_t used = 0;
        out.push_back(std::stod(item, &used));
        if (used != item.size()) throw ConfigError("");
      } catch (const std::exception&) {
        throw ConfigError("key '" + key + "' expects a comma-separated list of numbers");
      }
    }
    if (out.empty()) throw ConfigError("key '" + key + "' is empty");
    return out;
  }

  std::vector<int> integers(const std::string& key) const {
    std::vector<int> out;
    for (double v : reals(key)) {
      if (v != std::floor(v) || v < 1 || v > 1e9) throw ConfigError("key '" + key + "' expects positive integers");
      out.push_back(static_cast<int>(v));
    }
    return out;
  }

  std::string choice(const std::string& key, const std::vector<std::string>& allowed) const {
    const auto& s = str(key);
    for (const auto& a : allowed)
      if (a == s) return s;
    std::string list;
    for (const auto& a : allowed) list += (list.empty() ? "" : "|") + a;
    throw ConfigError("key '" + key + "' must be one of " + list + ", got '" + s + "'");
  }

 private:
  std::map<std::string, std::string> values_;
};

GroundMetric parse_metric(const std::string& name) {
  if (name == "euclidean") return GroundMetric::euclidean();
  if (name == "l1") return GroundMetric::l1();
  if (name.rfind("power:", 0) == 0) {
    try {
      return GroundMetric::euclidean_power(std::stod(name.substr(6)));
    } catch (const DomainError&) {
      throw;
    } catch (const std::exception&) {
    }
  }
  throw ConfigError("unknown metric '" + name + "' (euclidean, l1, power:BETA)");
}

DiscreteMeasure random_measure(int atoms, int dim, RngStream& rng) {
  PointSet x(dim, atoms);
  for (Eigen::Index k = 0; k < x.size(); ++k) x.data()[k] = rng.uniform(-1.0, 1.0);
  Eigen::VectorXd w(atoms);
  for (int k = 0; k < atoms; ++k) w(k) = rng.uniform(0.05, 1.0);
  return DiscreteMeasure::make(std::move(x), w / w.sum());
}

// File-backed pair when both paths are set, otherwise a random pair.
std::pair<DiscreteMeasure, DiscreteMeasure> measure_pair(const Params& params, RngStream& rng) {
  const auto& source = params.str("source");
  const auto& target = params.str("target");
  if (source.empty() != target.empty()) throw ConfigError("set both source and target, or neither");
  if (!source.empty()) return {read_measure_file(source), read_measure_file(target)};
  const int atoms = params.integer("atoms");
  const int dim = params.integer("dim");
  auto q = random_measure(atoms, dim, rng);
  auto p = random_measure(atoms, dim, rng);
  return {std::move(q), std::move(p)};
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

ExperimentResult run_dist(const Params& params) {
  const auto kind = params.choice("distance", {"w", "ed", "ed-sq", "tv", "kl", "reverse-kl", "gan-js"});
  if (params.str("source").empty() || params.str("target").empty()) {
    throw ConfigError("dist needs two measure files");
  }
  const auto q = read_measure_file(params.str("source"));
  const auto p = read_measure_file(params.str("target"));
  if (q.dim() != p.dim()) throw ConfigError("measure files differ in dimension");
  const auto metric = parse_metric(params.str("metric"));
  const double exponent = params.real("p");
  double value = 0.0;
  if (kind == "w") {
    if (!(exponent >= 1.0)) throw ConfigError("Wasserstein exponent p must be >= 1");
    value = wasserstein(q, p, metric, exponent);
  } else if (kind == "ed") {
    value = Distance::energy(metric)(q, p);
  } else if (kind == "ed-sq") {
    value = energy_distance_sq(q, p, metric);
  } else {
    value = f_divergence(parse_fdivergence(kind), q, p);
  }
  ExperimentResult r;
  r.table.columns = {"distance", "p", "value"};
  r.table.rows.push_back({kind, exponent, value});
  return r;
}

ExperimentResult run_landscape(const Params& params, unsigned threads) {
  const auto family_name = params.choice("family", {"two-atom", "segment"});
  const auto kind = params.choice("distance", {"w1", "ed"}) == "w1" ? LandscapeDistance::kW1 : LandscapeDistance::kEnergySq;
  const double pitch = params.real("pitch");
  ParametricFamily family;
  std::optional<DiscreteMeasure> q;
  std::vector<double> axis0, axis1;
  if (family_name == "two-atom") {
    const auto t = params.reals("target");
    if (t.size() != 2) throw ConfigError("two-atom target must have two coordinates");
    family = TwoAtomFamily{};
    q = standard_measure(TwoAtom{Eigen::Vector2d(t[0], t[1])});
    axis0 = axis1 = grid_axis(-1.0, 1.0, pitch);
  } else {
    family = SegmentFamily{params.integer("segment-points")};
    q = standard_measure(UniformCircleGrid{params.integer("circle-points")});
    axis0 = grid_axis(0.0, 1.0, pitch);
    const auto count = std::max(1L, std::lround(std::numbers::pi / pitch));
    for (long k = 0; k < count; ++k) axis1.push_back(std::numbers::pi * static_cast<double>(k) / static_cast<double>(count));
  }
  const auto grid = grid_scan(family, *q, kind, axis0, axis1, threads);

  ExperimentResult r;
  r.table.columns = {"theta1", "theta2", "value"};
  for (Eigen::Index i = 0; i < grid.values.rows(); ++i)
    for (Eigen::Index j = 0; j < grid.values.cols(); ++j)
      r.table.rows.push_back({grid.axis0[i], grid.axis1[j], grid.values(i, j)});
  const auto [bi, bj] = grid.argmin();
  r.summary["min"] = grid.values(bi, bj);
  r.summary["argmin"] = {grid.axis0[bi], grid.axis1[bj]};
  auto minima = nlohmann::json::array();
  for (const auto& [i, j] : strict_local_minima(grid)) {
    minima.push_back({{"theta", {grid.axis0[i], grid.axis1[j]}}, {"margin", local_min_check(grid, i, j).margin}});
  }
  r.summary["strict_local_minima"] = minima;
  r.summary["expected_diameter"] = expected_diameter(*q);
  if (grid.values.minCoeff() < -1e-12) r.violations.push_back("negative landscape value");
  return r;
}

ExperimentResult run_geodesic_check(const Params& params, std::uint64_t seed) {
  const auto curve_name = params.choice("curve", {"mixture", "displacement", "hybrid"});
  const auto dist_name = params.choice("distance", {"w1", "w2", "ed"});
  const double tol = params.real("tolerance");
  RngStream rng(seed, 0);
  const auto [p0, p1] = measure_pair(params, rng);
  const auto metric = GroundMetric::euclidean();
  const Distance distance = dist_name == "w1"   ? Distance::w1()
                            : dist_name == "w2" ? Distance::wasserstein(metric, 2.0)
                                                : Distance::energy();
  std::optional<Curve> curve;
  if (curve_name == "mixture") {
    curve = mixture_curve(p0, p1);
  } else if (curve_name == "displacement") {
    curve = displacement_curve(p0, p1, metric, dist_name == "w2" ? 2.0 : 1.0);
  } else {
    const auto plan = solve_exact_ot(p0, p1, metric, 1.0).plan;
    const auto entries = plan_entries(plan);
    std::vector<GrainSchedule> schedule;
    for (std::size_t e = 0; e < entries.size(); ++e) {
      schedule.push_back(e % 3 == 0 ? GrainSchedule::displace() : e % 3 == 1 ? GrainSchedule::mixture() : GrainSchedule::smear(3));
    }
    curve = hybrid_curve(plan, schedule);
  }
  const auto report = constant_speed_check(*curve, distance, uniform_grid(params.integer("points", 2)));

  ExperimentResult r;
  r.table.columns = {"t", "t_prime", "violation"};
  for (const auto& row : report.rows) r.table.rows.push_back({row.t, row.t_prime, row.violation});
  r.summary["max_violation"] = report.max_violation;
  r.summary["endpoint_distance"] = report.endpoint_distance;
  const bool geodesic = (curve_name == "mixture" && dist_name != "w2") ||
                        (curve_name == "displacement" && dist_name != "ed") ||
                        (curve_name == "hybrid" && dist_name == "w1");
  r.summary["expected_constant_speed"] = geodesic;
  if (geodesic && report.max_violation > tol) {
    r.violations.push_back(curve_name + " curve is not constant-speed under " + dist_name + ": " + fmt(report.max_violation));
  }
  return r;
}

ExperimentResult run_convexity(const Params& params, std::uint64_t seed) {
  const auto check = params.choice("check", {"mixture", "almost", "probe"});
  const double tol = params.real("tolerance");
  ExperimentResult r;
  r.table.columns = {"check", "trial", "value"};
  if (check == "probe") {
    DisplacementProbeConfig c;
    c.half_length = params.real("half-length");
    c.angle0 = params.real("angle0-deg") * std::numbers::pi / 180.0;
    c.angle1 = params.real("angle1-deg") * std::numbers::pi / 180.0;
    c.segment_points = params.integer("segment-points");
    c.circle_points = params.integer("circle-points");
    c.t_grid = params.reals("t");
    const auto rep = displacement_convexity_probe(c);
    r.table.rows.push_back({std::string("w1_start"), 0LL, rep.w1_start});
    r.table.rows.push_back({std::string("w1_end"), 0LL, rep.w1_end});
    for (std::size_t k = 0; k < rep.w1_interior.size(); ++k) {
      r.table.rows.push_back({std::string("w1_interior"), static_cast<long long>(k), rep.w1_interior[k]});
    }
    r.table.rows.push_back({std::string("interior_excess"), 0LL, rep.interior_excess});
    r.table.rows.push_back({std::string("discretization_bound"), 0LL, rep.discretization_bound});
    r.summary["interior_excess"] = rep.interior_excess;
    r.summary["discretization_bound"] = rep.discretization_bound;
    if (!(rep.interior_excess > rep.discretization_bound)) {
      r.violations.push_back("interior excess " + fmt(rep.interior_excess) + " does not exceed the discretization bound " +
                             fmt(rep.discretization_bound));
    }
    return r;
  }

  const int trials = params.integer("trials");
  const int atoms = params.integer("atoms");
  const int dim = params.integer("dim");
  const auto grid = uniform_grid(params.integer("t-points", 2));
  const Distance distance =
      params.choice("distance", {"w1", "ed"}) == "w1" ? Distance::w1() : Distance::energy();
  const RngStream base(seed, 0);
  double worst = -std::numeric_limits<double>::infinity();
  for (int t = 0; t < trials; ++t) {
    auto rng = base.substream(static_cast<std::uint64_t>(t));
    const auto q = random_measure(atoms, dim, rng);
    const auto p0 = random_measure(atoms, dim, rng);
    const auto p1 = random_measure(atoms, dim, rng);
    const double v = check == "mixture" ? mixture_convexity_check(q, p0, p1, distance, grid).max_violation
                                        : almost_convexity_check(q, p0, p1, grid).max_excess_over_bound;
    r.table.rows.push_back({check, static_cast<long long>(t), v});
    worst = std::max(worst, v);
  }
  r.summary["max_value"] = worst;
  if (worst > tol) r.violations.push_back(check + " convexity bound exceeded by " + fmt(worst));
  return r;
}

ExperimentResult run_rates(const Params& params, std::uint64_t seed, unsigned threads) {
  RateSweepConfig c;
  c.distance = params.choice("distance", {"w1", "ed"}) == "w1" ? RateDistance::kW1 : RateDistance::kEnergySq;
  c.dims = params.integers("dims");
  c.ns = params.integers("ns");
  c.trials = params.integer("trials");
  c.w1_estimator = params.choice("estimator", {"two-sample", "reference"}) == "two-sample" ? W1Estimator::kTwoSample
                                                                                         : W1Estimator::kReference;
  c.reference_factor = params.integer("reference-factor");
  c.ed_target_atoms = params.integer("target-atoms", 2);
  c.seed = seed;
  c.threads = threads;
  const auto report = rate_sweep(c);

  ExperimentResult r;
  r.table.columns = {"dim", "n", "trial", "value"};
  for (const auto& row : report.rows) {
    r.table.rows.push_back({static_cast<long long>(row.dim), static_cast<long long>(row.n),
                            static_cast<long long>(row.trial), row.value});
  }
  auto slopes = nlohmann::json::array();
  for (const auto& s : report.slopes) {
    slopes.push_back({{"dim", s.dim}, {"slope", s.slope}, {"slope_se", s.slope_se}, {"intercept", s.intercept}});
  }
  r.summary["slopes"] = slopes;
  auto bias = nlohmann::json::array();
  for (const auto& b : report.bias_checks) {
    bias.push_back({{"dim", b.dim}, {"n", b.n}, {"mean", b.mean}, {"standard_error", b.standard_error},
                    {"expected", b.expected}, {"within_3se", b.within_3se}});
    if (!b.within_3se) {
      r.violations.push_back("ED^2 mean at dim " + std::to_string(b.dim) + ", n " + std::to_string(b.n) +
                             " is more than 3 SE from the exact bias");
    }
  }
  r.summary["bias_checks"] = bias;
  return r;
}

ExperimentResult quantity_table(const std::vector<std::pair<std::string, double>>& rows) {
  ExperimentResult r;
  r.table.columns = {"quantity", "value"};
  for (const auto& [k, v] : rows) {
    r.table.rows.push_back({k, v});
    r.summary[k] = v;
  }
  return r;
}

ExperimentResult run_sphere(const Params& params, std::uint64_t seed, unsigned threads) {
  const auto rep = sphere_experiment(params.integer("dim", 2), params.integer("n"), params.integer("probes"), seed, threads);
  auto r = quantity_table({{"mean_nearest", rep.mean_nearest},
                           {"w1_to_dirac_empirical", rep.w1_to_dirac_empirical},
                           {"w1_to_dirac_target", rep.w1_to_dirac_target}});
  if (std::abs(rep.w1_to_dirac_empirical - 1.0) > 1e-12) {
    r.violations.push_back("W1 of the sample to the origin is " + fmt(rep.w1_to_dirac_empirical) + ", not 1");
  }
  return r;
}

ExperimentResult run_inequality(const Params& params, std::uint64_t seed, unsigned threads) {
  InequalityConfig c;
  c.atoms = params.integer("atoms");
  c.dim = params.integer("dim");
  c.trials = params.integer("trials", 0);
  c.dirac_trials = params.integer("dirac-trials", 0);
  c.seed = seed;
  c.threads = threads;
  const auto rep = inequality_sweep(c);
  ExperimentResult r;
  r.table.columns = {"trial", "ed_sq", "w1", "ratio"};
  for (const auto& row : rep.rows) r.table.rows.push_back({static_cast<long long>(row.trial), row.ed_sq, row.w1, row.ratio});
  r.summary["max_ratio"] = rep.max_ratio;
  r.summary["tightness_gap_at_diracs"] = rep.tightness_gap_at_diracs;
  r.summary["degenerate"] = rep.degenerate;
  if (rep.max_ratio > 1.0 + 1e-9) r.violations.push_back("ED^2 / (2 W1) reached " + fmt(rep.max_ratio));
  if (rep.tightness_gap_at_diracs > 1e-12) {
    r.violations.push_back("Dirac pairs miss equality by " + fmt(rep.tightness_gap_at_diracs));
  }
  return r;
}

ExperimentResult run_minibatch(const Params& params, std::uint64_t seed, unsigned threads) {
  const auto instance = params.choice("instance", {"crossing", "files"});
  std::optional<DiscreteMeasure> q, p;
  if (instance == "crossing") {
    q = p = make_discrete({{0.0}, {1.0}}, {0.5, 0.5});
  } else {
    if (params.str("source").empty() || params.str("target").empty()) {
      throw ConfigError("instance=files needs source and target");
    }
    q = read_measure_file(params.str("source"));
    p = read_measure_file(params.str("target"));
  }
  const int k = params.integer("k");
  const auto rep = minibatch_bias_experiment(*q, *p, k, params.integer("batches"), seed, threads);
  std::vector<std::pair<std::string, double>> rows{{"mean_minibatch_w1", rep.mean_minibatch_w1},
                                                   {"minibatch_w1_se", rep.minibatch_w1_se},
                                                   {"true_w1", rep.true_w1}};
  if (rep.ed_minibatch_mean) {
    rows.emplace_back("ed_minibatch_mean", *rep.ed_minibatch_mean);
    rows.emplace_back("ed_minibatch_se", *rep.ed_minibatch_se);
  }
  rows.emplace_back("true_ed_sq", rep.true_ed_sq);
  auto r = quantity_table(rows);
  if (rep.mean_minibatch_w1 < rep.true_w1 - 3.0 * rep.minibatch_w1_se) {
    r.violations.push_back("minibatch W1 mean falls more than 3 SE below the true W1");
  }
  if (rep.ed_minibatch_mean && std::abs(*rep.ed_minibatch_mean - rep.true_ed_sq) > 3.0 * *rep.ed_minibatch_se) {
    r.violations.push_back("minibatch ED^2 mean is more than 3 SE from the true ED^2");
  }
  return r;
}

std::string cell_text(const Cell& c) {
  if (const auto* i = std::get_if<long long>(&c)) return std::to_string(*i);
  if (const auto* d = std::get_if<double>(&c)) return fmt(*d);
  return std::get<std::string>(c);
}

nlohmann::json cell_json(const Cell& c) {
  if (const auto* i = std::get_if<long long>(&c)) return *i;
  if (const auto* d = std::get_if<double>(&c)) {
    if (std::isfinite(*d)) return *d;
    return nullptr;
  }
  return std::get<std::string>(c);
}

}  // namespace

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names{"dist",   "landscape",  "geodesic-check", "convexity",
                                              "rates",  "sphere",     "inequality",     "minibatch-bias"};
  return names;
}

const std::map<std::string, std::string>& experiment_defaults(const std::string& experiment) {
  const auto& table = defaults_table();
  const auto it = table.find(experiment);
  if (it == table.end()) throw ConfigError("unknown experiment '" + experiment + "'");
  return it->second;
}

std::uint64_t default_seed() {
  if (const char* env = std::getenv("PROBDIST_SEED")) {
    try {
      std::size_t used = 0;
      const auto v = std::stoull(env, &used);
      if (used == std::string(env).size()) return v;
    } catch (const std::exception&) {
    }
  }
  return kFallbackSeed;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  const Params params(config.experiment, config.params);
  const unsigned threads = std::max(1u, config.threads);
  try {
    const auto& e = config.experiment;
    if (e == "dist") return run_dist(params);
    if (e == "landscape") return run_landscape(params, threads);
    if (e == "geodesic-check") return run_geodesic_check(params, config.seed);
    if (e == "convexity") return run_convexity(params, config.seed);
    if (e == "rates") return run_rates(params, config.seed, threads);
    if (e == "sphere") return run_sphere(params, config.seed, threads);
    if (e == "inequality") return run_inequality(params, config.seed, threads);
    return run_minibatch(params, config.seed, threads);
  } catch (const DomainError& err) {
    throw ConfigError(err.what());
  } catch (const DimensionMismatch& err) {
    throw ConfigError(err.what());
  }
}

std::string format_csv(const Table& table) {
  std::string out;
  for (std::size_t c = 0; c < table.columns.size(); ++c) out += (c ? "," : "") + table.columns[c];
  out += '\n';
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) out += (c ? "," : "") + cell_text(row[c]);
    out += '\n';
  }
  return out;
}

std::string format_json(const ExperimentConfig& config, const ExperimentResult& result) {
  nlohmann::json doc;
  doc["experiment"] = config.experiment;
  doc["seed"] = config.seed;
  nlohmann::json params = experiment_defaults(config.experiment);
  for (const auto& [k, v] : config.params) params[k] = v;
  doc["params"] = params;
  doc["columns"] = result.table.columns;
  auto rows = nlohmann::json::array();
  for (const auto& row : result.table.rows) {
    auto j = nlohmann::json::array();
    for (const auto& c : row) j.push_back(cell_json(c));
    rows.push_back(std::move(j));
  }
  doc["rows"] = std::move(rows);
  doc["summary"] = result.summary;
  doc["violations"] = result.violations;
  return doc.dump(2) + "\n";
}

int run(const ExperimentConfig& config, std::ostream& out, std::ostream& err) {
  ExperimentResult result;
  try {
    result = run_experiment(config);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const SolverFailure& e) {
    err << "solver failure: " << e.what() << '\n';
    return kExitSolverFailure;
  }
  const auto text = config.format == OutputFormat::kCsv ? format_csv(result.table) : format_json(config, result);
  if (config.output) {
    std::ofstream file(*config.output, std::ios::binary);
    if (!file) {
      err << "config error: cannot write " << *config.output << '\n';
      return kExitConfigError;
    }
    file << text;
  } else {
    out << text;
  }
  for (const auto& v : result.violations) err << "invariant violation: " << v << '\n';
  return result.violations.empty() ? kExitOk : kExitInvariantViolation;
}

DiscreteMeasure parse_measure(std::istream& in, const std::string& origin) {
  std::vector<std::vector<double>> points;
  std::vector<double> weights;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::vector<double> fields;
    std::string tok;
    while (ls >> tok) {
      try {
        std::size_t used = 0;
        fields.push_back(std::stod(tok, &used));
        if (used != tok.size()) throw ConfigError("");
      } catch (const std::exception&) {
        throw ConfigError(origin + ":" + std::to_string(line_no) + ": not a number: '" + tok + "'");
      }
    }
    if (fields.empty()) continue;
    if (fields.size() < 2) throw ConfigError(origin + ":" + std::to_string(line_no) + ": expected 'w x1 ... xdim'");
    if (!points.empty() && fields.size() - 1 != points.front().size()) {
      throw ConfigError(origin + ":" + std::to_string(line_no) + ": dimension differs from the first atom");
    }
    weights.push_back(fields.front());
    points.emplace_back(fields.begin() + 1, fields.end());
  }
  if (points.empty()) throw ConfigError(origin + ": no atoms");
  try {
    return make_discrete(points, weights);
  } catch (const Error& e) {
    throw ConfigError(origin + ": " + e.what());
  }
}

DiscreteMeasure read_measure_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read measure file " + path);
  return parse_measure(in, path);
}

}  // namespace probdist::cli
