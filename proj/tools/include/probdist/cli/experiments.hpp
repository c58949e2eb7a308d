#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "probdist/errors.hpp"
#include "probdist/measures.hpp"

namespace probdist::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitConfigError = 2,
  kExitInvariantViolation = 3,
  kExitSolverFailure = 4,
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

enum class OutputFormat { kCsv, kJson };

struct ExperimentConfig {
  std::string experiment;
  // Overrides of the experiment's documented defaults; unknown keys are
  // rejected.
  std::map<std::string, std::string> params;
  std::uint64_t seed = 0;
  std::optional<std::string> output;
  OutputFormat format = OutputFormat::kCsv;
  unsigned threads = 1;
};

using Cell = std::variant<long long, double, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

struct ExperimentResult {
  Table table;
  nlohmann::json summary = nlohmann::json::object();
  // Human-readable descriptions of every invariant that failed.
  std::vector<std::string> violations;
};

const std::vector<std::string>& experiment_names();
// Known keys with their default values.
const std::map<std::string, std::string>& experiment_defaults(const std::string& experiment);

// PROBDIST_SEED when set and valid, else a fixed default.
std::uint64_t default_seed();

ExperimentResult run_experiment(const ExperimentConfig& config);

std::string format_csv(const Table& table);
std::string format_json(const ExperimentConfig& config, const ExperimentResult& result);

// Runs the experiment and writes its output to config.output, or to `out`
// when no path is set. Diagnostics go to `err`. Returns an ExitCode.
int run(const ExperimentConfig& config, std::ostream& out, std::ostream& err);

// One atom per line, "w x1 ... xdim"; '#' starts a comment.
DiscreteMeasure parse_measure(std::istream& in, const std::string& origin = "<stream>");
DiscreteMeasure read_measure_file(const std::string& path);

}  // namespace probdist::cli
