#include <CLI11.hpp>

#include <iostream>

#include "probdist/cli/experiments.hpp"

namespace {

using probdist::cli::ExperimentConfig;

struct Subcommand {
  CLI::App* app;
  std::map<std::string, std::string> values;
  std::vector<std::string> sets;
};

const char* describe(const std::string& name) {
  static const std::map<std::string, const char*> text{
      {"dist", "Distance or divergence between two measure files"},
      {"landscape", "Loss landscape of a two-parameter family on a grid"},
      {"geodesic-check", "Constant-speed check along a curve between two measures"},
      {"convexity", "Mixture convexity, almost-convexity or the circle displacement probe"},
      {"rates", "Empirical convergence rates of W1 or ED^2"},
      {"sphere", "Nearest-neighbor distances for a high-dimensional sphere sample"},
      {"inequality", "ED^2 <= 2 W1 sweep with Dirac tightness"},
      {"minibatch-bias", "Bias of minibatch W1 and ED^2 estimates"},
  };
  const auto it = text.find(name);
  return it == text.end() ? "" : it->second;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"probdist: optimal transport and energy distance experiments"};
  app.require_subcommand(1);
  app.fallthrough();

  ExperimentConfig config;
  config.seed = probdist::cli::default_seed();
  std::string output;
  std::string format = "csv";
  app.add_option("--seed", config.seed, "Master seed (default: $PROBDIST_SEED or a fixed value)");
  app.add_option("--threads", config.threads, "Worker threads")->check(CLI::PositiveNumber);
  app.add_option("--output,-o", output, "Output file (default: stdout)");
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "json"}));

  std::map<std::string, Subcommand> subs;
  std::vector<std::string> dist_files;
  for (const auto& name : probdist::cli::experiment_names()) {
    auto& sub = subs[name];
    sub.app = app.add_subcommand(name, describe(name));
    for (const auto& [key, def] : probdist::cli::experiment_defaults(name)) {
      sub.app->add_option("--" + key, sub.values[key], def.empty() ? "" : "default: " + def);
    }
    sub.app->add_option("--set", sub.sets, "Override key=value")->type_name("KEY=VALUE");
  }
  auto* dist = subs["dist"].app;
  dist->add_option("files", dist_files, "Source and target measure files")->expected(0, 2);
  bool w1 = false, ed = false, tv = false;
  dist->add_flag("--w1", w1, "Shorthand for --distance w --p 1");
  dist->add_flag("--ed", ed, "Shorthand for --distance ed");
  dist->add_flag("--tv", tv, "Shorthand for --distance tv");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : probdist::cli::kExitConfigError;
  }

  for (auto& [name, sub] : subs) {
    if (!sub.app->parsed()) continue;
    config.experiment = name;
    for (const auto& [key, value] : sub.values) {
      if (sub.app->count("--" + key) > 0) config.params[key] = value;
    }
    for (const auto& kv : sub.sets) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) {
        std::cerr << "config error: --set expects KEY=VALUE, got '" << kv << "'\n";
        return probdist::cli::kExitConfigError;
      }
      config.params[kv.substr(0, eq)] = kv.substr(eq + 1);
    }
  }
  if (config.experiment == "dist") {
    if (w1 + ed + tv > 1) {
      std::cerr << "config error: --w1, --ed and --tv are exclusive\n";
      return probdist::cli::kExitConfigError;
    }
    if (w1) config.params.try_emplace("distance", "w");
    if (ed) config.params.try_emplace("distance", "ed");
    if (tv) config.params.try_emplace("distance", "tv");
    if (dist_files.size() == 2) {
      config.params["source"] = dist_files[0];
      config.params["target"] = dist_files[1];
    } else if (!dist_files.empty()) {
      std::cerr << "config error: dist takes exactly two measure files\n";
      return probdist::cli::kExitConfigError;
    }
  }
  if (!output.empty()) config.output = output;
  config.format = format == "json" ? probdist::cli::OutputFormat::kJson : probdist::cli::OutputFormat::kCsv;
  return probdist::cli::run(config, std::cout, std::cerr);
}
