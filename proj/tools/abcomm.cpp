// Command-line runner: classify, analyze, simulate, sweep, validate.

#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>
#include <json.hpp>

#include "abcomm/bnp/network_params.hpp"
#include "abcomm/config.hpp"
#include "abcomm/error.hpp"
#include "abcomm/experiment.hpp"

namespace {

struct Flags {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<long long> trials;
};

abcomm::ExperimentConfig load(const Flags& f) {
  std::ifstream in(f.config);
  if (!in) throw abcomm::ConfigError({"config: cannot open " + f.config});
  nlohmann::json raw;
  try {
    raw = nlohmann::json::parse(in, nullptr, true, true);
  } catch (const nlohmann::json::parse_error& e) {
    throw abcomm::ConfigError({std::string("config: ") + e.what()});
  }
  if (!raw.is_object()) throw abcomm::ConfigError({"<root>: expected a JSON object"});
  if (!f.out.empty()) raw["output_dir"] = f.out;
  if (f.seed) raw["seed"] = *f.seed;
  if (f.trials) raw["trials"] = *f.trials;
  return abcomm::validate_config(raw);
}

void report(const abcomm::RunSummary& s) {
  for (const auto& w : s.warnings) std::cerr << "warning: " << w << '\n';
  std::cout << s.table.string() << " (" << s.rows << " rows)\n";
}

int classify(const abcomm::ExperimentConfig& c) {
  const auto trace = abcomm::build_trace(c, 0);
  for (auto method : c.classifiers) {
    const auto classes = abcomm::classify(trace, c, method);
    const auto params = abcomm::bnp::estimate_network_params(classes.pu_labels, trace, c.network);
    for (const auto& w : params.warnings) std::cerr << "warning: " << w << '\n';
    const auto dir = c.output_dir / abcomm::to_string(method);
    abcomm::write_classification(dir, classes, params);
    std::cout << abcomm::to_string(method) << ": " << classes.clusters << " classes -> " << dir.string() << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Traffic-aware ambient backscatter experiments"};
  app.require_subcommand(1);
  Flags flags;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", flags.config, "Experiment JSON")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", flags.out, "Output directory (overrides output_dir)");
    sub->add_option("--seed", flags.seed, "Root seed (overrides seed)");
    sub->add_option("--trials", flags.trials, "Monte Carlo trials (overrides trials)");
  };
  auto* validate = app.add_subcommand("validate", "Check a config and print it normalized to SI units");
  auto* classify_cmd = app.add_subcommand("classify", "Classify PU traffic and estimate class parameters");
  auto* analyze = app.add_subcommand("analyze", "Analytic outage and coverage over the sweep");
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo outage and coverage over the sweep");
  auto* sweep = app.add_subcommand("sweep", "Analytic and Monte Carlo results over the sweep");
  for (auto* s : {validate, classify_cmd, analyze, simulate, sweep}) add_common(s);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    const auto config = load(flags);
    if (*validate) {
      auto echo = config.normalized;
      echo["config_hash"] = abcomm::hash_hex(abcomm::config_hash(config));
      std::cout << echo.dump(2) << '\n';
      if (!flags.out.empty()) {
        std::filesystem::create_directories(config.output_dir);
        std::ofstream(config.output_dir / "config.normalized.json") << echo.dump(2) << '\n';
      }
      return 0;
    }
    if (*classify_cmd) return classify(config);
    abcomm::RunOptions opt;
    if (*analyze) {
      opt.monte_carlo = false;
      opt.table = "analytics.csv";
    } else if (*simulate) {
      opt.analytic = false;
      opt.table = "simulation.csv";
    }
    report(abcomm::run_experiment(config, opt));
    return 0;
  } catch (const abcomm::ConfigError& e) {
    for (const auto& issue : e.issues()) std::cerr << "config error: " << issue << '\n';
    return 1;
  } catch (const abcomm::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return 2;
  } catch (const abcomm::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
