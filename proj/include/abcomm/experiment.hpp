#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "abcomm/analytics/metrics.hpp"
#include "abcomm/bnp/gibbs.hpp"
#include "abcomm/bnp/network_params.hpp"
#include "abcomm/config.hpp"
#include "abcomm/traffic.hpp"

namespace abcomm {

/// PU-level classes from one classifier.
struct Classification {
  Classifier method = Classifier::oracle;
  std::vector<int> pu_ids;
  std::vector<int> pu_labels;  // 0-based, aligned with pu_ids
  int clusters = 0;            // distinct PU classes
  int point_clusters = 0;      // clusters among feature points (0 for oracle)
  std::vector<std::string> class_names;
  std::optional<bnp::ChainResult> chain;
};

/// Trace for sweep position `index` (synthetic traces are redrawn only
/// when the sweep changes class portions).
std::vector<traffic::TraceRecord> build_trace(const ExperimentConfig& config, std::size_t index = 0);

/// Synthetic pattern specs with the class density of `config.sweep_pattern`
/// set to `value` and the others rescaled to keep the total.
std::vector<traffic::PatternSpec> specs_for_density(const ExperimentConfig& config, double value);

Classification classify(std::span<const traffic::TraceRecord> records, const ExperimentConfig& config,
                        Classifier method);

std::vector<analytics::PatternInput> pattern_inputs(const bnp::NetworkParams& params,
                                                    const Classification& classes);

/// labels.csv, chain.csv (Gibbs only) and patterns.csv in `dir`.
void write_classification(const std::filesystem::path& dir, const Classification& classes,
                          const bnp::NetworkParams& params);

struct RunOptions {
  bool analytic = true;
  bool monte_carlo = true;
  std::string table = "results.csv";
};

struct RunSummary {
  std::filesystem::path table;
  std::size_t rows = 0;
  std::vector<std::string> warnings;
};

/// Runs the sweep and writes one row per (sweep value, classifier, rule,
/// class). The table is written as `<table>.partial` and renamed on success;
/// on failure the partial file stays and the error names the sweep value.
RunSummary run_experiment(const ExperimentConfig& config, const RunOptions& options = {});

}  // namespace abcomm
