#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "abcomm/analytics/link_budget.hpp"
#include "abcomm/bnp/gibbs.hpp"
#include "abcomm/bnp/network_params.hpp"
#include "abcomm/error.hpp"
#include "abcomm/traffic.hpp"

namespace abcomm {

/// Every problem found while validating a configuration, one per entry,
/// each prefixed with the offending field.
class ConfigError : public ValidationError {
 public:
  explicit ConfigError(std::vector<std::string> issues);
  const std::vector<std::string>& issues() const noexcept { return issues_; }

 private:
  std::vector<std::string> issues_;
};

enum class TraceSource { synthetic, file };
enum class Classifier { oracle, gibbs, mean_shift };
enum class SweepAxis { path_loss, alpha, pattern_density };

const char* to_string(Classifier c);
const char* to_string(SweepAxis a);

struct ExperimentConfig {
  std::string name = "experiment";
  std::uint64_t seed = 1;
  long long trials = 100000;
  int threads = 1;
  std::filesystem::path output_dir = "out";

  TraceSource source = TraceSource::synthetic;
  std::filesystem::path trace_path;
  std::vector<traffic::PatternSpec> patterns;  // synthetic source
  int num_pus = 30;
  int observations = 50;

  std::vector<Classifier> classifiers{Classifier::oracle};
  bnp::ChainOptions gibbs;
  bool standardize = false;
  double mean_shift_bandwidth = 100.0;
  bnp::NetworkParamOptions network;

  analytics::LinkBudget budget = analytics::LinkBudget::reference();
  double window_radius = 30.0;
  double alpha = 0.0;

  SweepAxis axis = SweepAxis::path_loss;
  std::vector<double> values;
  std::string sweep_pattern;  // pattern_density axis: the class whose density varies

  nlohmann::json normalized;  // SI units, every field explicit
};

/// Converts unit-suffixed fields (dBm, dBi, dB, GHz, us) to SI and checks
/// every invariant. Missing fields take reference defaults.
ExperimentConfig validate_config(const nlohmann::json& raw);
ExperimentConfig load_config(const std::filesystem::path& path);

/// FNV-1a over the normalized JSON text.
std::uint64_t config_hash(const ExperimentConfig& config);
std::string hash_hex(std::uint64_t h);

}  // namespace abcomm
