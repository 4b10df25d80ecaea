#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace abcomm::traffic {

/// One captured packet.
struct TraceRecord {
  int pu_id = 0;
  double timestamp = 0.0;  // s
  double length = 0.0;     // bytes
  std::optional<int> true_pattern;  // 1-based; synthetic traces only
};

/// Moments of one traffic application.
struct PatternSpec {
  std::string name;
  double mean_length = 0.0;        // bytes
  double mean_interarrival = 0.0;  // s
  double length_variance = 0.0;    // bytes^2
  double portion = 0.0;            // l_k
};

/// Measured VoIP / Game / UDP means, with portions matching the densities
/// 0.005, 0.01 and 0.015 used for the reference scenario.
std::vector<PatternSpec> reference_patterns();

/// Packets of a single PU in timestamp order.
struct PuSeries {
  int pu_id = 0;
  std::vector<double> timestamps;
  std::vector<double> lengths;
  std::optional<int> true_pattern;
};

/// Parses `pu_id,timestamp,length[,true_pattern]` rows. An optional header
/// line starting with `pu_id` is skipped. Result is sorted by pu_id, then
/// timestamp (stable within equal timestamps).
std::vector<TraceRecord> parse_trace(std::istream& in);
std::vector<TraceRecord> parse_trace(const std::filesystem::path& path);

void write_trace(std::ostream& out, std::span<const TraceRecord> records);

/// Splits sorted records per PU, in ascending pu_id order.
std::vector<PuSeries> group_by_pu(std::span<const TraceRecord> records);

/// R x 3N feature matrix. Column block n holds (length, interarrival,
/// growing-window length variance) of the n-th PU in `pu_ids`.
struct ObservationMatrix {
  std::vector<int> pu_ids;
  Eigen::MatrixXd values;

  Eigen::Index observations() const { return values.rows(); }
  Eigen::Index pus() const { return static_cast<Eigen::Index>(pu_ids.size()); }

  /// (N*R) x 3 matrix of per-PU feature triples, PU-major: row n*R + r.
  Eigen::MatrixXd feature_points() const;
};

ObservationMatrix extract_features(std::span<const TraceRecord> records, int observations);

/// Header `pu<id>_len,pu<id>_iat,pu<id>_var`.
void write_observations_csv(std::ostream& out, const ObservationMatrix& obs);

/// Per-column z-score; zero-variance columns are only centered.
Eigen::MatrixXd standardize_columns(const Eigen::MatrixXd& x);

/// Draws N PUs, each assigned pattern k with probability l_k, and R + 1
/// packets per PU (R interarrival gaps).
std::vector<TraceRecord> synthesize_trace(std::span<const PatternSpec> specs, int num_pus,
                                          int observations, std::uint64_t seed);

}  // namespace abcomm::traffic
