#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "abcomm/traffic.hpp"

namespace abcomm::bnp {

/// Learned parameters of one traffic class.
struct TrafficPattern {
  int id = 0;                   // 1-based
  double busy_probability = 0;  // p_b
  double density = 0;           // zeta_k, points/m^2
  double portion = 0;           // l_k
  double airtime = 0;           // mean packet airtime mu_l, s
  double interarrival = 0;      // mu_i, s
  std::vector<int> member_pus;  // pu_id values
};

struct NetworkParamOptions {
  /// Observation slot; unset means each PU's own observed span.
  std::optional<double> slot;
  double link_rate = 54e6;  // bit/s
  double density = 0.03;    // total zeta
};

struct NetworkParams {
  std::vector<TrafficPattern> patterns;
  std::vector<std::string> warnings;
};

/// `labels[n]` is the 0-based class of the n-th PU in ascending pu_id order
/// (as produced by traffic::group_by_pu).
NetworkParams estimate_network_params(std::span<const int> labels,
                                      std::span<const traffic::TraceRecord> records,
                                      const NetworkParamOptions& options = {});

/// Per-PU label by majority over its R feature points (PU-major layout);
/// ties go to the smaller label. Result is compacted by first appearance.
std::vector<int> majority_labels(std::span<const int> point_labels, int num_pus, int observations);

/// Fraction of items whose predicted label maps to the true label under the
/// best one-to-one relabeling.
double matching_accuracy(std::span<const int> truth, std::span<const int> predicted);

}  // namespace abcomm::bnp
