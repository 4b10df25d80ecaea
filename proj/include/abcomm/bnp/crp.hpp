#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace abcomm::bnp {

/// Gibbs sampler state. Labels are 0-based and compact: every label in
/// [0, K) is occupied.
struct ClusterState {
  std::vector<int> labels;
  int clusters = 0;
  double alpha = 1.0;
  int iteration = 0;

  /// m_k for k in [0, K).
  std::vector<int> counts() const;

  /// True when labels lie in [0, K) and every cluster is occupied.
  bool is_compact() const;
};

/// Relabels in order of first appearance and sets `clusters`.
void compact(ClusterState& state);

/// CRP conditional for one observation given the others: m_k / (R-1+a) for
/// each existing cluster, a / (R-1+a) for a new one (last entry). `counts`
/// must exclude the observation being reseated; R - 1 = sum(counts).
std::vector<double> crp_prior(std::span<const int> counts, double alpha);

/// Same, with observation `r` removed from `state` first. Clusters emptied
/// by the removal are dropped from the returned vector.
std::vector<double> crp_prior(const ClusterState& state, std::size_t r);

/// log Pr(Z | alpha) of a partition with block sizes `counts` in the
/// infinite-mixture limit: K log a + sum log (m_k-1)! + lgamma(a) - lgamma(R+a).
double log_partition_prior(std::span<const int> counts, double alpha);

/// Finite symmetric-Dirichlet version with `total_labels` labels, including
/// the K!/(K-K+)! count of labelings of the same partition.
double log_partition_prior_finite(std::span<const int> counts, double alpha, int total_labels);

}  // namespace abcomm::bnp
