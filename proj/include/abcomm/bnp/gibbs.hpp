#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "abcomm/bnp/crp.hpp"
#include "abcomm/bnp/niw.hpp"
#include "abcomm/rng.hpp"

namespace abcomm::bnp {

/// Gamma(shape, rate) hyperprior on the concentration, resampled with the
/// Escobar-West auxiliary-variable step.
struct ConcentrationPrior {
  double shape = 1.0;
  double rate = 1.0;
};

struct GibbsOptions {
  bool resample_alpha = true;
  ConcentrationPrior alpha_prior;
  /// Called with (observation index, normalized seating probabilities over
  /// existing clusters followed by a new one) before each draw.
  std::function<void(std::size_t, std::span<const double>)> observer;
};

/// Collapsed Gibbs sampler over the rows of `data` (one observation per row).
/// Keeps per-cluster sufficient statistics between sweeps.
class CollapsedGibbs {
 public:
  CollapsedGibbs(const Eigen::MatrixXd& data, const NIWHyperparams& prior, ClusterState state,
                 GibbsOptions options = {});

  /// Reseats every observation once, drops emptied clusters, then resamples
  /// the concentration when enabled.
  void sweep(Rng& rng);

  const ClusterState& state() const { return state_; }

  /// log Pr(Z | alpha) + sum_k log p(Y_k), i.e. the joint up to a constant.
  double log_score() const;

 private:
  void remove_cluster(int k);
  void resample_alpha(Rng& rng);

  const Eigen::MatrixXd* data_;
  const NIWHyperparams* prior_;
  ClusterState state_;
  GibbsOptions options_;
  std::vector<NiwCluster> clusters_;
  NiwCluster empty_;
  std::vector<double> log_weights_;
  std::vector<double> probs_;
};

/// One sweep on a standalone state (rebuilds sufficient statistics).
ClusterState gibbs_sweep(const ClusterState& state, const Eigen::MatrixXd& data,
                         const NIWHyperparams& prior, Rng& rng, const GibbsOptions& options = {});

enum class InitStrategy {
  uniform,     // z_r ~ Uniform{1..R}, then compacted
  one_cluster  // everything in a single cluster
};

struct ChainOptions {
  int sweeps = 500;
  int burn_in = 100;
  std::uint64_t seed = 1;
  double alpha = 1.0;
  bool resample_alpha = true;
  ConcentrationPrior alpha_prior;
  InitStrategy init = InitStrategy::uniform;
  bool keep_labels = true;  // store Z for every sweep
};

struct SweepRecord {
  int sweep = 0;
  int clusters = 0;
  double log_score = 0.0;
  double alpha = 0.0;
  std::vector<int> labels;  // empty unless keep_labels
};

struct ChainResult {
  std::vector<SweepRecord> sweeps;
  std::size_t map_index = 0;  // index into `sweeps`
  std::vector<int> map_labels;
  int map_clusters = 0;

  /// Records after burn-in.
  std::span<const SweepRecord> retained(int burn_in) const;
};

/// Runs `sweeps` Gibbs sweeps; the MAP is the retained sweep (index >=
/// burn_in) with the highest log score, earliest on ties.
ChainResult run_chain(const Eigen::MatrixXd& data, const NIWHyperparams& prior,
                      const ChainOptions& options);

}  // namespace abcomm::bnp
