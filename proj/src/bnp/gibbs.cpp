#include "abcomm/bnp/gibbs.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "abcomm/error.hpp"

namespace abcomm::bnp {

CollapsedGibbs::CollapsedGibbs(const Eigen::MatrixXd& data, const NIWHyperparams& prior,
                               ClusterState state, GibbsOptions options)
    : data_(&data),
      prior_(&prior),
      state_(std::move(state)),
      options_(std::move(options)),
      empty_(prior) {
  prior.validate();
  if (data.cols() != prior.dimension()) throw DomainError("Gibbs: data/prior dimension mismatch");
  if (static_cast<Eigen::Index>(state_.labels.size()) != data.rows()) {
    throw DomainError("Gibbs: one label per observation required");
  }
  if (!(state_.alpha > 0.0)) throw DomainError("Gibbs: concentration must be > 0");
  compact(state_);
  clusters_.assign(static_cast<std::size_t>(state_.clusters), NiwCluster(prior));
  for (Eigen::Index i = 0; i < data.rows(); ++i) {
    clusters_[static_cast<std::size_t>(state_.labels[i])].add(data.row(i).transpose());
  }
}

void CollapsedGibbs::remove_cluster(int k) {
  clusters_.erase(clusters_.begin() + k);
  for (int& z : state_.labels) {
    if (z > k) --z;
  }
  --state_.clusters;
}

void CollapsedGibbs::sweep(Rng& rng) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const auto& data = *data_;
  for (Eigen::Index i = 0; i < data.rows(); ++i) {
    const auto y = data.row(i).transpose();
    const int old = state_.labels[i];
    clusters_[old].remove(y);
    if (clusters_[old].size() == 0) remove_cluster(old);

    const auto k_count = clusters_.size();
    log_weights_.resize(k_count + 1);
    try {
      for (std::size_t k = 0; k < k_count; ++k) {
        log_weights_[k] = std::log(static_cast<double>(clusters_[k].size())) +
                          clusters_[k].log_predictive(y);
      }
    } catch (const NumericalError& e) {
      throw NumericalError(std::string(e.what()) + " while seating observation " +
                           std::to_string(i));
    }
    log_weights_[k_count] = std::log(state_.alpha) + empty_.log_predictive(y);

    const double top = *std::max_element(log_weights_.begin(), log_weights_.end());
    probs_.resize(k_count + 1);
    double total = 0.0;
    for (std::size_t k = 0; k <= k_count; ++k) {
      probs_[k] = std::exp(log_weights_[k] - top);
      total += probs_[k];
    }
    for (auto& p : probs_) p /= total;
    if (options_.observer) options_.observer(static_cast<std::size_t>(i), probs_);

    double u = unif(rng);
    std::size_t pick = 0;
    for (; pick < k_count; ++pick) {
      u -= probs_[pick];
      if (u < 0.0) break;
    }
    if (pick == k_count) {
      clusters_.emplace_back(*prior_);
      ++state_.clusters;
    }
    clusters_[pick].add(y);
    state_.labels[i] = static_cast<int>(pick);
  }
  if (options_.resample_alpha) resample_alpha(rng);
  ++state_.iteration;
}

void CollapsedGibbs::resample_alpha(Rng& rng) {
  const double n = static_cast<double>(state_.labels.size());
  const double k = state_.clusters;
  const auto& hp = options_.alpha_prior;
  std::gamma_distribution<double> ga(state_.alpha + 1.0, 1.0);
  std::gamma_distribution<double> gb(n, 1.0);
  const double x = ga(rng);
  const double eta = x / (x + gb(rng));
  const double rate = hp.rate - std::log(eta);
  const double odds = (hp.shape + k - 1.0) / (n * rate);
  const double mix = odds / (1.0 + odds);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double shape = unif(rng) < mix ? hp.shape + k : hp.shape + k - 1.0;
  std::gamma_distribution<double> post(shape, 1.0 / rate);
  state_.alpha = std::max(post(rng), std::numeric_limits<double>::min());
}

double CollapsedGibbs::log_score() const {
  const auto m = state_.counts();
  double out = log_partition_prior(m, state_.alpha);
  for (const auto& c : clusters_) out += c.log_marginal_likelihood();
  return out;
}

ClusterState gibbs_sweep(const ClusterState& state, const Eigen::MatrixXd& data,
                         const NIWHyperparams& prior, Rng& rng, const GibbsOptions& options) {
  CollapsedGibbs sampler(data, prior, state, options);
  sampler.sweep(rng);
  return sampler.state();
}

std::span<const SweepRecord> ChainResult::retained(int burn_in) const {
  const auto skip = std::min(sweeps.size(), static_cast<std::size_t>(std::max(burn_in, 0)));
  return std::span<const SweepRecord>(sweeps).subspan(skip);
}

ChainResult run_chain(const Eigen::MatrixXd& data, const NIWHyperparams& prior,
                      const ChainOptions& options) {
  if (options.burn_in < 0 || options.sweeps <= options.burn_in) {
    throw DomainError("run_chain: require sweeps > burn_in >= 0");
  }
  Rng rng(options.seed);
  ClusterState init;
  init.alpha = options.alpha;
  init.labels.resize(static_cast<std::size_t>(data.rows()), 0);
  if (options.init == InitStrategy::uniform && data.rows() > 0) {
    std::uniform_int_distribution<int> pick(0, static_cast<int>(data.rows()) - 1);
    for (auto& z : init.labels) z = pick(rng);
  }
  compact(init);

  GibbsOptions gopt;
  gopt.resample_alpha = options.resample_alpha;
  gopt.alpha_prior = options.alpha_prior;
  CollapsedGibbs sampler(data, prior, std::move(init), gopt);

  ChainResult result;
  result.sweeps.reserve(static_cast<std::size_t>(options.sweeps));
  double best = -std::numeric_limits<double>::infinity();
  for (int j = 0; j < options.sweeps; ++j) {
    sampler.sweep(rng);
    SweepRecord rec;
    rec.sweep = j + 1;
    rec.clusters = sampler.state().clusters;
    rec.alpha = sampler.state().alpha;
    rec.log_score = sampler.log_score();
    const bool better = j >= options.burn_in && rec.log_score > best;
    if (better) {
      best = rec.log_score;
      result.map_index = result.sweeps.size();
      result.map_labels = sampler.state().labels;
      result.map_clusters = rec.clusters;
    }
    if (options.keep_labels) rec.labels = sampler.state().labels;
    result.sweeps.push_back(std::move(rec));
  }
  return result;
}

}  // namespace abcomm::bnp
