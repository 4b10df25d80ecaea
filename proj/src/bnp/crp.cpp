#include "abcomm/bnp/crp.hpp"

#include <cmath>
#include <numeric>
#include <unordered_map>

#include "abcomm/error.hpp"

namespace abcomm::bnp {

std::vector<int> ClusterState::counts() const {
  std::vector<int> m(static_cast<std::size_t>(clusters), 0);
  for (int z : labels) ++m.at(static_cast<std::size_t>(z));
  return m;
}

bool ClusterState::is_compact() const {
  std::vector<int> m(static_cast<std::size_t>(clusters), 0);
  for (int z : labels) {
    if (z < 0 || z >= clusters) return false;
    ++m[static_cast<std::size_t>(z)];
  }
  for (int c : m) {
    if (c == 0) return false;
  }
  return true;
}

void compact(ClusterState& state) {
  std::unordered_map<int, int> remap;
  for (int& z : state.labels) {
    auto [it, inserted] = remap.try_emplace(z, static_cast<int>(remap.size()));
    z = it->second;
  }
  state.clusters = static_cast<int>(remap.size());
}

std::vector<double> crp_prior(std::span<const int> counts, double alpha) {
  if (!(alpha > 0.0)) throw DomainError("crp_prior: concentration must be > 0");
  const double seated = std::accumulate(counts.begin(), counts.end(), 0.0);
  const double denom = seated + alpha;
  std::vector<double> p;
  p.reserve(counts.size() + 1);
  for (int m : counts) p.push_back(m / denom);
  p.push_back(alpha / denom);
  return p;
}

std::vector<double> crp_prior(const ClusterState& state, std::size_t r) {
  auto m = state.counts();
  --m.at(static_cast<std::size_t>(state.labels.at(r)));
  std::vector<int> occupied;
  for (int c : m) {
    if (c > 0) occupied.push_back(c);
  }
  return crp_prior(occupied, state.alpha);
}

double log_partition_prior(std::span<const int> counts, double alpha) {
  if (!(alpha > 0.0)) throw DomainError("log_partition_prior: concentration must be > 0");
  double n = 0.0;
  double out = 0.0;
  for (int m : counts) {
    out += std::log(alpha) + std::lgamma(static_cast<double>(m));
    n += m;
  }
  return out + std::lgamma(alpha) - std::lgamma(n + alpha);
}

double log_partition_prior_finite(std::span<const int> counts, double alpha, int total_labels) {
  const int occupied = static_cast<int>(counts.size());
  if (total_labels < occupied) throw DomainError("finite prior: fewer labels than clusters");
  const double a = alpha / total_labels;
  double n = 0.0;
  double out = std::lgamma(total_labels + 1.0) - std::lgamma(total_labels - occupied + 1.0);
  for (int m : counts) {
    out += std::lgamma(m + a) - std::lgamma(a);
    n += m;
  }
  return out + std::lgamma(alpha) - std::lgamma(n + alpha);
}

}  // namespace abcomm::bnp
